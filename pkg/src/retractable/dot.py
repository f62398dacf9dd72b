"""Graphviz DOT rendering of automata."""

from __future__ import annotations

from typing import Iterable, Optional, Sequence

from .automaton import Automaton, Subautomaton
from .congruence import hasse_dot

__all__ = ["automaton_dot", "hasse_dot", "quote"]


def quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def automaton_dot(A: Automaton, components: Optional[Sequence[Subautomaton]] = None,
                  kernels: Iterable[Subautomaton] = (), name: str = "automaton") -> str:
    """One node per state, one labelled edge per transition.

    Components become clusters and kernel states are drawn as double circles.
    """
    kernel_states = set()
    for k in kernels:
        kernel_states |= k.carrier
    if components is None:
        components = [Subautomaton(A, frozenset(range(len(A.states))))]
    lines = [f"digraph {quote(name)} {{", "  rankdir=LR;"]
    for i, comp in enumerate(components):
        lines.append(f"  subgraph cluster_{i} {{")
        lines.append(f"    label={quote(f'component {i}')};")
        for s in sorted(comp.carrier):
            shape = "doublecircle" if s in kernel_states else "circle"
            lines.append(f"    {quote(A.states[s])} [shape={shape}];")
        lines.append("  }")
    for s, row in enumerate(A.table):
        for x, t in enumerate(row):
            lines.append(f"  {quote(A.states[s])} -> {quote(A.states[t])} [label={quote(A.inputs[x])}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
