"""Tree-glued automata: specs, validation, building, ideals and recovery.

A spec glues a family of automata indexed by the nodes of a finite tree.
The least node carries a strongly connected automaton, every other node a
strongly trap connected one, and each cover edge ``hi > lo`` carries a
partial homomorphism from the trap-free part of ``hi`` into that of ``lo``.
The glued automaton lives on the disjoint union of the trap-free parts; a
transition that would fall into a trap is redone further down the tree.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional

from .automaton import (
    Automaton,
    AutomatonError,
    PartialAutomaton,
    StateMap,
    closed_sets,
    is_partial_homomorphism,
    kernel,
    partial_derived,
)
from .retract import RetractFamily, boolean_family
from .structure import (
    is_semi_connected,
    is_strongly_connected,
    is_strongly_trap_connected,
    principal_factor,
    r_classes,
)


class SpecError(AutomatonError):
    """A construction spec that fails validation; ``problems`` lists every violation."""

    code = "spec"

    def __init__(self, problems):
        self.problems = list(problems)
        super().__init__("invalid construction spec:\n  " + "\n  ".join(self.problems))


class VerificationFailure(AssertionError):
    pass


# -- trees -----------------------------------------------------------------

@dataclass(frozen=True)
class TreePoset:
    """A finite poset given by its cover edges ``(upper, lower)``.

    A valid tree has a least element and every other node has exactly one
    lower cover, so the down-set of any node is a chain.
    """

    nodes: tuple[str, ...]
    covers: tuple[tuple[str, str], ...]
    least: str

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "covers", tuple(tuple(c) for c in self.covers))

    def problems(self) -> list[str]:
        out = []
        if len(set(self.nodes)) != len(self.nodes):
            out.append("duplicate node ids")
        if not self.nodes:
            out.append("tree has no nodes")
        nodes = set(self.nodes)
        if self.least not in nodes:
            out.append(f"least element {self.least!r} is not a node")
        for hi, lo in self.covers:
            if hi not in nodes or lo not in nodes:
                out.append(f"cover {hi} > {lo} mentions an unknown node")
            if hi == lo:
                out.append(f"cover {hi} > {lo} is a loop")
        if len(set(self.covers)) != len(self.covers):
            out.append("duplicate cover edges")
        lower: dict[str, list[str]] = {}
        for hi, lo in self.covers:
            lower.setdefault(hi, []).append(lo)
        if lower.get(self.least):
            out.append(f"least element {self.least!r} has a lower cover")
        for i in self.nodes:
            if i == self.least:
                continue
            below = lower.get(i, [])
            if not below:
                out.append(f"node {i!r} is not above the least element")
            elif len(set(below)) > 1:
                out.append(f"node {i!r} has several lower covers {sorted(set(below))}: "
                           "its down-set is not a chain")
        if not out:
            for i in self.nodes:
                seen = {i}
                j = i
                while j != self.least:
                    j = lower[j][0]
                    if j in seen:
                        out.append(f"cover edges through {i!r} form a cycle")
                        break
                    seen.add(j)
        return out

    def parent(self, node: str) -> Optional[str]:
        for hi, lo in self.covers:
            if hi == node:
                return lo
        return None

    def children(self, node: str) -> list[str]:
        return [hi for i in self.nodes for hi, lo in self.covers if hi == i and lo == node]

    def down_chain(self, node: str) -> list[str]:
        """``node`` and everything below it, from the top down to the least element."""
        if node not in self.nodes:
            raise AutomatonError(f"unknown node {node!r}")
        chain = [node]
        while chain[-1] != self.least:
            p = self.parent(chain[-1])
            if p is None or p in chain:
                raise AutomatonError(f"node {node!r} does not descend to the least element")
            chain.append(p)
        return chain

    def leq(self, lower: str, upper: str) -> bool:
        return lower in self.down_chain(upper)

    def meet(self, i: str, j: str) -> str:
        """Greatest lower bound of two nodes."""
        below_j = set(self.down_chain(j))
        for k in self.down_chain(i):
            if k in below_j:
                return k
        raise AutomatonError("nodes have no common lower bound")


@dataclass(frozen=True)
class PosetIdeal:
    tree: TreePoset = field(repr=False)
    nodes: frozenset[str]

    def __str__(self):
        return "{" + ",".join(n for n in self.tree.nodes if n in self.nodes) + "}"


def ideals(tree: TreePoset) -> list[PosetIdeal]:
    """Every non-empty down-closed node set, sorted by size then by node order."""
    def rooted(node: str) -> list[frozenset[str]]:
        out = [frozenset({node})]
        for child in tree.children(node):
            out = out + [s | t for s in out for t in rooted(child)]
        return out

    pos = {n: i for i, n in enumerate(tree.nodes)}
    found = rooted(tree.least)
    found.sort(key=lambda s: (len(s), sorted(pos[n] for n in s)))
    return [PosetIdeal(tree, s) for s in found]


# -- specs -----------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ConstructionSpec:
    tree: TreePoset
    inputs: tuple[str, ...]
    components: Mapping[str, Automaton]
    phis: Mapping[tuple[str, str], Mapping[str, str]]

    def partial(self, node: str) -> PartialAutomaton:
        return partial_derived(self.components[node])

    def core_states(self, node: str) -> tuple[str, ...]:
        return self.partial(node).states


def glued_name(node: str, state: str) -> str:
    return f"{node}.{state}"


@dataclass
class CheckResult:
    name: str
    passed: bool = True
    details: list = field(default_factory=list)

    def fail(self, message: str) -> None:
        self.passed = False
        self.details.append(message)


@dataclass(frozen=True)
class ValidationReport:
    checks: tuple[CheckResult, ...]
    witnesses: Mapping[tuple[str, str], tuple[str, str]]

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def __getitem__(self, name: str) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def problems(self) -> list[str]:
        return [f"{c.name}: {d}" for c in self.checks if not c.passed for d in c.details]

    def raise_if_failed(self) -> None:
        if not self.ok:
            raise SpecError(self.problems())

    def __str__(self):
        lines = []
        for c in self.checks:
            lines.append(f"{c.name}: {'pass' if c.passed else 'FAIL'}")
            lines.extend(f"  {d}" for d in c.details)
        return "\n".join(lines)


def _exit_witness(spec: ConstructionSpec, hi: str, lo: str) -> Optional[tuple[str, str]]:
    Ahi, Alo = spec.components[hi], spec.components[lo]
    Phi, Plo = spec.partial(hi), spec.partial(lo)
    phi = spec.phis[hi, lo]
    for a in Phi.states:
        for x in spec.inputs:
            if Ahi.index(Ahi.delta(a, x)) in Phi.carrier:
                continue
            if Alo.index(Alo.delta(phi[a], x)) in Plo.carrier:
                return a, x
    return None


def validate_spec(spec: ConstructionSpec) -> ValidationReport:
    """Check tree shape, components, disjointness and conditions (i)-(iii)."""
    tree_check = CheckResult("tree")
    for p in spec.tree.problems():
        tree_check.fail(p)
    comp_check = CheckResult("components")
    usable = []
    for node in spec.tree.nodes:
        A = spec.components.get(node)
        if A is None:
            comp_check.fail(f"node {node!r} has no component")
        elif set(A.inputs) != set(spec.inputs):
            comp_check.fail(f"component {node!r} has inputs {list(A.inputs)}, expected {list(spec.inputs)}")
        else:
            usable.append(node)
    for node in spec.components:
        if node not in spec.tree.nodes:
            comp_check.fail(f"component {node!r} does not belong to a node")

    disjoint = CheckResult("disjoint")
    seen: dict[str, str] = {}
    for node in usable:
        for s in spec.components[node].states:
            g = glued_name(node, s)
            if g in seen:
                disjoint.fail(f"glued state name {g!r} is used by nodes {seen[g]!r} and {node!r}")
            seen[g] = node

    cond_i = CheckResult("condition (i)")
    for node in usable:
        A = spec.components[node]
        if node == spec.tree.least:
            if not is_strongly_connected(A):
                cond_i.fail(f"component {node!r} at the least node is not strongly connected")
        elif not is_strongly_trap_connected(A):
            cond_i.fail(f"component {node!r} is not strongly trap connected")

    cond_ii = CheckResult("condition (ii)")
    cond_iii = CheckResult("condition (iii)")
    witnesses = {}
    covers = set(spec.tree.covers)
    for key in spec.phis:
        if key not in covers:
            cond_ii.fail(f"map given for {key[0]} > {key[1]}, which is not a cover edge")
    for hi, lo in spec.tree.covers:
        if hi not in usable or lo not in usable:
            continue
        phi = spec.phis.get((hi, lo))
        if phi is None:
            cond_ii.fail(f"no map for cover {hi} > {lo}")
            continue
        try:
            ok = is_partial_homomorphism(spec.partial(hi), spec.partial(lo), phi)
        except AutomatonError as exc:
            cond_ii.fail(f"map {hi} > {lo}: {exc}")
            continue
        if not ok:
            cond_ii.fail(f"map {hi} > {lo} is not a partial homomorphism")
            continue
        w = _exit_witness(spec, hi, lo)
        if w is None:
            cond_iii.fail(f"cover {hi} > {lo}: no transition leaves {hi} and stays inside {lo}")
        else:
            witnesses[hi, lo] = w
            cond_iii.details.append(f"cover {hi} > {lo}: witness ({w[0]}, {w[1]})")
    checks = (tree_check, comp_check, disjoint, cond_i, cond_ii, cond_iii)
    return ValidationReport(checks, witnesses)


def compose_phi(spec: ConstructionSpec, upper: str, lower: str) -> dict[str, str]:
    """The composite of cover maps along the chain from ``upper`` down to ``lower``."""
    chain = spec.tree.down_chain(upper)
    if lower not in chain:
        raise AutomatonError(f"{lower!r} is not below {upper!r}")
    f = {s: s for s in spec.core_states(upper)}
    for hi, lo in zip(chain, chain[1:chain.index(lower) + 1]):
        g = spec.phis[hi, lo]
        f = {s: g[t] for s, t in f.items()}
    return f


@dataclass(frozen=True, eq=False)
class BuiltAutomaton:
    automaton: Automaton
    provenance: Mapping[str, tuple[str, str]]   # glued state -> (node, local state)
    spec: ConstructionSpec


def build(spec: ConstructionSpec, validate: bool = True) -> BuiltAutomaton:
    """Glue the spec into one automaton.

    From ``a`` in node ``i`` on input ``x`` the glued automaton moves like the
    greatest node ``j <= i`` whose component keeps ``Phi_ij(a)`` outside its
    trap on ``x``. The least node always qualifies.
    """
    if validate:
        validate_spec(spec).raise_if_failed()
    tree = spec.tree
    states, provenance = [], {}
    for node in tree.nodes:
        for s in spec.core_states(node):
            g = glued_name(node, s)
            states.append(g)
            provenance[g] = (node, s)
    index = {g: i for i, g in enumerate(states)}
    cores = {node: spec.partial(node).carrier for node in tree.nodes}
    table = []
    for g in states:
        node, s = provenance[g]
        chain = tree.down_chain(node)
        phis = [compose_phi(spec, node, j) for j in chain]
        row = []
        for x in spec.inputs:
            for j, phi in zip(chain, phis):
                C = spec.components[j]
                t = C.table[C.index(phi[s])][C.input_index(x)]
                if t in cores[j]:
                    row.append(index[glued_name(j, C.states[t])])
                    break
            else:
                raise AutomatonError(f"no node below {node!r} accepts ({s}, {x})")
        table.append(tuple(row))
    return BuiltAutomaton(Automaton(tuple(states), tuple(spec.inputs), tuple(table)),
                          provenance, spec)


def ideal_carrier(built: BuiltAutomaton, ideal: PosetIdeal) -> frozenset[int]:
    A = built.automaton
    return frozenset(i for i, g in enumerate(A.states) if built.provenance[g][0] in ideal.nodes)


def canonical_family(spec: ConstructionSpec, built: BuiltAutomaton) -> RetractFamily:
    """Retract maps induced by the ideals of the tree.

    For an ideal ``G``, a state of node ``i`` is sent through ``Phi`` down to
    the greatest node of ``G`` below ``i``. Raises ``VerificationFailure``
    when the ideal carriers are not exactly the subautomata of ``built``.
    """
    A = built.automaton
    tree = spec.tree
    ids = ideals(tree)
    carriers = [ideal_carrier(built, g) for g in ids]
    if sorted(carriers, key=sorted) != sorted(closed_sets(A), key=sorted) or len(set(carriers)) != len(ids):
        raise VerificationFailure("subautomata of the built automaton do not match the tree ideals")
    maps = {}
    for ideal, carrier in zip(ids, carriers):
        images = []
        for g in A.states:
            node, s = built.provenance[g]
            target = next(j for j in tree.down_chain(node) if j in ideal.nodes)
            images.append(A.index(glued_name(target, compose_phi(spec, node, target)[s])))
        maps[carrier] = StateMap(A, A, tuple(images))
    return RetractFamily(A, maps)


# -- recovery --------------------------------------------------------------

def _recover(A: Automaton) -> tuple[Optional[ConstructionSpec], str]:
    if kernel(A) is None:
        return None, "automaton has no kernel"
    if not is_semi_connected(A):
        return None, "automaton is not semi-connected"
    family = boolean_family(A)
    if family is None:
        return None, "automaton is not Boolean-type retractable"
    classes = r_classes(A)
    nodes = tuple(str(i) for i in range(len(classes)))
    covers = []
    components = {}
    phis = {}
    for i, (cls, gen) in enumerate(classes):
        rep = A.states[min(cls)]
        components[nodes[i]] = principal_factor(A, rep).factor
        rest = gen - cls
        if not rest:
            continue
        below = [j for j, (_, g) in enumerate(classes) if g <= rest]
        tops = [j for j in below if all(classes[h][1] <= classes[j][1] for h in below)]
        if len(tops) != 1 or classes[tops[0]][1] != rest:
            return None, "order of principal classes is not a tree"
        j = tops[0]
        covers.append((nodes[i], nodes[j]))
        lam = family[rest]
        phis[nodes[i], nodes[j]] = {A.states[s]: A.states[lam.images[s]] for s in sorted(cls)}
    roots = [i for i, (cls, gen) in enumerate(classes) if gen == cls]
    if len(roots) != 1:
        return None, "automaton has more than one minimal class"
    spec = ConstructionSpec(TreePoset(nodes, tuple(covers), nodes[roots[0]]), A.inputs,
                            components, phis)
    report = validate_spec(spec)
    if not report.ok:
        return None, "recovered spec is invalid: " + "; ".join(report.problems())
    return spec, ""


def recover_spec(A: Automaton) -> Optional[ConstructionSpec]:
    """A spec whose built automaton is isomorphic to ``A``, when ``A`` has that shape.

    Nodes are the mutual-generation classes, ordered by containment of the
    subautomata they generate; each node carries the principal factor of its
    class, and cover maps restrict a Boolean family's retracts onto the part
    strictly below the class.
    """
    return _recover(A)[0]


def recovery_obstacle(A: Automaton) -> Optional[str]:
    """Why ``recover_spec`` gives up on ``A``; ``None`` when it succeeds."""
    spec, reason = _recover(A)
    return None if spec is not None else reason
