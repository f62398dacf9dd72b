"""Congruences of an automaton and the lattice they form.

A congruence is stored as a tuple of block labels in restricted-growth form:
``labels[s]`` is the number of the block holding state ``s``, blocks numbered
by their least member. Two congruences are equal iff their labels are equal.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Iterator, Sequence

from .automaton import (
    Automaton,
    AutomatonError,
    StateMap,
    Subautomaton,
    block_labels,
    is_homomorphism,
)

#: Above this many states ``all_congruences`` switches from partition filtering
#: to the join closure of principal congruences.
FILTER_LIMIT = 6


def canonical(labels: Sequence[int]) -> tuple[int, ...]:
    """Relabel blocks in order of first occurrence."""
    seen: dict[int, int] = {}
    return tuple(seen.setdefault(lab, len(seen)) for lab in labels)


def set_partitions(n: int) -> Iterator[tuple[int, ...]]:
    """All partitions of ``range(n)`` as restricted growth strings, in lexicographic order."""
    if n == 0:
        yield ()
        return
    labels = [0] * n

    def rec(i: int, top: int):
        if i == n:
            yield tuple(labels)
            return
        for lab in range(top + 2):
            labels[i] = lab
            yield from rec(i + 1, max(top, lab))

    labels[0] = 0
    yield from rec(1, 0)


def _compatible(table, labels) -> bool:
    rep: dict[int, tuple[int, ...]] = {}
    for s, lab in enumerate(labels):
        row = tuple(labels[t] for t in table[s])
        if rep.setdefault(lab, row) != row:
            return False
    return True


@dataclass(frozen=True)
class Congruence:
    automaton: Automaton = field(repr=False)
    labels: tuple[int, ...]

    @classmethod
    def from_blocks(cls, A: Automaton, blocks: Iterable[Iterable[str]]) -> "Congruence":
        labels = canonical(block_labels(A, blocks))
        if not _compatible(A.table, labels):
            raise AutomatonError("partition is not a congruence")
        return cls(A, labels)

    @classmethod
    def identity(cls, A: Automaton) -> "Congruence":
        return cls(A, tuple(range(len(A.states))))

    @classmethod
    def full(cls, A: Automaton) -> "Congruence":
        return cls(A, (0,) * len(A.states))

    @property
    def num_blocks(self) -> int:
        return max(self.labels) + 1

    def index_blocks(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.num_blocks)]
        for s, lab in enumerate(self.labels):
            out[lab].append(s)
        return out

    @property
    def blocks(self) -> tuple[tuple[str, ...], ...]:
        names = self.automaton.states
        return tuple(tuple(names[s] for s in b) for b in self.index_blocks())

    def related(self, a: str, b: str) -> bool:
        A = self.automaton
        return self.labels[A.index(a)] == self.labels[A.index(b)]

    def refines(self, other: "Congruence") -> bool:
        """``self`` is contained in ``other`` as a relation."""
        return refines(self.labels, other.labels)

    def __str__(self):
        return ",".join("{" + ",".join(b) + "}" for b in self.blocks)


def refines(fine: Sequence[int], coarse: Sequence[int]) -> bool:
    """Whether equal values in ``fine`` imply equal values in ``coarse``.

    Works on block labels and on map images alike, so it also decides
    ``Ker f <= Ker g`` for image tuples ``f``, ``g``.
    """
    seen: dict[int, int] = {}
    for f, c in zip(fine, coarse):
        if seen.setdefault(f, c) != c:
            return False
    return True


def is_congruence(A: Automaton, partition: Iterable[Iterable[str]]) -> bool:
    return _compatible(A.table, block_labels(A, partition))


def _check_same(alpha: Congruence, beta: Congruence) -> None:
    if alpha.automaton is not beta.automaton and alpha.automaton != beta.automaton:
        raise AutomatonError("congruences belong to different automata")


def _meet_labels(a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    return canonical(list(zip(a, b)))


def _join_labels(a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    n = len(a)
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for labels in (a, b):
        first: dict[int, int] = {}
        for s, lab in enumerate(labels):
            r = first.setdefault(lab, s)
            if r != s:
                ra, rb = find(r), find(s)
                if ra != rb:
                    parent[max(ra, rb)] = min(ra, rb)
    return canonical([find(s) for s in range(n)])


def meet(alpha: Congruence, beta: Congruence) -> Congruence:
    _check_same(alpha, beta)
    return Congruence(alpha.automaton, _meet_labels(alpha.labels, beta.labels))


def join(alpha: Congruence, beta: Congruence) -> Congruence:
    """Transitive closure of the union.

    Every operation of an automaton is unary, so the equivalence join of two
    congruences is already compatible and needs no further saturation.
    """
    _check_same(alpha, beta)
    return Congruence(alpha.automaton, _join_labels(alpha.labels, beta.labels))


def _principal_labels(table, n: int, a: int, b: int) -> tuple[int, ...]:
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    pending = [(a, b)]
    while pending:
        u, v = pending.pop()
        ru, rv = find(u), find(v)
        if ru == rv:
            continue
        parent[max(ru, rv)] = min(ru, rv)
        pending.extend(zip(table[u], table[v]))
    return canonical([find(s) for s in range(n)])


def principal_congruence(A: Automaton, a: str, b: str) -> Congruence:
    """The least congruence relating ``a`` and ``b``."""
    return Congruence(A, _principal_labels(A.table, len(A.states), A.index(a), A.index(b)))


def _sort_key(labels: tuple[int, ...]):
    return -(max(labels) + 1), labels


def congruence_labels(A: Automaton, strategy: str = "auto") -> list[tuple[int, ...]]:
    """Labels of every congruence of ``A``, identity first, full last."""
    n = len(A.states)
    if strategy == "auto":
        strategy = "filter" if n <= FILTER_LIMIT else "closure"
    if strategy == "filter":
        found = [p for p in set_partitions(n) if _compatible(A.table, p)]
    elif strategy == "closure":
        principals = {_principal_labels(A.table, n, a, b)
                      for a in range(n) for b in range(a + 1, n)}
        identity = tuple(range(n))
        seen = {identity}
        frontier = [identity]
        while frontier:
            nxt = []
            for c in frontier:
                for p in principals:
                    j = _join_labels(c, p)
                    if j not in seen:
                        seen.add(j)
                        nxt.append(j)
            frontier = nxt
        found = list(seen)
    else:
        raise AutomatonError(f"unknown enumeration strategy {strategy!r}")
    return sorted(found, key=_sort_key)


@dataclass(frozen=True, eq=False)
class CongruenceLattice:
    automaton: Automaton
    elements: tuple[Congruence, ...]
    leq: tuple[tuple[bool, ...], ...] = field(repr=False)

    @property
    def identity(self) -> Congruence:
        return self.elements[0]

    @property
    def full(self) -> Congruence:
        return self.elements[-1]

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, c) -> bool:
        return isinstance(c, Congruence) and c.automaton == self.automaton and c in self.elements

    def index(self, c: Congruence) -> int:
        if c not in self:
            raise AutomatonError(f"{c} is not an element of the lattice")
        return self.elements.index(c)

    def covers(self) -> list[tuple[int, int]]:
        """Covering pairs ``(i, j)``: element ``i`` lies directly below element ``j``."""
        m = len(self.elements)
        out = []
        for i in range(m):
            for j in range(m):
                if i == j or not self.leq[i][j]:
                    continue
                if not any(k != i and k != j and self.leq[i][k] and self.leq[k][j] for k in range(m)):
                    out.append((i, j))
        return out


def all_congruences(A: Automaton, strategy: str = "auto") -> CongruenceLattice:
    elements = tuple(Congruence(A, lab) for lab in congruence_labels(A, strategy))
    leq = tuple(tuple(refines(a.labels, b.labels) for b in elements) for a in elements)
    return CongruenceLattice(A, elements, leq)


def rees(B: Subautomaton) -> Congruence:
    """Collapse the carrier of ``B`` to one block, everything else singleton."""
    n = len(B.parent.states)
    first = min(B.carrier)
    return Congruence(B.parent, canonical([first if s in B.carrier else s for s in range(n)]))


def complements(L: CongruenceLattice, alpha: Congruence) -> list[Congruence]:
    L.index(alpha)
    n = len(L.automaton.states)
    bottom, top = tuple(range(n)), (0,) * n
    return [beta for beta in L.elements
            if _meet_labels(alpha.labels, beta.labels) == bottom
            and _join_labels(alpha.labels, beta.labels) == top]


def has_complement(lattice_labels: Sequence[tuple[int, ...]], alpha: Sequence[int]) -> bool:
    n = len(alpha)
    bottom, top = tuple(range(n)), (0,) * n
    return any(_meet_labels(alpha, b) == bottom and _join_labels(alpha, b) == top
               for b in lattice_labels)


@dataclass(frozen=True)
class LatticeClass:
    complemented: bool
    distributive: bool
    boolean_algebra: bool


def lattice_class(L: CongruenceLattice) -> LatticeClass:
    labels = [c.labels for c in L.elements]
    pos = {lab: i for i, lab in enumerate(labels)}
    m = len(labels)
    mt = [[pos[_meet_labels(labels[i], labels[j])] for j in range(m)] for i in range(m)]
    jn = [[pos[_join_labels(labels[i], labels[j])] for j in range(m)] for i in range(m)]
    bottom, top = 0, m - 1
    complemented = all(any(mt[i][j] == bottom and jn[i][j] == top for j in range(m))
                       for i in range(m))
    distributive = all(mt[a][jn[b][c]] == jn[mt[a][b]][mt[a][c]]
                       for a, b, c in product(range(m), repeat=3))
    return LatticeClass(complemented, distributive, complemented and distributive)


def kernel_of_map(m: StateMap) -> Congruence:
    """The congruence ``{(a, b) : m(a) == m(b)}``."""
    if not is_homomorphism(m):
        raise AutomatonError("kernel_of_map needs a homomorphism")
    return Congruence(m.source, canonical(m.images))


def _dot_quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def hasse_dot(L: CongruenceLattice, name: str = "congruences") -> str:
    """Hasse diagram of the refinement order as DOT text, finer congruences at the bottom."""
    lines = [f"digraph {_dot_quote(name)} {{", "  rankdir=BT;", "  node [shape=box];"]
    for i, c in enumerate(L.elements):
        lines.append(f"  c{i} [label={_dot_quote(str(c))}];")
    for i, j in L.covers():
        lines.append(f"  c{i} -> c{j} [arrowhead=none];")
    lines.append("}")
    return "\n".join(lines) + "\n"
