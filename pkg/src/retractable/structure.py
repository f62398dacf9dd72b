"""Structural decompositions: direct sums, principal factors and dilations."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

from .automaton import (
    Automaton,
    AutomatonError,
    StateMap,
    Subautomaton,
    closed_sets,
    find_isomorphism,
    kernel,
    quotient,
    reach,
    traps,
)
from .congruence import rees
from .retract import RetractFamily, boolean_family

STRONGLY_CONNECTED = "strongly-connected"
STRONGLY_TRAP_CONNECTED = "strongly-trap-connected"
NEITHER = "neither"


class UnsupportedCase(AutomatonError):
    code = "unsupported"


# -- direct sums -----------------------------------------------------------

def direct_sum_components(A: Automaton) -> list[Subautomaton]:
    """The finest direct-sum decomposition: weak components of the transition graph."""
    n = len(A.states)
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for s, row in enumerate(A.table):
        for t in row:
            rs, rt = find(s), find(t)
            if rs != rt:
                parent[max(rs, rt)] = min(rs, rt)
    groups: dict[int, set[int]] = {}
    for s in range(n):
        groups.setdefault(find(s), set()).add(s)
    return [Subautomaton(A, frozenset(g)) for _, g in sorted(groups.items())]


# -- connectivity ----------------------------------------------------------

def _plus_reach(A: Automaton, s: int) -> frozenset[int]:
    """States reachable from ``s`` by a non-empty word."""
    return reach(A, A.table[s])


def is_strongly_connected(A: Automaton) -> bool:
    everything = frozenset(range(len(A.states)))
    return all(_plus_reach(A, s) == everything for s in range(len(A.states)))


def is_strongly_trap_connected(A: Automaton) -> bool:
    ts = traps(A)
    if len(ts) != 1:
        return False
    trap = A.index(ts[0])
    everything = frozenset(range(len(A.states)))
    return all(_plus_reach(A, s) == everything for s in range(len(A.states)) if s != trap)


def classify(A: Automaton) -> str:
    if is_strongly_connected(A):
        return STRONGLY_CONNECTED
    if is_strongly_trap_connected(A):
        return STRONGLY_TRAP_CONNECTED
    return NEITHER


# -- principal factors -----------------------------------------------------

@dataclass(frozen=True)
class PrincipalFactor:
    generator: str
    generated: Subautomaton             # R(a)
    r_class: tuple[str, ...]            # R_a
    remainder: Optional[Subautomaton]   # R[a]
    factor: Automaton                   # R{a}
    classification: str


def r_classes(A: Automaton) -> list[tuple[frozenset[int], frozenset[int]]]:
    """Pairs ``(class, generated set)`` of the mutual-generation relation.

    Sorted by size of the generated subautomaton, then by least member.
    """
    gens = [reach(A, (s,)) for s in range(len(A.states))]
    classes: dict[frozenset[int], set[int]] = {}
    for s, g in enumerate(gens):
        classes.setdefault(g, set()).add(s)
    out = [(frozenset(members), g) for g, members in classes.items()]
    return sorted(out, key=lambda p: (len(p[1]), min(p[0])))


def principal_factor(A: Automaton, state: str) -> PrincipalFactor:
    a = A.index(state)
    gen = reach(A, (a,))
    cls = frozenset(s for s in gen if reach(A, (s,)) == gen)
    rest = gen - cls
    R = Subautomaton(A, gen)
    sub = R.automaton()
    if rest:
        remainder = Subautomaton(A, rest)
        factor, _ = quotient(sub, rees(Subautomaton(sub, sub.indices(A.names(rest)))))
    else:
        remainder = None
        factor = sub
    return PrincipalFactor(state, R, A.names(cls), remainder, factor, classify(factor))


def principal_factors(A: Automaton) -> list[PrincipalFactor]:
    """One principal factor per class, generated by the least member of the class."""
    return [principal_factor(A, A.states[min(cls)]) for cls, _ in r_classes(A)]


def is_semi_connected(A: Automaton) -> bool:
    return all(f.classification != NEITHER for f in principal_factors(A))


# -- dilations -------------------------------------------------------------

@dataclass(frozen=True)
class Dilation:
    base: Subautomaton
    map: StateMap
    proper: bool


def is_dilation_map(A: Automaton, base: frozenset[int], images: Sequence[int]) -> bool:
    """``images`` maps onto ``base``, fixes it, and ``delta(a, x) == delta(images[a], x)``."""
    if set(images) != set(base) or any(images[b] != b for b in base):
        return False
    return all(A.table[a] == A.table[images[a]] for a in range(len(A.states)))


def dilation_base(A: Automaton) -> Dilation:
    """The minimal subautomaton that ``A`` is a dilation of, with the dilation map.

    Starts from everything reachable in one step (a closed set) and adds, in
    canonical order, each state whose transition row has no twin inside the
    current base. Every other state is sent to its smallest twin in the base.
    """
    table = A.table
    n = len(table)
    base = set(t for row in table for t in row)
    rows = {table[b] for b in base}
    for s in range(n):
        if table[s] not in rows:
            base.add(s)
            rows.add(table[s])
    first: dict[tuple[int, ...], int] = {}
    for s in sorted(base):
        first.setdefault(table[s], s)
    images = tuple(s if s in base else first[table[s]] for s in range(n))
    carrier = frozenset(base)
    return Dilation(Subautomaton(A, carrier), StateMap(A, A, images), len(carrier) < n)


def lift_family_through_dilation(A: Automaton, dilation: Dilation, base_family: RetractFamily,
                                 carriers=None) -> dict[frozenset[int], StateMap]:
    """Maps ``lambda_C . phi_dil`` on ``A`` for subautomata ``C`` of the base.

    ``base_family`` is a family on the base automaton (states named as in
    ``A``). ``carriers`` selects which subautomata to lift (index sets of
    ``A``); by default every subautomaton of ``A`` contained in the base.
    A requested carrier not inside the base raises ``UnsupportedCase``.
    """
    base = dilation.base.carrier
    if carriers is None:
        carriers = [c for c in closed_sets(A) if c <= base]
    B = base_family.automaton
    phi = dilation.map.images
    out = {}
    for c in carriers:
        c = frozenset(c)
        if not c <= base:
            raise UnsupportedCase("{%s} is not contained in the dilation base" % ",".join(A.names(c)))
        lam = base_family[A.names(c)]
        images = tuple(A.index(B.states[lam.images[B.index(A.states[phi[a]])]])
                       for a in range(len(A.states)))
        out[c] = StateMap(A, A, images)
    return out


# -- direct-sum families ---------------------------------------------------

def _kernel_chain(kernels: Sequence[Automaton],
                  adjacent: Optional[Sequence[Mapping[str, str]]] = None) -> list[list[dict[str, str]]]:
    """Isomorphisms between kernels ``i -> j`` composed from adjacent ones along the chain."""
    m = len(kernels)
    if adjacent is None:
        adjacent = []
        for i in range(m - 1):
            iso = find_isomorphism(kernels[i], kernels[i + 1])
            if iso is None:
                raise AutomatonError(f"kernels of components {i} and {i + 1} are not isomorphic")
            adjacent.append(iso.as_dict())
    up = [dict(f) for f in adjacent]
    down = [{v: k for k, v in f.items()} for f in up]
    chain = [[{} for _ in range(m)] for _ in range(m)]
    for i in range(m):
        ident = {s: s for s in kernels[i].states}
        for j in range(m):
            f = dict(ident)
            step = range(i, j) if i < j else range(i - 1, j - 1, -1)
            for h in step:
                g = up[h] if i < j else down[h]
                f = {s: g[t] for s, t in f.items()}
            chain[i][j] = f
    return chain


def direct_sum_family(A: Automaton, families: Optional[Sequence[RetractFamily]] = None,
                      isomorphisms: Optional[Sequence[Mapping[str, str]]] = None) -> RetractFamily:
    """Glue Boolean families of the direct-sum components into one for ``A``.

    For a subautomaton ``B`` meeting the components with indices ``I_B``
    (least ``i_B``), a state in component ``i`` goes through that
    component's map for ``B`` restricted to it when ``i`` is in ``I_B``,
    and otherwise through the retract onto the component kernel followed by
    the kernel isomorphism from ``i`` to ``i_B``.

    ``families`` are families on the component automata in component order
    (searched for when omitted); ``isomorphisms`` are kernel isomorphisms from
    component ``i`` to ``i + 1`` as name maps (found when omitted).
    """
    comps = direct_sum_components(A)
    autos = [c.automaton() for c in comps]
    if families is None:
        families = []
        for i, C in enumerate(autos):
            fam = boolean_family(C)
            if fam is None:
                raise AutomatonError(f"component {i} is not Boolean-type")
            families.append(fam)
    kernels = []
    for i, C in enumerate(autos):
        K = kernel(C)
        if K is None:
            raise AutomatonError(f"component {i} has no kernel")
        kernels.append(K)
    chain = _kernel_chain([K.automaton() for K in kernels], isomorphisms)

    owner = {}
    for i, c in enumerate(comps):
        for s in c.carrier:
            owner[s] = i
    maps = {}
    for carrier in closed_sets(A):
        parts = {i: frozenset(autos[i].index(A.states[s]) for s in carrier & comps[i].carrier)
                 for i in range(len(comps))}
        touched = [i for i, p in parts.items() if p]
        i_b = min(touched)
        images = []
        for s in range(len(A.states)):
            i = owner[s]
            C, fam = autos[i], families[i]
            local = C.index(A.states[s])
            if parts[i]:
                target = C.states[fam[parts[i]].images[local]]
            else:
                into_kernel = C.states[fam[kernels[i].carrier].images[local]]
                target = chain[i][i_b][into_kernel]
            images.append(A.index(target))
        maps[carrier] = StateMap(A, A, tuple(images))
    return RetractFamily(A, maps)


# -- report ----------------------------------------------------------------

@dataclass(frozen=True)
class StructureReport:
    automaton: Automaton
    components: tuple[Subautomaton, ...]
    kernels: tuple[Optional[Subautomaton], ...]
    kernel_isomorphisms: tuple[Optional[dict], ...]   # component i -> i + 1
    isomorphism_failure: Optional[tuple[int, int]]
    dilation: Dilation
    factors: tuple[PrincipalFactor, ...]
    semi_connected: bool

    @property
    def kernels_isomorphic(self) -> bool:
        return all(k is not None for k in self.kernels) and None not in self.kernel_isomorphisms

    def to_text(self) -> str:
        A = self.automaton
        lines = [f"automaton: {len(A.states)} states, {len(A.inputs)} inputs"]
        lines.append(f"direct-sum components: {len(self.components)}")
        for i, (c, k) in enumerate(zip(self.components, self.kernels)):
            lines.append(f"  [{i}] {c}  kernel: {k if k is not None else 'none'}")
        for i, iso in enumerate(self.kernel_isomorphisms):
            if iso is not None:
                pairs = " ".join(f"{a}->{b}" for a, b in iso.items())
                lines.append(f"  kernel iso [{i}]->[{i + 1}]: {pairs}")
        if self.isomorphism_failure is not None:
            i, j = self.isomorphism_failure
            lines.append(f"  kernels of [{i}] and [{j}] are not isomorphic")
        d = self.dilation
        lines.append(f"dilation base: {d.base}  proper: {'yes' if d.proper else 'no'}")
        moved = [f"{a}->{b}" for a, b in d.map.as_dict().items() if a != b]
        if moved:
            lines.append("  dilation map: " + " ".join(moved))
        lines.append("principal factors:")
        for f in self.factors:
            rest = str(f.remainder) if f.remainder is not None else "{}"
            lines.append(f"  R({f.generator})={f.generated}  class={{{','.join(f.r_class)}}}"
                         f"  rest={rest}  {f.classification}")
        lines.append(f"semi-connected: {'yes' if self.semi_connected else 'no'}")
        return "\n".join(lines) + "\n"

    def to_dot(self) -> str:
        from .dot import automaton_dot
        return automaton_dot(self.automaton, self.components,
                             [k for k in self.kernels if k is not None])


def analyze(A: Automaton) -> StructureReport:
    comps = direct_sum_components(A)
    autos = [c.automaton() for c in comps]
    kern_local = [kernel(C) for C in autos]
    kernels = tuple(None if K is None else Subautomaton(A, A.indices(K.states)) for K in kern_local)
    isos: list = []
    failure = None
    for i in range(len(comps) - 1):
        K1, K2 = kern_local[i], kern_local[i + 1]
        iso = None
        if K1 is not None and K2 is not None:
            found = find_isomorphism(K1.automaton(), K2.automaton())
            iso = found.as_dict() if found is not None else None
        if K1 is not None and K2 is not None and iso is None and failure is None:
            failure = (i, i + 1)
        isos.append(iso)
    factors = tuple(principal_factors(A))
    return StructureReport(A, tuple(comps), kernels, tuple(isos), failure, dilation_base(A),
                           factors, all(f.classification != NEITHER for f in factors))
