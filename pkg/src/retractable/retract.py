"""Retract homomorphisms, retractability and Boolean-type families.

A retract homomorphism onto a subautomaton ``B`` is represented as an
endomorphism of the parent automaton (a ``StateMap`` from ``A`` to ``A``)
whose image is exactly ``B`` and which fixes ``B`` pointwise.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Union

from .automaton import (
    Automaton,
    AutomatonError,
    StateMap,
    Subautomaton,
    closed_sets,
    is_homomorphism,
)
from .congruence import congruence_labels, has_complement, rees, refines

Carrier = frozenset


def retract_images(A: Automaton, carrier: frozenset[int], first_only: bool = False) -> list[tuple[int, ...]]:
    """Image tuples of every homomorphism ``A -> A`` that fixes ``carrier`` and maps into it.

    Backtracks over free states in canonical order; assigning ``phi(s) = v``
    forces ``phi(delta(s, x)) = delta(v, x)`` for every input, which is
    propagated eagerly. Results come out in lexicographic order.
    """
    table = A.table
    n = len(table)
    phi = [-1] * n
    for b in carrier:
        phi[b] = b
    free = [s for s in range(n) if s not in carrier]
    targets = sorted(carrier)
    out: list[tuple[int, ...]] = []

    def assign(s: int, v: int, trail: list) -> bool:
        stack = [(s, v)]
        while stack:
            s, v = stack.pop()
            cur = phi[s]
            if cur == -1:
                phi[s] = v
                trail.append(s)
                stack.extend(zip(table[s], table[v]))
            elif cur != v:
                return False
        return True

    def rec(i: int) -> bool:
        while i < len(free) and phi[free[i]] != -1:
            i += 1
        if i == len(free):
            out.append(tuple(phi))
            return first_only
        s = free[i]
        for v in targets:
            trail: list = []
            if assign(s, v, trail) and rec(i + 1):
                return True
            for t in trail:
                phi[t] = -1
        return False

    rec(0)
    return out


def retract_homomorphisms(A: Automaton, B: Subautomaton) -> list[StateMap]:
    """All homomorphisms of ``A`` onto ``B`` that leave ``B`` fixed, in canonical order."""
    if B.parent != A:
        raise AutomatonError("subautomaton belongs to a different automaton")
    return [StateMap(A, A, img) for img in retract_images(A, B.carrier)]


def _carrier(A: Automaton, key) -> frozenset[int]:
    if isinstance(key, Subautomaton):
        return key.carrier
    key = frozenset(key)
    if all(isinstance(k, int) for k in key):
        return key
    return A.indices(key)


@dataclass(frozen=True, eq=False)
class RetractFamily:
    """One retract homomorphism per subautomaton, keyed by carrier."""

    automaton: Automaton
    maps: Mapping[frozenset[int], StateMap] = field(repr=False)

    @classmethod
    def from_images(cls, A: Automaton, images: Mapping[frozenset[int], tuple[int, ...]]) -> "RetractFamily":
        return cls(A, {c: StateMap(A, A, img) for c, img in images.items()})

    def __getitem__(self, key: Union[Subautomaton, Iterable]) -> StateMap:
        return self.maps[_carrier(self.automaton, key)]

    def __len__(self):
        return len(self.maps)

    def carriers(self) -> list[frozenset[int]]:
        return sorted(self.maps, key=lambda c: (len(c), sorted(c)))

    def violations(self, boolean: bool = True) -> list[str]:
        """Broken invariants, as human-readable lines; empty when the family is sound.

        Checks one map per subautomaton, each a homomorphism fixing its
        carrier with image equal to it, and (when ``boolean``) that
        ``B1 <= B2`` implies ``Ker lambda_B2 <= Ker lambda_B1``.
        """
        A = self.automaton
        problems = []
        expected = set(closed_sets(A))
        if set(self.maps) != expected:
            problems.append("family does not have exactly one map per subautomaton")
        for c, m in self.maps.items():
            label = "{" + ",".join(A.names(c)) + "}"
            if m.source != A or m.target != A:
                problems.append(f"map for {label} is not an endomap of the automaton")
                continue
            if not is_homomorphism(m):
                problems.append(f"map for {label} is not a homomorphism")
            if any(m.images[b] != b for b in c):
                problems.append(f"map for {label} does not fix its carrier")
            if m.image() != c:
                problems.append(f"map for {label} is not onto its carrier")
        if boolean:
            for c1 in self.maps:
                for c2 in self.maps:
                    if c1 < c2 and not refines(self.maps[c2].images, self.maps[c1].images):
                        problems.append("Ker of map for {%s} is not inside Ker of map for {%s}"
                                        % (",".join(A.names(c2)), ",".join(A.names(c1))))
        return problems

    def is_boolean(self) -> bool:
        return not self.violations(boolean=True)


@dataclass(frozen=True)
class Certificate:
    """Outcome of a decision procedure, truthy iff the property holds.

    A positive answer carries a family of retract homomorphisms, a negative
    one a witness subautomaton or a reason.
    """

    holds: bool
    family: Optional[RetractFamily] = None
    witness: Optional[Subautomaton] = None
    reason: str = ""

    def __bool__(self):
        return self.holds


def _first_retracts(A: Automaton, carriers) -> tuple[dict, Optional[frozenset[int]]]:
    chosen = {}
    for c in carriers:
        found = retract_images(A, c, first_only=True)
        if not found:
            return chosen, c
        chosen[c] = found[0]
    return chosen, None


def is_retractable(A: Automaton) -> Certificate:
    """Whether every subautomaton of ``A`` is a retract subautomaton."""
    chosen, bad = _first_retracts(A, closed_sets(A))
    if bad is not None:
        return Certificate(False, witness=Subautomaton(A, bad),
                           reason="subautomaton admits no retract homomorphism")
    return Certificate(True, family=RetractFamily.from_images(A, chosen))


def _search_family(A: Automaton) -> tuple[Optional[dict], Optional[frozenset[int]]]:
    # Largest subautomata first: the kernel constraint only flows from a
    # subautomaton to the ones it contains, so every superset is fixed first.
    carriers = sorted(closed_sets(A), key=lambda c: (-len(c), sorted(c)))
    options = []
    for c in carriers:
        found = retract_images(A, c)
        if not found:
            return None, c
        options.append(found)
    m = len(carriers)
    # Direct supersets suffice: containment of kernels is transitive.
    supers = []
    for i, c in enumerate(carriers):
        above = [j for j in range(i) if c < carriers[j]]
        supers.append([j for j in above
                       if not any(carriers[j] > carriers[h] for h in above if h != j)])
    chosen: list = [None] * m

    def rec(i: int) -> bool:
        if i == m:
            return True
        for img in options[i]:
            if all(refines(chosen[j], img) for j in supers[i]):
                chosen[i] = img
                if rec(i + 1):
                    return True
        chosen[i] = None
        return False

    if not rec(0):
        return None, None
    return dict(zip(carriers, chosen)), None


def boolean_family(A: Automaton) -> Optional[RetractFamily]:
    """A family of retract homomorphisms witnessing Boolean type, or ``None``."""
    images, _ = _search_family(A)
    return None if images is None else RetractFamily.from_images(A, images)


def boolean_certificate(A: Automaton) -> Certificate:
    images, bad = _search_family(A)
    if images is not None:
        return Certificate(True, family=RetractFamily.from_images(A, images))
    if bad is not None:
        return Certificate(False, witness=Subautomaton(A, bad),
                           reason="subautomaton admits no retract homomorphism")
    return Certificate(False, reason="every choice of retract homomorphisms breaks kernel monotonicity")


def is_boolean_type(A: Automaton) -> bool:
    return _search_family(A)[0] is not None


@dataclass(frozen=True)
class ReesRetractRow:
    subautomaton: Subautomaton
    rees_has_complement: bool
    is_retract: bool

    @property
    def agrees(self) -> bool:
        return self.rees_has_complement == self.is_retract


def check_rees_retract(A: Automaton) -> list[ReesRetractRow]:
    """Per subautomaton: does its Rees congruence have a complement, and is it a retract?

    The two answers should always coincide; ``[r for r in rows if not r.agrees]``
    lists any disagreement.
    """
    lattice = congruence_labels(A)
    rows = []
    for c in closed_sets(A):
        B = Subautomaton(A, c)
        rows.append(ReesRetractRow(B, has_complement(lattice, rees(B).labels),
                                bool(retract_images(A, c, first_only=True))))
    return rows


@dataclass(frozen=True)
class NestedRetractViolation:
    inner: frozenset[int]
    outer: frozenset[int]
    state: int


def check_nested_retracts(family: RetractFamily) -> list[NestedRetractViolation]:
    """For ``D <= B`` and ``lambda_B(a)`` in ``D``, check ``lambda_B(a) == lambda_D(a)``."""
    broken = family.violations(boolean=True)
    if broken:
        raise AutomatonError("not a Boolean family: " + "; ".join(broken))
    out = []
    maps = family.maps
    for d in maps:
        for b in maps:
            if not d <= b:
                continue
            lam_b, lam_d = maps[b].images, maps[d].images
            for a, v in enumerate(lam_b):
                if v in d and lam_d[a] != v:
                    out.append(NestedRetractViolation(d, b, a))
    return out
