"""State-finite automata without outputs and the primitive operations on them.

States and inputs carry string names, but everything is stored by position:
``table[s][x]`` is the index of the state reached from state ``s`` on input
``x``. Canonical orders and tie-breaks always follow the declared order.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence


class AutomatonError(ValueError):
    """Invalid input to an automaton operation."""

    code = "input"


def _check_names(kind: str, names: Sequence[str]) -> None:
    if not names:
        raise AutomatonError(f"{kind} set must be non-empty")
    seen = set()
    for name in names:
        if not isinstance(name, str) or not name or any(c.isspace() for c in name):
            raise AutomatonError(f"bad {kind} identifier {name!r}")
        if name in seen:
            raise AutomatonError(f"duplicate {kind} identifier {name!r}")
        seen.add(name)


@dataclass(frozen=True)
class Automaton:
    """A finite automaton ``(A, X, delta)`` with a total transition table."""

    states: tuple[str, ...]
    inputs: tuple[str, ...]
    table: tuple[tuple[int, ...], ...]
    _state_index: dict = field(init=False, repr=False, compare=False)
    _input_index: dict = field(init=False, repr=False, compare=False)
    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        states = tuple(self.states)
        inputs = tuple(self.inputs)
        table = tuple(tuple(row) for row in self.table)
        _check_names("state", states)
        _check_names("input", inputs)
        n, k = len(states), len(inputs)
        if len(table) != n or any(len(row) != k for row in table):
            raise AutomatonError(f"transition table must be {n}x{k}")
        for row in table:
            for t in row:
                if not isinstance(t, int) or not 0 <= t < n:
                    raise AutomatonError(f"transition target {t!r} out of range")
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "inputs", inputs)
        object.__setattr__(self, "table", table)
        object.__setattr__(self, "_state_index", {s: i for i, s in enumerate(states)})
        object.__setattr__(self, "_input_index", {x: i for i, x in enumerate(inputs)})
        object.__setattr__(self, "_hash", hash((states, inputs, table)))

    def __hash__(self):
        return self._hash

    @classmethod
    def from_transitions(cls, states: Iterable[str], inputs: Iterable[str],
                         delta: Mapping[tuple[str, str], str]) -> "Automaton":
        """Build from a ``{(state, input): state}`` mapping covering every pair."""
        states, inputs = tuple(states), tuple(inputs)
        sidx = {s: i for i, s in enumerate(states)}
        table = []
        for s in states:
            row = []
            for x in inputs:
                try:
                    target = delta[s, x]
                except KeyError:
                    raise AutomatonError(f"missing transition for ({s}, {x})") from None
                if target not in sidx:
                    raise AutomatonError(f"unknown target state {target!r}")
                row.append(sidx[target])
            table.append(tuple(row))
        extra = set(delta) - {(s, x) for s in states for x in inputs}
        if extra:
            raise AutomatonError(f"transitions for unknown pairs: {sorted(extra)}")
        return cls(states, inputs, tuple(table))

    @classmethod
    def from_table(cls, table: Sequence[Sequence[int]], states: Optional[Sequence[str]] = None,
                   inputs: Optional[Sequence[str]] = None) -> "Automaton":
        n = len(table)
        k = len(table[0]) if table else 0
        if states is None:
            states = tuple(f"s{i}" for i in range(n))
        if inputs is None:
            inputs = tuple(f"x{i}" for i in range(k))
        return cls(tuple(states), tuple(inputs), tuple(tuple(r) for r in table))

    def __len__(self):
        return len(self.states)

    def index(self, state: str) -> int:
        try:
            return self._state_index[state]
        except KeyError:
            raise AutomatonError(f"unknown state {state!r}") from None

    def input_index(self, letter: str) -> int:
        try:
            return self._input_index[letter]
        except KeyError:
            raise AutomatonError(f"unknown input {letter!r}") from None

    def delta(self, state: str, letter: str) -> str:
        return self.states[self.table[self.index(state)][self.input_index(letter)]]

    def names(self, indices: Iterable[int]) -> tuple[str, ...]:
        """State names for ``indices``, in canonical order."""
        return tuple(self.states[i] for i in sorted(indices))

    def indices(self, names: Iterable[str]) -> frozenset[int]:
        return frozenset(self.index(s) for s in names)

    def restrict(self, carrier: Iterable[int]) -> "Automaton":
        """The automaton on ``carrier`` with the restricted table (carrier must be closed)."""
        keep = sorted(carrier)
        pos = {s: i for i, s in enumerate(keep)}
        try:
            table = tuple(tuple(pos[t] for t in self.table[s]) for s in keep)
        except KeyError:
            raise AutomatonError("carrier is not closed under the transitions") from None
        return Automaton(tuple(self.states[s] for s in keep), self.inputs, table)


def run(A: Automaton, state: str, word: Sequence[str]) -> str:
    """Apply ``word`` letter by letter starting at ``state``.

    A plain string is read one character per letter.
    """
    s = A.index(state)
    for letter in word:
        s = A.table[s][A.input_index(letter)]
    return A.states[s]


# -- maps between automata -------------------------------------------------

@dataclass(frozen=True)
class StateMap:
    """A total map from the states of ``source`` to the states of ``target``."""

    source: Automaton
    target: Automaton
    images: tuple[int, ...]

    def __post_init__(self):
        images = tuple(self.images)
        if len(images) != len(self.source.states):
            raise AutomatonError("state map must be total on the source states")
        n = len(self.target.states)
        if any(not 0 <= i < n for i in images):
            raise AutomatonError("state map leaves the target state set")
        object.__setattr__(self, "images", images)

    @classmethod
    def from_dict(cls, source: Automaton, target: Automaton, mapping: Mapping[str, str]) -> "StateMap":
        missing = [s for s in source.states if s not in mapping]
        if missing:
            raise AutomatonError(f"state map undefined on {missing}")
        return cls(source, target, tuple(target.index(mapping[s]) for s in source.states))

    @classmethod
    def identity(cls, A: Automaton) -> "StateMap":
        return cls(A, A, tuple(range(len(A.states))))

    def __call__(self, state: str) -> str:
        return self.target.states[self.images[self.source.index(state)]]

    def as_dict(self) -> dict[str, str]:
        return {s: self.target.states[t] for s, t in zip(self.source.states, self.images)}

    def image(self) -> frozenset[int]:
        return frozenset(self.images)

    def then(self, other: "StateMap") -> "StateMap":
        """Apply ``self`` first, then ``other``."""
        if other.source != self.target:
            raise AutomatonError("maps do not compose: target and source differ")
        return StateMap(self.source, other.target, tuple(other.images[i] for i in self.images))


def _input_permutation(A: Automaton, B: Automaton) -> tuple[int, ...]:
    if set(A.inputs) != set(B.inputs):
        raise AutomatonError("automata have different input alphabets")
    return tuple(B.input_index(x) for x in A.inputs)


def is_homomorphism(m: StateMap) -> bool:
    """True iff ``m(delta(a, x)) == gamma(m(a), x)`` for every state and input."""
    perm = _input_permutation(m.source, m.target)
    src, tgt, img = m.source.table, m.target.table, m.images
    for a, row in enumerate(src):
        trow = tgt[img[a]]
        for x, b in enumerate(row):
            if img[b] != trow[perm[x]]:
                return False
    return True


def find_isomorphism(A: Automaton, B: Automaton) -> Optional[StateMap]:
    """The first isomorphism ``A -> B`` in canonical backtracking order, if any."""
    if len(A.states) != len(B.states) or set(A.inputs) != set(B.inputs):
        return None
    perm = _input_permutation(A, B)
    n = len(A.states)
    fwd = [-1] * n
    bwd = [-1] * n

    def assign(a: int, b: int, trail: list) -> bool:
        stack = [(a, b)]
        while stack:
            a, b = stack.pop()
            if fwd[a] == -1:
                if bwd[b] != -1:
                    return False
                fwd[a], bwd[b] = b, a
                trail.append(a)
                brow = B.table[b]
                for x, t in enumerate(A.table[a]):
                    stack.append((t, brow[perm[x]]))
            elif fwd[a] != b:
                return False
        return True

    def undo(trail):
        for a in trail:
            bwd[fwd[a]] = -1
            fwd[a] = -1

    def search(a: int) -> bool:
        while a < n and fwd[a] != -1:
            a += 1
        if a == n:
            return True
        for b in range(n):
            if bwd[b] != -1:
                continue
            trail: list = []
            if assign(a, b, trail) and search(a + 1):
                return True
            undo(trail)
        return False

    if not search(0):
        return None
    m = StateMap(A, B, tuple(fwd))
    inverse = StateMap(B, A, tuple(bwd))
    assert is_homomorphism(m) and is_homomorphism(inverse)
    return m


# -- subautomata -----------------------------------------------------------

def reach(A: Automaton, start: Iterable[int]) -> frozenset[int]:
    """States reachable from ``start`` by words of any length, ``start`` included."""
    seen = set(start)
    queue = deque(seen)
    table = A.table
    while queue:
        s = queue.popleft()
        for t in table[s]:
            if t not in seen:
                seen.add(t)
                queue.append(t)
    return frozenset(seen)


def is_closed(A: Automaton, carrier: Iterable[int]) -> bool:
    carrier = set(carrier)
    return all(t in carrier for s in carrier for t in A.table[s])


@dataclass(frozen=True)
class Subautomaton:
    """A non-empty set of states closed under every input."""

    parent: Automaton
    carrier: frozenset[int]

    def __post_init__(self):
        carrier = frozenset(self.carrier)
        if not carrier:
            raise AutomatonError("a subautomaton must be non-empty")
        if not is_closed(self.parent, carrier):
            raise AutomatonError(f"{self.parent.names(carrier)} is not closed")
        object.__setattr__(self, "carrier", carrier)

    @classmethod
    def of(cls, A: Automaton, states: Iterable[str]) -> "Subautomaton":
        return cls(A, A.indices(states))

    @property
    def states(self) -> tuple[str, ...]:
        return self.parent.names(self.carrier)

    def automaton(self) -> Automaton:
        return self.parent.restrict(self.carrier)

    def sort_key(self):
        return len(self.carrier), tuple(sorted(self.carrier))

    def __contains__(self, state: str) -> bool:
        return self.parent.index(state) in self.carrier

    def __le__(self, other: "Subautomaton") -> bool:
        return self.carrier <= other.carrier

    def __lt__(self, other: "Subautomaton") -> bool:
        return self.carrier < other.carrier

    def __len__(self):
        return len(self.carrier)

    def __str__(self):
        return "{" + ",".join(self.states) + "}"


def closed_sets(A: Automaton) -> list[frozenset[int]]:
    """All non-empty closed state sets, sorted by size then carrier."""
    gens = {reach(A, (s,)) for s in range(len(A.states))}
    found: set[frozenset[int]] = set()
    for g in gens:
        found |= {g | f for f in found}
        found.add(g)
    return sorted(found, key=lambda c: (len(c), sorted(c)))


def subautomata(A: Automaton) -> list[Subautomaton]:
    return [Subautomaton(A, c) for c in closed_sets(A)]


def generated(A: Automaton, state: str) -> Subautomaton:
    """The subautomaton generated by ``state``: everything reachable from it."""
    return Subautomaton(A, reach(A, (A.index(state),)))


def traps(A: Automaton) -> list[str]:
    return [A.states[s] for s, row in enumerate(A.table) if all(t == s for t in row)]


def kernel(A: Automaton) -> Optional[Subautomaton]:
    """The least subautomaton, if the intersection of all subautomata is non-empty."""
    common = frozenset(range(len(A.states)))
    for s in range(len(A.states)):
        common &= reach(A, (s,))
        if not common:
            return None
    return Subautomaton(A, common)


# -- quotients -------------------------------------------------------------

def block_labels(A: Automaton, blocks) -> tuple[int, ...]:
    labels = getattr(blocks, "labels", None)
    if labels is not None:
        if getattr(blocks, "automaton", A) != A:
            raise AutomatonError("congruence belongs to a different automaton")
        return tuple(labels)
    out = [-1] * len(A.states)
    for b, block in enumerate(blocks):
        block = list(block)
        if not block:
            raise AutomatonError("empty block in partition")
        for s in block:
            i = A.index(s)
            if out[i] != -1:
                raise AutomatonError(f"state {s!r} occurs in two blocks")
            out[i] = b
    if -1 in out:
        missing = [A.states[i] for i, b in enumerate(out) if b == -1]
        raise AutomatonError(f"partition misses states {missing}")
    return tuple(out)


def class_name(names: Sequence[str]) -> str:
    return names[0] if len(names) == 1 else "{" + ",".join(names) + "}"


def quotient(A: Automaton, congruence) -> tuple[Automaton, StateMap]:
    """The factor automaton ``A / congruence`` and the natural projection onto it.

    ``congruence`` is a ``Congruence`` or an iterable of blocks of state names.
    One-element classes keep their state name; larger classes are named
    ``{a,b,...}``.
    """
    labels = block_labels(A, congruence)
    order: dict[int, int] = {}
    for lab in labels:
        order.setdefault(lab, len(order))
    proj = tuple(order[lab] for lab in labels)
    m = len(order)
    members: list[list[int]] = [[] for _ in range(m)]
    for s, c in enumerate(proj):
        members[c].append(s)
    table = []
    for c in range(m):
        rows = {tuple(proj[t] for t in A.table[s]) for s in members[c]}
        if len(rows) != 1:
            raise AutomatonError("partition is not a congruence")
        table.append(rows.pop())
    names = [class_name([A.states[s] for s in mem]) for mem in members]
    taken = set()
    for i, name in enumerate(names):
        while name in taken:
            name += "'"
        names[i] = name
        taken.add(name)
    Q = Automaton(tuple(names), A.inputs, tuple(table))
    return Q, StateMap(A, Q, proj)


# -- partial automata ------------------------------------------------------

@dataclass(frozen=True)
class PartialAutomaton:
    """The states of ``base`` in ``carrier`` with transitions kept only inside ``carrier``."""

    base: Automaton
    carrier: frozenset[int]

    @property
    def states(self) -> tuple[str, ...]:
        return self.base.names(self.carrier)

    def delta(self, state: str, letter: str) -> Optional[str]:
        s = self.base.index(state)
        if s not in self.carrier:
            raise AutomatonError(f"{state!r} is not in the partial automaton")
        t = self.base.table[s][self.base.input_index(letter)]
        return self.base.states[t] if t in self.carrier else None


def partial_derived(A: Automaton) -> PartialAutomaton:
    """``A`` minus its unique trap; all of ``A`` when trivial or without a unique trap."""
    ts = traps(A)
    carrier = frozenset(range(len(A.states)))
    if len(A.states) > 1 and len(ts) == 1:
        carrier -= {A.index(ts[0])}
    return PartialAutomaton(A, carrier)


def is_partial_homomorphism(source: PartialAutomaton, target: PartialAutomaton,
                            mapping: Mapping[str, str]) -> bool:
    """Check that defined transitions of ``source`` map onto defined transitions of ``target``."""
    A, B = source.base, target.base
    perm = _input_permutation(A, B)
    img = {}
    for s in source.carrier:
        name = A.states[s]
        if name not in mapping:
            raise AutomatonError(f"partial map undefined on {name!r}")
        t = B.index(mapping[name])
        if t not in target.carrier:
            raise AutomatonError(f"{mapping[name]!r} is outside the target partial automaton")
        img[s] = t
    for s in source.carrier:
        for x, t in enumerate(A.table[s]):
            if t not in source.carrier:
                continue
            u = B.table[img[s]][perm[x]]
            if u not in target.carrier or u != img[t]:
                return False
    return True
