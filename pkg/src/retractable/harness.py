"""Exhaustive and seeded-random verification of the structural characterisations.

Random sampling uses numpy's PCG64 generator: ``numpy.random.Generator(PCG64(seed))``,
drawing each transition target independently and uniformly with
``integers(0, n, size=n * k)``, row by row (state-major).
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Optional

import numpy as np

from .automaton import (
    Automaton,
    AutomatonError,
    closed_sets,
    find_isomorphism,
    is_partial_homomorphism,
    kernel,
    partial_derived,
)
from .construction import (
    ConstructionSpec,
    TreePoset,
    VerificationFailure,
    build,
    canonical_family,
    glued_name,
    ideal_carrier,
    ideals,
    recover_spec,
    validate_spec,
)
from .retract import boolean_family, check_nested_retracts, check_rees_retract, is_retractable
from .structure import (
    dilation_base,
    direct_sum_components,
    direct_sum_family,
    is_semi_connected,
    is_strongly_connected,
    is_strongly_trap_connected,
)
from .textio import format_automaton

log = logging.getLogger(__name__)

CHECKS = (
    "rees_complement",
    "direct_sum_retractable",
    "direct_sum_boolean",
    "direct_sum_family",
    "dilation_retractable",
    "dilation_boolean",
    "nested_retracts",
    "retractable_eq_boolean",
    "roundtrip",
)

DEFAULT_MAX_STATES = 4
DEFAULT_MAX_INPUTS = 2


class BudgetExceeded(AutomatonError):
    code = "budget"


def state_names(n: int) -> tuple[str, ...]:
    return tuple(f"s{i}" for i in range(n))


def input_names(k: int) -> tuple[str, ...]:
    return tuple(f"x{i}" for i in range(k))


def _from_flat(flat, n: int, k: int, states, inputs) -> Automaton:
    table = tuple(tuple(flat[s * k:(s + 1) * k]) for s in range(n))
    return Automaton(states, inputs, table)


def enumerate_automata(n: int, k: int) -> Iterator[Automaton]:
    """Every automaton on ``n`` states and ``k`` inputs, tables in lexicographic order."""
    if n < 1 or k < 1:
        raise AutomatonError("need at least one state and one input")
    states, inputs = state_names(n), input_names(k)
    for flat in itertools.product(range(n), repeat=n * k):
        yield _from_flat(flat, n, k, states, inputs)


def random_automata(n: int, k: int, count: int, seed: int) -> Iterator[Automaton]:
    rng = np.random.Generator(np.random.PCG64(seed))
    states, inputs = state_names(n), input_names(k)
    for _ in range(count):
        flat = [int(v) for v in rng.integers(0, n, size=n * k)]
        yield _from_flat(flat, n, k, states, inputs)


def exhaustive_size(max_states: int, max_inputs: int) -> int:
    return sum(n ** (n * k) for n in range(1, max_states + 1) for k in range(1, max_inputs + 1))


def exhaustive_suite(max_states: int = DEFAULT_MAX_STATES,
                     max_inputs: int = DEFAULT_MAX_INPUTS) -> Iterator[Automaton]:
    for n in range(1, max_states + 1):
        for k in range(1, max_inputs + 1):
            yield from enumerate_automata(n, k)


# -- per-automaton checks --------------------------------------------------

class _Predicates:
    """Retractable / Boolean-type answers memoised by transition table."""

    def __init__(self):
        self.memo: dict = {}

    def __call__(self, A: Automaton) -> tuple[bool, bool]:
        key = A.table
        hit = self.memo.get(key)
        if hit is None:
            hit = (bool(is_retractable(A)), boolean_family(A) is not None)
            self.memo[key] = hit
        return hit


def check_automaton(A: Automaton, predicates: Optional[_Predicates] = None) -> dict[str, Optional[bool]]:
    """Run every statement-level check on ``A``.

    Values are ``True``/``False`` for pass/fail and ``None`` where a check
    does not apply (for instance the family checks on non-Boolean automata).
    """
    predicates = predicates or _Predicates()
    out: dict[str, Optional[bool]] = dict.fromkeys(CHECKS)
    out["rees_complement"] = all(row.agrees for row in check_rees_retract(A))

    retractable = bool(is_retractable(A))
    family = boolean_family(A)
    boolean = family is not None
    predicates.memo[A.table] = (retractable, boolean)
    out["retractable_eq_boolean"] = retractable == boolean

    comps = direct_sum_components(A)
    autos = [A] if len(comps) == 1 else [c.automaton() for c in comps]
    answers = [predicates(C) for C in autos]
    kernels = [kernel(C) for C in autos]
    isomorphic = all(K is not None for K in kernels) and all(
        find_isomorphism(kernels[i].automaton(), kernels[i + 1].automaton()) is not None
        for i in range(len(kernels) - 1))
    out["direct_sum_retractable"] = retractable == (all(r for r, _ in answers) and isomorphic)
    out["direct_sum_boolean"] = boolean == (all(b for _, b in answers) and isomorphic)

    if boolean:
        families = [family] if len(comps) == 1 else None
        glued = direct_sum_family(A, families)
        out["direct_sum_family"] = glued.is_boolean()
        out["nested_retracts"] = not check_nested_retracts(family) and not check_nested_retracts(glued)

    dil = dilation_base(A)
    base = dil.base.automaton() if dil.proper else A
    semi = is_semi_connected(base)
    base_retractable, base_boolean = predicates(base)
    out["dilation_retractable"] = retractable == (semi and base_retractable)
    out["dilation_boolean"] = boolean == (semi and base_boolean)

    semi_a = semi if not dil.proper else is_semi_connected(A)
    if boolean and semi_a and len(comps) == 1 and kernels[0] is not None:
        spec = recover_spec(A)
        out["roundtrip"] = spec is not None and find_isomorphism(build(spec).automaton, A) is not None
    return out


# -- runs ------------------------------------------------------------------

@dataclass
class VerificationRun:
    max_states: int
    max_inputs: int
    mode: str
    count: Optional[int] = None
    seed: Optional[int] = None
    visited: int = 0
    tallies: dict = field(default_factory=lambda: {c: [0, 0] for c in CHECKS})
    counterexamples: list = field(default_factory=list)   # (check, Automaton)

    @property
    def ok(self) -> bool:
        return not self.counterexamples

    def record(self, A: Automaton, results: dict) -> bool:
        self.visited += 1
        clean = True
        for name, value in results.items():
            if value is None:
                continue
            self.tallies[name][0 if value else 1] += 1
            if not value:
                self.counterexamples.append((name, A))
                clean = False
        return clean

    def sorted_counterexamples(self) -> list:
        return sorted(self.counterexamples,
                      key=lambda p: (p[0], len(p[1].states), len(p[1].inputs), p[1].table))

    def summary(self) -> str:
        head = f"mode={self.mode} states<={self.max_states} inputs<={self.max_inputs}"
        if self.mode == "random":
            head = f"mode=random states={self.max_states} inputs={self.max_inputs} count={self.count} seed={self.seed}"
        lines = [head, f"automata visited: {self.visited}"]
        for name in CHECKS:
            passed, failed = self.tallies[name]
            lines.append(f"  {name:24s} pass={passed:6d} fail={failed:6d}")
        lines.append(f"counterexamples: {len(self.counterexamples)}")
        return "\n".join(lines) + "\n"

    def write_counterexamples(self, directory) -> list[Path]:
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        paths = []
        for i, (name, A) in enumerate(self.sorted_counterexamples()):
            path = directory / f"counterexample_{i:04d}_{name}.aut"
            path.write_text(f"# failed check: {name}\n" + format_automaton(A), encoding="utf-8")
            paths.append(path)
        return paths


def _check_flat(args):
    flat, n, k = args
    A = _from_flat(flat, n, k, state_names(n), input_names(k))
    return A, check_automaton(A, _worker_predicates)


_worker_predicates = _Predicates()


def verify(max_states: int = DEFAULT_MAX_STATES, max_inputs: int = DEFAULT_MAX_INPUTS,
           mode: str = "exhaustive", count: int = 1000, seed: int = 0, force: bool = False,
           fail_fast: bool = False, automata: Optional[Iterable[Automaton]] = None,
           jobs: int = 1) -> VerificationRun:
    """Check every characterisation on a bounded family of automata.

    ``exhaustive`` covers every automaton with at most ``max_states`` states
    and ``max_inputs`` inputs; ``random`` draws ``count`` automata with
    exactly that many states and inputs. An explicit ``automata`` iterable
    overrides both. Sweeps larger than the default bounds need ``force``.
    """
    if max_states < 1 or max_inputs < 1:
        raise AutomatonError("bounds must be positive")
    run = VerificationRun(max_states, max_inputs, mode,
                          count if mode == "random" else None, seed if mode == "random" else None)
    if automata is None:
        if mode == "exhaustive":
            estimate = exhaustive_size(max_states, max_inputs)
            limit = exhaustive_size(DEFAULT_MAX_STATES, DEFAULT_MAX_INPUTS)
            if estimate > limit and not force:
                raise BudgetExceeded(f"exhaustive sweep would visit {estimate} automata "
                                     f"(limit {limit}); pass force to run it anyway")
            automata = exhaustive_suite(max_states, max_inputs)
        elif mode == "random":
            if max_states > 8 and not force:
                raise BudgetExceeded(f"random automata with {max_states} states are too large "
                                     "for the default budget; pass force to run anyway")
            automata = random_automata(max_states, max_inputs, count, seed)
        else:
            raise AutomatonError(f"unknown mode {mode!r}")

    if jobs > 1:
        import multiprocessing
        work = ((tuple(t for row in A.table for t in row), len(A.states), len(A.inputs))
                for A in automata)
        with multiprocessing.Pool(jobs) as pool:
            for A, results in pool.imap(_check_flat, work, chunksize=512):
                if not run.record(A, results) and fail_fast:
                    pool.terminate()
                    break
    else:
        predicates = _Predicates()
        for A in automata:
            if not run.record(A, check_automaton(A, predicates)) and fail_fast:
                break
    log.info("verified %d automata, %d counterexamples", run.visited, len(run.counterexamples))
    return run


# -- construction corpus ---------------------------------------------------

def _random_table(rng, n: int, k: int) -> list[list[int]]:
    return [[int(v) for v in rng.integers(0, n, size=k)] for _ in range(n)]


def _random_root(rng, n: int, inputs) -> Automaton:
    states = tuple(f"r{i}" for i in range(n))
    while True:
        A = Automaton(states, inputs, _random_table(rng, n, len(inputs)))
        if is_strongly_connected(A):
            return A


def _random_trap_connected(rng, n: int, inputs) -> Automaton:
    states = tuple("abcdefgh"[i] for i in range(n - 1)) + ("t",)
    trap = n - 1
    while True:
        table = _random_table(rng, n, len(inputs))
        table[trap] = [trap] * len(inputs)
        A = Automaton(states, inputs, table)
        if is_strongly_trap_connected(A):
            return A


def _cover_maps(hi: Automaton, lo: Automaton, inputs):
    P, Q = partial_derived(hi), partial_derived(lo)
    src, dst = P.states, Q.states
    found = []
    for images in itertools.product(dst, repeat=len(src)):
        phi = dict(zip(src, images))
        if not is_partial_homomorphism(P, Q, phi):
            continue
        exits = any(hi.index(hi.delta(a, x)) not in P.carrier
                    and lo.index(lo.delta(phi[a], x)) in Q.carrier
                    for a in src for x in inputs)
        if exits:
            found.append(phi)
    return found


def random_spec(rng, max_nodes: int = 4, max_states: int = 4,
                inputs: tuple[str, ...] = ("x", "y"), tries: int = 50) -> ConstructionSpec:
    """A random valid spec: random rooted tree, random components, random valid cover maps."""
    m = int(rng.integers(1, max_nodes + 1))
    nodes = tuple(str(i) for i in range(m))
    parents = {str(i): str(int(rng.integers(0, i))) for i in range(1, m)}
    while True:
        components = {"0": _random_root(rng, int(rng.integers(1, max_states + 1)), inputs)}
        phis = {}
        for i in range(1, m):
            node, parent = str(i), parents[str(i)]
            for _ in range(tries):
                A = _random_trap_connected(rng, int(rng.integers(2, max_states + 1)), inputs)
                maps = _cover_maps(A, components[parent], inputs)
                if maps:
                    components[node] = A
                    phis[node, parent] = maps[int(rng.integers(0, len(maps)))]
                    break
            else:
                break
        if len(components) < m:
            continue
        tree = TreePoset(nodes, tuple((c, p) for c, p in parents.items()), "0")
        spec = ConstructionSpec(tree, tuple(inputs), components, phis)
        validate_spec(spec).raise_if_failed()
        return spec


def construction_corpus(count: int = 120, seed: int = 2024, max_nodes: int = 4,
                        max_states: int = 4, inputs: tuple[str, ...] = ("x", "y")) -> list[ConstructionSpec]:
    rng = np.random.Generator(np.random.PCG64(seed))
    return [random_spec(rng, max_nodes, max_states, inputs) for _ in range(count)]


@dataclass(frozen=True)
class SpecCheck:
    semi_connected: bool
    boolean_type: bool
    kernel_is_least: bool
    canonical_boolean: bool
    ideals_match: bool

    @property
    def ok(self) -> bool:
        return all((self.semi_connected, self.boolean_type, self.kernel_is_least,
                    self.canonical_boolean, self.ideals_match))


def check_spec(spec: ConstructionSpec) -> SpecCheck:
    """Forward checks for one spec: what its built automaton must satisfy."""
    built = build(spec)
    A = built.automaton
    K = kernel(A)
    least = spec.tree.least
    expected = {glued_name(least, s) for s in spec.core_states(least)}
    carriers = [ideal_carrier(built, g) for g in ideals(spec.tree)]
    subs = closed_sets(A)
    ideals_match = len(carriers) == len(subs) and set(carriers) == set(subs)
    try:
        canonical_ok = canonical_family(spec, built).is_boolean()
    except VerificationFailure:
        canonical_ok = False
    return SpecCheck(is_semi_connected(A), boolean_family(A) is not None,
                     K is not None and set(K.states) == expected, canonical_ok, ideals_match)
