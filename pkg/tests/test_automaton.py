import pytest
from hypothesis import given, settings, strategies as st

import oracles
from conftest import A_1, A_BAD, A_GLUE, A_TAIL, A_TRIV, CYCLE, make
from retractable import (
    Automaton,
    AutomatonError,
    StateMap,
    Subautomaton,
    find_isomorphism,
    generated,
    is_homomorphism,
    is_partial_homomorphism,
    kernel,
    partial_derived,
    quotient,
    run,
    subautomata,
    traps,
)


@st.composite
def automata(draw, max_states=4, max_inputs=2):
    n = draw(st.integers(1, max_states))
    k = draw(st.integers(1, max_inputs))
    table = draw(st.lists(st.lists(st.integers(0, n - 1), min_size=k, max_size=k),
                          min_size=n, max_size=n))
    return Automaton.from_table(table)


def names(subs):
    return [set(s.states) for s in subs]


class TestConstruction:
    def test_missing_transition(self):
        with pytest.raises(AutomatonError, match="missing transition"):
            Automaton.from_transitions("ab", "x", {("a", "x"): "a"})

    def test_unknown_target(self):
        with pytest.raises(AutomatonError):
            Automaton.from_transitions("a", "x", {("a", "x"): "z"})

    def test_duplicate_names(self):
        with pytest.raises(AutomatonError):
            Automaton(("a", "a"), ("x",), ((0,), (1,)))

    def test_out_of_range_target(self):
        with pytest.raises(AutomatonError):
            Automaton.from_table([[3]])

    def test_error_code(self):
        with pytest.raises(AutomatonError) as info:
            Automaton.from_table([[3]])
        assert info.value.code == "input"


class TestRun:
    def test_empty_word(self):
        assert run(A_TAIL, "a", "") == "a"

    def test_trap_absorbs(self):
        assert run(A_TAIL, "a", "xx") == "t"

    def test_glue_fold(self):
        assert run(A_GLUE, "a", "xxy") == "k"

    def test_unknown_input(self):
        with pytest.raises(AutomatonError):
            run(A_TAIL, "a", "z")


class TestHomomorphism:
    def test_identity(self):
        assert is_homomorphism(StateMap.identity(A_GLUE))

    def test_collapse_onto_k(self):
        K = kernel(A_GLUE).automaton()
        m = StateMap.from_dict(A_GLUE, K, {"a": "k", "b": "k", "k": "k"})
        assert is_homomorphism(m)

    def test_broken_map(self):
        m = StateMap.from_dict(A_GLUE, A_GLUE, {"a": "k", "b": "b", "k": "k"})
        assert not is_homomorphism(m)

    def test_partial_map_rejected(self):
        with pytest.raises(AutomatonError):
            StateMap.from_dict(A_GLUE, A_GLUE, {"a": "a"})


class TestIsomorphism:
    def test_self(self):
        iso = find_isomorphism(A_TAIL, A_TAIL)
        assert iso.as_dict() == {"a": "a", "t": "t"}

    def test_cardinality(self):
        assert find_isomorphism(A_TRIV, A_TAIL) is None
        assert find_isomorphism(CYCLE, make("z", "x", {"z": "z"})) is None

    def test_renamed(self):
        B = make("pqr", "xy", {"r": "qp", "q": "rp", "p": "pp"})
        iso = find_isomorphism(A_GLUE, B)
        # a and b may be swapped, k must land on the trap
        assert iso.as_dict()["k"] == "p" and is_homomorphism(iso)

    @settings(max_examples=60, deadline=None)
    @given(automata(), st.randoms(use_true_random=False))
    def test_agrees_with_permutation_search(self, A, rnd):
        perm = list(range(len(A.states)))
        rnd.shuffle(perm)
        # B is A relabelled by perm, so they are isomorphic
        inv = {p: i for i, p in enumerate(perm)}
        table = [[perm[A.table[inv[s]][x]] for x in range(len(A.inputs))] for s in range(len(A.states))]
        B = Automaton.from_table(table, states=[f"q{i}" for i in range(len(A.states))], inputs=A.inputs)
        iso = find_isomorphism(A, B)
        assert iso is not None and is_homomorphism(iso)
        assert (find_isomorphism(A, B) is not None) == oracles.isomorphic(A, B)

    @settings(max_examples=60, deadline=None)
    @given(automata(max_states=3), automata(max_states=3))
    def test_matches_oracle(self, A, B):
        if A.inputs != B.inputs:
            return
        assert (find_isomorphism(A, B) is not None) == oracles.isomorphic(A, B)


class TestSubautomata:
    def test_examples(self):
        assert names(subautomata(A_TRIV)) == [{"t"}]
        assert names(subautomata(A_TAIL)) == [{"t"}, {"a", "t"}]
        assert names(subautomata(A_GLUE)) == [{"k"}, {"a", "b", "k"}]

    def test_generated(self):
        assert set(generated(A_TRIV, "t").states) == {"t"}
        assert set(generated(A_GLUE, "a").states) == {"a", "b", "k"}
        assert set(generated(A_GLUE, "k").states) == {"k"}

    def test_traps(self):
        assert traps(A_TRIV) == ["t"]
        assert traps(A_GLUE) == ["k"]
        assert traps(CYCLE) == []

    def test_kernel(self):
        assert set(kernel(A_GLUE).states) == {"k"}
        assert kernel(A_BAD) is None
        assert set(kernel(A_TRIV).states) == {"t"}

    def test_not_closed(self):
        with pytest.raises(AutomatonError):
            Subautomaton.of(A_TAIL, ["a"])

    def test_order(self):
        k, whole = subautomata(A_GLUE)
        assert k <= whole and k < whole and not whole <= k
        assert str(k) == "{k}"

    @settings(max_examples=80, deadline=None)
    @given(automata())
    def test_against_oracle(self, A):
        assert {s.carrier for s in subautomata(A)} == set(oracles.closed_subsets(A))
        K = kernel(A)
        assert (K.carrier if K else None) == oracles.kernel(A)
        assert [A.index(t) for t in traps(A)] == oracles.traps(A)
        for s in range(len(A.states)):
            assert generated(A, A.states[s]).carrier == oracles.generated_set(A, s)

    @settings(max_examples=60, deadline=None)
    @given(automata())
    def test_closure_properties(self, A):
        subs = [s.carrier for s in subautomata(A)]
        for b in subs:
            for c in subs:
                assert b | c in subs
                if b & c:
                    assert b & c in subs


class TestQuotient:
    def test_identity(self):
        Q, _ = quotient(A_GLUE, [["a"], ["b"], ["k"]])
        assert find_isomorphism(Q, A_GLUE) is not None

    def test_full(self):
        Q, _ = quotient(A_GLUE, [["a", "b", "k"]])
        assert len(Q.states) == 1

    def test_fold(self):
        Q, pi = quotient(A_GLUE, [["a", "b"], ["k"]])
        assert Q.states == ("{a,b}", "k")
        assert Q.delta("{a,b}", "x") == "{a,b}"
        assert Q.delta("{a,b}", "y") == "k"
        assert is_homomorphism(pi)

    def test_not_a_congruence(self):
        with pytest.raises(AutomatonError):
            quotient(A_GLUE, [["a", "k"], ["b"]])


class TestPartial:
    def test_trap_removed(self):
        P = partial_derived(A_1)
        assert set(P.states) == {"a", "b"}
        assert P.delta("a", "x") == "b" and P.delta("b", "x") == "a"
        assert P.delta("a", "y") is None

    def test_trivial_keeps_everything(self):
        assert partial_derived(A_TRIV).states == ("t",)

    def test_no_trap_is_total(self):
        P = partial_derived(CYCLE)
        assert set(P.states) == {"b", "c"}
        assert P.delta("b", "x") == "c"

    def test_partial_homomorphism(self):
        P1 = partial_derived(A_1)
        P0 = partial_derived(make("k", "xy", {"k": "kk"}))
        assert is_partial_homomorphism(P1, P1, {"a": "a", "b": "b"})
        assert is_partial_homomorphism(P1, P0, {"a": "k", "b": "k"})
        assert not is_partial_homomorphism(P1, P1, {"a": "a", "b": "a"})


@settings(max_examples=80, deadline=None)
@given(automata())
def test_partial_carrier_against_oracle(A):
    assert list(partial_derived(A).states) == oracles.core_names(A)
