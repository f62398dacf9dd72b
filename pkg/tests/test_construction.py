import pytest
from hypothesis import given, settings, strategies as st
import numpy as np

import oracles
from conftest import A_BAD, A_DIL, A_GLUE, A_TAIL, A_TRIV, S0_TEXT, make
from retractable import (
    AutomatonError,
    ConstructionSpec,
    TreePoset,
    build,
    canonical_family,
    compose_phi,
    find_isomorphism,
    ideals,
    is_boolean_type,
    is_semi_connected,
    parse_spec,
    recover_spec,
    subautomata,
    validate_spec,
)
from retractable.construction import SpecError, recovery_obstacle
from retractable.harness import check_spec, random_spec

CHAIN3 = """\
inputs x y
node 0
node 1
node 2
least 0
cover 1 0
cover 2 1
begin component 0
states k
trans k x k
trans k y k
end
begin component 1
states a b t
trans a x b
trans b x a
trans t x t
trans a y a
trans b y t
trans t y t
end
begin component 2
states c u
trans c x u
trans c y c
trans u x u
trans u y u
end
phi 1 0 a k
phi 1 0 b k
phi 2 1 c a
"""

TWO_LEAVES = """\
inputs x y
node 0
node 1
node 2
least 0
cover 1 0
cover 2 0
begin component 0
states k
trans k x k
trans k y k
end
begin component 1
states a b t
trans a x b
trans b x a
trans t x t
trans a y t
trans b y t
trans t y t
end
begin component 2
states c u
trans c x c
trans c y u
trans u x u
trans u y u
end
phi 1 0 a k
phi 1 0 b k
phi 2 0 c k
"""


def spec_with(s0, **changes):
    fields = dict(tree=s0.tree, inputs=s0.inputs, components=dict(s0.components), phis=dict(s0.phis))
    fields.update(changes)
    return ConstructionSpec(**fields)


class TestTree:
    def test_chain(self):
        t = TreePoset(("0", "1", "2"), (("1", "0"), ("2", "1")), "0")
        assert t.problems() == []
        assert t.down_chain("2") == ["2", "1", "0"]
        assert t.leq("0", "2") and not t.leq("2", "0")

    def test_meet_is_greatest_lower_bound(self):
        t = TreePoset(("0", "1", "2", "3"), (("1", "0"), ("2", "1"), ("3", "1")), "0")
        assert t.meet("2", "3") == "1"
        assert t.meet("2", "1") == "1"
        assert t.meet("0", "3") == "0"

    def test_two_lower_covers(self):
        t = TreePoset(("0", "1", "2", "3"), (("1", "0"), ("2", "0"), ("3", "1"), ("3", "2")), "0")
        assert any("not a chain" in p for p in t.problems())

    def test_unknown_least(self):
        assert TreePoset(("0",), (), "9").problems()

    def test_cycle(self):
        t = TreePoset(("0", "1", "2"), (("1", "2"), ("2", "1")), "0")
        assert t.problems()


class TestIdeals:
    def test_chain(self):
        t = TreePoset(("0", "1"), (("1", "0"),), "0")
        assert [str(i) for i in ideals(t)] == ["{0}", "{0,1}"]

    def test_single(self):
        assert [str(i) for i in ideals(TreePoset(("0",), (), "0"))] == ["{0}"]

    def test_two_leaves(self):
        t = TreePoset(("0", "1", "2"), (("1", "0"), ("2", "0")), "0")
        assert [str(i) for i in ideals(t)] == ["{0}", "{0,1}", "{0,2}", "{0,1,2}"]

    @settings(max_examples=60, deadline=None)
    @given(st.lists(st.integers(0, 10), min_size=0, max_size=5))
    def test_against_brute_force(self, draws):
        nodes = tuple(str(i) for i in range(len(draws) + 1))
        covers = tuple((str(i + 1), str(d % (i + 1))) for i, d in enumerate(draws))
        t = TreePoset(nodes, covers, "0")
        from itertools import combinations
        expected = set()
        for r in range(1, len(nodes) + 1):
            for c in combinations(nodes, r):
                c = frozenset(c)
                if all(set(t.down_chain(n)) <= c for n in c):
                    expected.add(c)
        found = [i.nodes for i in ideals(t)]
        assert len(found) == len(set(found)) and set(found) == expected


class TestValidate:
    def test_s0_passes(self, s0):
        report = validate_spec(s0)
        assert report.ok
        assert report.witnesses["1", "0"] == ("a", "y")

    def test_root_not_strongly_connected(self, s0):
        bad = spec_with(s0, components={**s0.components, "0": make("at", "xy", {"a": "tt", "t": "tt"})},
                        phis={("1", "0"): {"a": "a", "b": "a"}})
        report = validate_spec(bad)
        assert not report["condition (i)"].passed
        with pytest.raises(SpecError):
            report.raise_if_failed()

    def test_without_y(self):
        text = S0_TEXT.replace("inputs x y", "inputs x")
        text = "\n".join(l for l in text.splitlines() if not (l.startswith("trans") and " y " in l))
        spec = parse_spec(text, validate=False)
        report = validate_spec(spec)
        assert not report["condition (i)"].passed
        assert "'1'" in report["condition (i)"].details[0]

    def test_not_partial_homomorphism(self, s0):
        bad = spec_with(s0, components={**s0.components, "0": make("kl", "xy", {"k": "lk", "l": "kl"})},
                        phis={("1", "0"): {"a": "k", "b": "k"}})
        assert not validate_spec(bad)["condition (ii)"].passed

    def test_missing_phi(self, s0):
        assert not validate_spec(spec_with(s0, phis={}))["condition (ii)"].passed

    def test_no_exit(self):
        # node 2 leaves its core only on y, and so does its image in node 1
        loop_exit = "states {0} {1}\ntrans {0} x {0}\ntrans {0} y {1}\ntrans {1} x {1}\ntrans {1} y {1}\n"
        text = ("inputs x y\nnode 0\nnode 1\nnode 2\nleast 0\ncover 1 0\ncover 2 1\n"
                "begin component 0\nstates k\ntrans k x k\ntrans k y k\nend\n"
                "begin component 1\n" + loop_exit.format("a", "t") + "end\n"
                "begin component 2\n" + loop_exit.format("c", "u") + "end\n"
                "phi 1 0 a k\nphi 2 1 c a\n")
        report = validate_spec(parse_spec(text, validate=False))
        assert report["condition (ii)"].passed
        assert not report["condition (iii)"].passed
        assert report.witnesses == {("1", "0"): ("a", "y")}

    def test_parse_rejects_invalid(self):
        with pytest.raises(SpecError):
            parse_spec(S0_TEXT.replace("phi 1 0 b k\n", ""))


class TestComposePhi:
    def test_identity(self, s0):
        assert compose_phi(s0, "1", "1") == {"a": "a", "b": "b"}

    def test_single_edge(self, s0):
        assert compose_phi(s0, "1", "0")["a"] == "k"

    def test_chain(self):
        spec = parse_spec(CHAIN3)
        direct = {s: spec.phis["1", "0"][spec.phis["2", "1"][s]] for s in spec.core_states("2")}
        assert compose_phi(spec, "2", "0") == direct == {"c": "k"}

    def test_composition_law(self):
        spec = parse_spec(CHAIN3)
        for i in spec.tree.nodes:
            for j in spec.tree.down_chain(i):
                for k in spec.tree.down_chain(j):
                    left = compose_phi(spec, i, k)
                    right = {s: compose_phi(spec, j, k)[t] for s, t in compose_phi(spec, i, j).items()}
                    assert left == right

    def test_not_below(self, s0):
        with pytest.raises(AutomatonError):
            compose_phi(s0, "0", "1")


class TestBuild:
    def test_s0_is_glue(self, s0):
        A = build(s0).automaton
        assert A.states == ("0.k", "1.a", "1.b")
        assert oracles.isomorphic(A, A_GLUE)
        assert A.delta("1.a", "x") == "1.b"
        assert A.delta("1.a", "y") == "0.k"

    def test_single_node(self):
        spec = parse_spec("inputs x\nnode 0\nleast 0\nbegin component 0\nstates p q\n"
                          "trans p x q\ntrans q x p\nend\n")
        A = build(spec).automaton
        assert oracles.isomorphic(A, make("pq", "x", {"p": "q", "q": "p"}))

    def test_provenance(self, s0):
        built = build(s0)
        assert built.provenance["1.b"] == ("1", "b")

    def test_chain(self):
        A = build(parse_spec(CHAIN3)).automaton
        # c exits node 2 on x and drops to node 1 through Phi(c) = a
        assert A.delta("2.c", "x") == "1.b"
        assert A.delta("2.c", "y") == "2.c"
        assert A.delta("1.b", "y") == "0.k"
        assert is_semi_connected(A) and is_boolean_type(A)


class TestCanonicalFamily:
    def test_s0(self, s0):
        built = build(s0)
        fam = canonical_family(s0, built)
        A = built.automaton
        onto_k = fam[{"0.k"}]
        assert set(onto_k.as_dict().values()) == {"0.k"}
        assert onto_k.images in oracles.retracts(A, A.indices(["0.k"]))
        assert len(oracles.retracts(A, A.indices(["0.k"]))) == 1
        assert fam[set(A.states)].images == (0, 1, 2)

    def test_two_leaves(self):
        spec = parse_spec(TWO_LEAVES)
        built = build(spec)
        fam = canonical_family(spec, built)
        m = fam[{"0.k", "1.a", "1.b"}].as_dict()
        assert m["2.c"] == "0.k" and m["1.a"] == "1.a"
        assert fam.is_boolean()

    def test_ideal_bijection(self):
        spec = parse_spec(TWO_LEAVES)
        A = build(spec).automaton
        assert len(ideals(spec.tree)) == len(subautomata(A)) == 4


class TestRecover:
    def test_glue(self, s0):
        spec = recover_spec(A_GLUE)
        assert spec is not None and len(spec.tree.nodes) == 2
        assert find_isomorphism(build(spec).automaton, A_GLUE) is not None
        assert find_isomorphism(build(spec).automaton, build(s0).automaton) is not None

    def test_bad(self):
        assert recover_spec(A_BAD) is None
        assert recovery_obstacle(A_BAD) == "automaton has no kernel"

    def test_triv(self):
        spec = recover_spec(A_TRIV)
        assert spec.tree.nodes == ("0",) and spec.tree.covers == ()

    def test_not_semi_connected(self):
        assert recover_spec(A_TAIL) is None
        assert "semi-connected" in recovery_obstacle(A_DIL)

    def test_chain_round_trip(self):
        A = build(parse_spec(CHAIN3)).automaton
        spec = recover_spec(A)
        assert len(spec.tree.nodes) == 3
        assert find_isomorphism(build(spec).automaton, A) is not None


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_random_specs_forward(seed):
    spec = random_spec(np.random.Generator(np.random.PCG64(seed)))
    result = check_spec(spec)
    assert result.ok, result
    A = build(spec).automaton
    assert oracles.boolean_type(A) if len(A.states) <= 5 else True
    back = recover_spec(A)
    assert back is not None and find_isomorphism(build(back).automaton, A) is not None
