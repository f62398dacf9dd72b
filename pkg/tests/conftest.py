import sys
from pathlib import Path

import pytest

from retractable import Automaton, parse_spec

sys.path.insert(0, str(Path(__file__).parent))


def make(states, inputs, rows):
    """``rows`` maps state -> tuple of targets, one per input."""
    return Automaton.from_transitions(
        states, inputs, {(s, x): t for s, ts in rows.items() for x, t in zip(inputs, ts)})


A_TRIV = make("t", "x", {"t": "t"})
A_TAIL = make("at", "x", {"a": "t", "t": "t"})
A_GLUE = make("abk", "xy", {"a": "bk", "b": "ak", "k": "kk"})
A_BAD = make("abc", "x", {"a": "a", "b": "c", "c": "b"})
A_1 = make("abt", "xy", {"a": "bt", "b": "at", "t": "tt"})
CYCLE = make("bc", "x", {"b": "c", "c": "b"})
A_DIL = make("abkd", "xy", {"a": "bk", "b": "ak", "k": "kk", "d": "bk"})
TWO_TAILS = make(["a", "t", "a'", "t'"], "x", {"a": ("t",), "t": ("t",), "a'": ("t'",), "t'": ("t'",)})

S0_TEXT = """\
inputs x y
node 0
node 1
least 0
cover 1 0
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
phi 1 0 a k
phi 1 0 b k
"""

SAMPLES = Path(__file__).resolve().parent.parent / "samples"


@pytest.fixture
def s0():
    return parse_spec(S0_TEXT)


@pytest.fixture
def samples():
    return SAMPLES
