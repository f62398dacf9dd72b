"""Line-based text formats for automata and construction specs.

Automaton::

    # comment
    states a b k
    inputs x y
    trans a x b
    ...

Every (state, input) pair needs exactly one ``trans`` line.

Construction spec::

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
    ...
    phi 1 0 a k

Component blocks use the automaton format with local state names; an
``inputs`` line inside a block is optional and must repeat the shared one.
"""

from __future__ import annotations

from pathlib import Path
from typing import Optional

from .automaton import Automaton, AutomatonError
from .construction import ConstructionSpec, TreePoset, validate_spec


class ParseError(AutomatonError):
    code = "parse"

    def __init__(self, message: str, line: Optional[int] = None, source: str = "<string>"):
        self.line = line
        self.source = source
        where = f"{source}:{line}: " if line is not None else f"{source}: "
        super().__init__(where + message)


def _lines(text: str):
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].split()
        if line:
            yield number, line


class _AutomatonReader:
    def __init__(self, source: str, inputs: Optional[tuple[str, ...]] = None):
        self.source = source
        self.states: Optional[tuple[str, ...]] = None
        self.inputs = inputs
        self.inputs_given = False
        self.trans: dict[tuple[str, str], str] = {}
        self.first_line: Optional[int] = None
        self.last_line = 0

    def error(self, message, line):
        return ParseError(message, line, self.source)

    def feed(self, number: int, words: list[str]) -> None:
        if self.first_line is None:
            self.first_line = number
        self.last_line = number
        head, args = words[0], words[1:]
        if head == "states":
            if self.states is not None:
                raise self.error("duplicate 'states' line", number)
            if not args:
                raise self.error("'states' needs at least one state", number)
            if len(set(args)) != len(args):
                raise self.error("duplicate state names", number)
            self.states = tuple(args)
        elif head == "inputs":
            if self.inputs_given:
                raise self.error("duplicate 'inputs' line", number)
            if not args:
                raise self.error("'inputs' needs at least one input", number)
            if len(set(args)) != len(args):
                raise self.error("duplicate input names", number)
            if self.inputs is not None and set(args) != set(self.inputs):
                raise self.error("component inputs differ from the shared inputs", number)
            self.inputs = tuple(args)
            self.inputs_given = True
        elif head == "trans":
            if self.states is None or self.inputs is None:
                raise self.error("'trans' before 'states' and 'inputs'", number)
            if len(args) != 3:
                raise self.error("'trans' takes <state> <input> <state>", number)
            s, x, t = args
            for name in (s, t):
                if name not in self.states:
                    raise self.error(f"unknown state {name!r}", number)
            if x not in self.inputs:
                raise self.error(f"unknown input {x!r}", number)
            if (s, x) in self.trans:
                raise self.error(f"duplicate transition for ({s}, {x})", number)
            self.trans[s, x] = t
        else:
            raise self.error(f"unknown directive {head!r}", number)

    def finish(self) -> Automaton:
        end = self.last_line or None
        if self.states is None:
            raise self.error("missing 'states' line", end)
        if self.inputs is None:
            raise self.error("missing 'inputs' line", end)
        for s in self.states:
            for x in self.inputs:
                if (s, x) not in self.trans:
                    raise self.error(f"missing transition for ({s}, {x})", end)
        return Automaton.from_transitions(self.states, self.inputs, self.trans)


def parse_automaton(text: str, source: str = "<string>") -> Automaton:
    reader = _AutomatonReader(source)
    for number, words in _lines(text):
        reader.feed(number, words)
    return reader.finish()


def format_automaton(A: Automaton) -> str:
    lines = ["states " + " ".join(A.states), "inputs " + " ".join(A.inputs)]
    for s in A.states:
        for x in A.inputs:
            lines.append(f"trans {s} {x} {A.delta(s, x)}")
    return "\n".join(lines) + "\n"


def parse_spec(text: str, source: str = "<string>", validate: bool = True) -> ConstructionSpec:
    inputs: Optional[tuple[str, ...]] = None
    nodes: list[str] = []
    least: Optional[str] = None
    covers: list[tuple[str, str]] = []
    components: dict[str, Automaton] = {}
    phis: dict[tuple[str, str], dict[str, str]] = {}
    block: Optional[tuple[str, _AutomatonReader, int]] = None

    def err(message, line):
        return ParseError(message, line, source)

    for number, words in _lines(text):
        head, args = words[0], words[1:]
        if block is not None:
            node, reader, _ = block
            if head == "end":
                if args:
                    raise err("'end' takes no arguments", number)
                try:
                    components[node] = reader.finish()
                except ParseError:
                    raise
                except AutomatonError as exc:
                    raise err(str(exc), number) from None
                block = None
            else:
                reader.feed(number, words)
            continue
        if head == "inputs":
            if inputs is not None:
                raise err("duplicate 'inputs' line", number)
            if not args or len(set(args)) != len(args):
                raise err("'inputs' needs distinct input names", number)
            inputs = tuple(args)
        elif head == "node":
            if len(args) != 1:
                raise err("'node' takes one id", number)
            if args[0] in nodes:
                raise err(f"duplicate node {args[0]!r}", number)
            nodes.append(args[0])
        elif head == "least":
            if len(args) != 1:
                raise err("'least' takes one id", number)
            if least is not None:
                raise err("duplicate 'least' line", number)
            least = args[0]
        elif head == "cover":
            if len(args) != 2:
                raise err("'cover' takes <upper> <lower>", number)
            covers.append((args[0], args[1]))
        elif head == "begin":
            if len(args) != 2 or args[0] != "component":
                raise err("expected 'begin component <id>'", number)
            if inputs is None:
                raise err("component before 'inputs'", number)
            if args[1] in components:
                raise err(f"duplicate component {args[1]!r}", number)
            block = (args[1], _AutomatonReader(source, inputs), number)
        elif head == "phi":
            if len(args) != 4:
                raise err("'phi' takes <upper> <lower> <state> <state>", number)
            hi, lo, s, t = args
            m = phis.setdefault((hi, lo), {})
            if s in m:
                raise err(f"duplicate phi entry for {s!r} on {hi} > {lo}", number)
            m[s] = t
        else:
            raise err(f"unknown directive {head!r}", number)
    if block is not None:
        raise err(f"component {block[0]!r} is not closed with 'end'", block[2])
    if inputs is None:
        raise err("missing 'inputs' line", None)
    if least is None:
        raise err("missing 'least' line", None)
    spec = ConstructionSpec(TreePoset(tuple(nodes), tuple(covers), least), inputs, components, phis)
    if validate:
        validate_spec(spec).raise_if_failed()
    return spec


def format_spec(spec: ConstructionSpec) -> str:
    lines = ["inputs " + " ".join(spec.inputs)]
    lines += [f"node {n}" for n in spec.tree.nodes]
    lines.append(f"least {spec.tree.least}")
    lines += [f"cover {hi} {lo}" for hi, lo in spec.tree.covers]
    for node in spec.tree.nodes:
        lines.append(f"begin component {node}")
        lines.extend(format_automaton(spec.components[node]).splitlines())
        lines.append("end")
    for (hi, lo), phi in spec.phis.items():
        A = spec.components[hi]
        for s in A.states:
            if s in phi:
                lines.append(f"phi {hi} {lo} {s} {phi[s]}")
    return "\n".join(lines) + "\n"


def load_automaton(path) -> Automaton:
    path = Path(path)
    return parse_automaton(path.read_text(encoding="utf-8"), str(path))


def save_automaton(A: Automaton, path) -> None:
    Path(path).write_text(format_automaton(A), encoding="utf-8")


def load_spec(path, validate: bool = True) -> ConstructionSpec:
    path = Path(path)
    return parse_spec(path.read_text(encoding="utf-8"), str(path), validate)


def save_spec(spec: ConstructionSpec, path) -> None:
    Path(path).write_text(format_spec(spec), encoding="utf-8")
