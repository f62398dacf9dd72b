"""Command-line front end.

Exit codes: 0 success or property holds, 1 property fails or verification
found counterexamples, 2 error. Errors go to stderr as
``error[<code>]: <message>`` where ``<code>`` is one of ``parse``, ``input``,
``spec``, ``budget``, ``io``.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .automaton import AutomatonError, kernel
from .congruence import all_congruences, complements, hasse_dot, lattice_class
from .construction import build, recovery_obstacle, recover_spec
from .harness import verify
from .retract import boolean_certificate, is_retractable
from .structure import analyze, dilation_base, direct_sum_components, is_semi_connected
from .textio import format_automaton, load_automaton, load_spec, save_automaton, save_spec

EXIT_TRUE, EXIT_FALSE, EXIT_ERROR = 0, 1, 2


def _write(text: str, out) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def cmd_analyze(args) -> int:
    A = load_automaton(args.file)
    sys.stdout.write(analyze(A).to_text())
    return EXIT_TRUE


def cmd_check(args) -> int:
    A = load_automaton(args.file)
    prop = args.property
    if prop == "retractable":
        cert = is_retractable(A)
    elif prop == "boolean":
        cert = boolean_certificate(A)
    elif prop == "semi-connected":
        holds = is_semi_connected(A)
        print(f"semi-connected: {'true' if holds else 'false'}")
        return EXIT_TRUE if holds else EXIT_FALSE
    else:
        K = kernel(A)
        print(f"kernel: {K if K is not None else 'none'}")
        return EXIT_TRUE if K is not None else EXIT_FALSE
    print(f"{prop}: {'true' if cert else 'false'}")
    if cert.witness is not None:
        print(f"witness: {cert.witness}")
    if cert.reason:
        print(f"reason: {cert.reason}")
    return EXIT_TRUE if cert else EXIT_FALSE


def cmd_congruences(args) -> int:
    A = load_automaton(args.file)
    L = all_congruences(A, args.strategy)
    cls = lattice_class(L)
    print(f"congruences: {len(L)}")
    for c in L:
        comps = complements(L, c)
        print(f"  {c}    complements: {len(comps)}")
    print(f"complemented: {str(cls.complemented).lower()}")
    print(f"distributive: {str(cls.distributive).lower()}")
    print(f"boolean algebra: {str(cls.boolean_algebra).lower()}")
    if args.hasse:
        Path(args.hasse).write_text(hasse_dot(L), encoding="utf-8")
    return EXIT_TRUE


def cmd_decompose(args) -> int:
    A = load_automaton(args.file)
    comps = direct_sum_components(A)
    print(f"# {len(comps)} direct-sum component(s)")
    for i, c in enumerate(comps):
        K = kernel(c.automaton())
        print(f"# component {i}: {c}  kernel: {K if K is not None else 'none'}")
        sys.stdout.write(format_automaton(c.automaton()))
    d = dilation_base(A)
    print(f"# dilation base: {d.base}  proper: {'yes' if d.proper else 'no'}")
    sys.stdout.write(format_automaton(d.base.automaton()))
    moved = [f"{a}->{b}" for a, b in d.map.as_dict().items() if a != b]
    if moved:
        print("# dilation map: " + " ".join(moved))
    return EXIT_TRUE


def cmd_construct(args) -> int:
    spec = load_spec(args.spec)
    built = build(spec)
    save_automaton(built.automaton, args.output)
    print(f"built {len(built.automaton.states)} states from {len(spec.tree.nodes)} node(s) -> {args.output}")
    return EXIT_TRUE


def cmd_recover(args) -> int:
    A = load_automaton(args.file)
    spec = recover_spec(A)
    if spec is None:
        print(f"no construction spec: {recovery_obstacle(A)}")
        return EXIT_FALSE
    save_spec(spec, args.output)
    print(f"recovered spec with {len(spec.tree.nodes)} node(s) -> {args.output}")
    return EXIT_TRUE


def cmd_verify(args) -> int:
    mode = "random" if args.random is not None else "exhaustive"
    run = verify(args.states, args.inputs, mode=mode, count=args.random or 0, seed=args.seed,
                 force=args.force, fail_fast=args.fail_fast, jobs=args.jobs)
    sys.stdout.write(run.summary())
    if run.counterexamples:
        if args.out:
            for path in run.write_counterexamples(args.out):
                print(f"wrote {path}")
        else:
            for name, A in run.sorted_counterexamples():
                print(f"# failed check: {name}")
                sys.stdout.write(format_automaton(A))
        return EXIT_FALSE
    return EXIT_TRUE


def cmd_export_dot(args) -> int:
    A = load_automaton(args.file)
    _write(analyze(A).to_dot(), args.output)
    return EXIT_TRUE


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="retractable",
                                description="Retractable and Boolean-type retractable automata.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("analyze", help="print the structure report of an automaton")
    s.add_argument("file")
    s.set_defaults(func=cmd_analyze)

    s = sub.add_parser("check", help="decide one property (exit 0 true, 1 false)")
    s.add_argument("file")
    s.add_argument("--property", required=True,
                   choices=["retractable", "boolean", "semi-connected", "kernel"])
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("congruences", help="list the congruence lattice")
    s.add_argument("file")
    s.add_argument("--hasse", metavar="OUT.dot", help="write the Hasse diagram as DOT")
    s.add_argument("--strategy", choices=["auto", "filter", "closure"], default="auto")
    s.set_defaults(func=cmd_congruences)

    s = sub.add_parser("decompose", help="direct-sum components and dilation base")
    s.add_argument("file")
    s.set_defaults(func=cmd_decompose)

    s = sub.add_parser("construct", help="build the automaton of a construction spec")
    s.add_argument("spec")
    s.add_argument("-o", "--output", required=True)
    s.set_defaults(func=cmd_construct)

    s = sub.add_parser("recover", help="recover a construction spec from an automaton")
    s.add_argument("file")
    s.add_argument("-o", "--output", required=True)
    s.set_defaults(func=cmd_recover)

    s = sub.add_parser("verify", help="check the structural characterisations on many automata")
    s.add_argument("--states", type=int, default=4)
    s.add_argument("--inputs", type=int, default=2)
    mode = s.add_mutually_exclusive_group()
    mode.add_argument("--exhaustive", action="store_true", help="every automaton up to the bounds (default)")
    mode.add_argument("--random", type=int, metavar="COUNT", help="COUNT seeded random automata")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--force", action="store_true", help="allow sweeps beyond the default budget")
    s.add_argument("--fail-fast", action="store_true")
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--out", metavar="DIR", help="directory for serialized counterexamples")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("export-dot", help="render an automaton as DOT")
    s.add_argument("file")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_export_dot)
    return p


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except AutomatonError as exc:
        print(f"error[{exc.code}]: {exc}", file=sys.stderr)
    except OSError as exc:
        print(f"error[io]: {exc}", file=sys.stderr)
    return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
