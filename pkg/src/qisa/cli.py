"""Command-line front end.

Machine-readable output (JSON, canonical source) goes to stdout; messages
go to stderr. Exit status is 0 on success, 1 for unreadable or ill-formed
input, 2 for failures while executing.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys

from . import corpus
from .anneal import AnnealSchedule, BRUTE_FORCE_LIMIT, anneal, brute_force_ground, read_model_file
from .errors import QisaError, SourceError
from .lang import ast as ast_nodes
from .lang.elaborate import elaborate
from .lang.parser import parse
from .lang.printer import pretty_print
from .rng import PRNG_ID, check_seed
from .vm import RunConfig, run_shots

EXIT_OK, EXIT_INPUT, EXIT_RUNTIME = 0, 1, 2


def _u64(text: str) -> int:
    try:
        return check_seed(int(text, 0))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def _schedule_args(p: argparse.ArgumentParser):
    p.add_argument("--t0", type=float, default=2.0, help="initial annealing temperature")
    p.add_argument("--t1", type=float, default=0.01, help="final annealing temperature")
    p.add_argument("--sweeps", type=_positive, default=None, help="sweeps per restart (default 200*n)")
    p.add_argument("--restarts", type=_positive, default=8, help="independent restarts")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qisa", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="execute a .qvm program and print a JSON run report")
    run.add_argument("path")
    run.add_argument("--seed", type=_u64, default=0)
    run.add_argument("--shots", type=_positive, default=1)
    run.add_argument("--dump-state", action="store_true", help="include the final state (single shot only)")
    run.add_argument("--trace", action="store_true", help="include per-shot measurement records")
    run.add_argument("--out", help="write the report here instead of stdout")
    _schedule_args(run)

    prs = sub.add_parser("parse", help="check a .qvm program and print it in canonical form")
    prs.add_argument("path")
    prs.add_argument("--ast", action="store_true", help="print the syntax tree as JSON instead")
    prs.add_argument("--out")

    ann = sub.add_parser("anneal", help="anneal an Ising model file")
    ann.add_argument("model")
    ann.add_argument("--seed", type=_u64, default=0)
    ann.add_argument("--exact", action="store_true",
                     help=f"also report the brute-force ground energy (n <= {BRUTE_FORCE_LIMIT})")
    ann.add_argument("--out")
    _schedule_args(ann)

    cor = sub.add_parser("corpus", help="write a bundled program (and its data files) to disk")
    cor.add_argument("name", choices=sorted(corpus.CORPUS))
    cor.add_argument("--dir", default=".", help="target directory (default: current)")
    return parser


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _read(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _schedule(args) -> AnnealSchedule:
    return AnnealSchedule(t0=args.t0, t1=args.t1, sweeps=args.sweeps, restarts=args.restarts)


def ast_to_data(node):
    """JSON-ready view of a syntax tree; each node carries its type and position."""
    if isinstance(node, ast_nodes.ProgramAst):
        return {"node": "Program", "items": [ast_to_data(i) for i in node.items]}
    if dataclasses.is_dataclass(node):
        data = {"node": type(node).__name__}
        for f in dataclasses.fields(node):
            data[f.name] = ast_to_data(getattr(node, f.name))
        return data
    if isinstance(node, tuple):
        return [ast_to_data(x) for x in node]
    return node


def _error(path: str, exc: Exception) -> str:
    if isinstance(exc, SourceError) and exc.line:
        return f"{path}:{exc.line}:{exc.column}: {type(exc).__name__}: {exc.message}"
    return f"{path}: {type(exc).__name__}: {exc}"


def cmd_run(args) -> int:
    try:
        schedule = _schedule(args)
        if args.dump_state and args.shots != 1:
            raise ValueError("--dump-state requires --shots 1")
        program = elaborate(parse(_read(args.path)), base_dir=os.path.dirname(os.path.abspath(args.path)))
    except OSError as exc:
        print(f"{args.path}: cannot read: {exc.strerror or exc}", file=sys.stderr)
        return EXIT_INPUT
    except (QisaError, ValueError) as exc:
        print(_error(args.path, exc), file=sys.stderr)
        return EXIT_INPUT
    try:
        config = RunConfig(seed=args.seed, shots=args.shots, trace=args.trace,
                           dump_state=args.dump_state, schedule=schedule)
        report = run_shots(program, config)
        _emit(report.to_json(), args.out)
    except Exception as exc:  # runtime failures must not escape as tracebacks
        print(_error(args.path, exc), file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


def cmd_parse(args) -> int:
    try:
        tree = parse(_read(args.path))
    except OSError as exc:
        print(f"{args.path}: cannot read: {exc.strerror or exc}", file=sys.stderr)
        return EXIT_INPUT
    except QisaError as exc:
        print(_error(args.path, exc), file=sys.stderr)
        return EXIT_INPUT
    if args.ast:
        _emit(json.dumps(ast_to_data(tree), indent=2) + "\n", args.out)
    else:
        _emit(pretty_print(tree), args.out)
    return EXIT_OK


def cmd_anneal(args) -> int:
    try:
        model = read_model_file(args.model)
        schedule = _schedule(args)
    except OSError as exc:
        print(f"{args.model}: cannot read: {exc.strerror or exc}", file=sys.stderr)
        return EXIT_INPUT
    except (QisaError, ValueError) as exc:
        print(f"{args.model}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        spins, e = anneal(model, schedule, args.seed)
        doc = {
            "prng": PRNG_ID,
            "seed": args.seed,
            "n": model.n,
            "schedule": {
                "t0": schedule.t0,
                "t1": schedule.t1,
                "sweeps": schedule.sweep_count(model.n),
                "restarts": schedule.restarts,
            },
            "energy": e,
            "spins": list(spins),
        }
        if args.exact:
            ground_spins, ground = brute_force_ground(model)
            doc["ground_energy"] = ground
            doc["ground_spins"] = list(ground_spins)
        _emit(json.dumps(doc, indent=2) + "\n", args.out)
    except Exception as exc:
        print(f"{args.model}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


def cmd_corpus(args) -> int:
    try:
        written = corpus.write_corpus(args.name, args.dir)
    except OSError as exc:
        print(f"{args.dir}: cannot write: {exc.strerror or exc}", file=sys.stderr)
        return EXIT_INPUT
    for p in written:
        print(f"wrote {p}", file=sys.stderr)
    return EXIT_OK


COMMANDS = {"run": cmd_run, "parse": cmd_parse, "anneal": cmd_anneal, "corpus": cmd_corpus}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return COMMANDS[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
