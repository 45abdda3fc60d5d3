"""Command line: gen, solve, verify, bench.

Exit codes: 0 pass, 1 mismatch, 2 usage error, 3 arithmetic overflow.
"""
from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from ..ext import ArithmeticOverflow
from .bench import HEADER, bench, format_rows, format_text
from .instances import KINDS, UsageError, generate, load, serialize
from .solvers import SOLVERS, run
from .verify import SUITES, replay, verify

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_OVERFLOW = 0, 1, 2, 3


def _params(pairs: Sequence[str]) -> dict:
    out = {}
    for pair in pairs or ():
        key, sep, value = pair.partition("=")
        if not sep:
            raise UsageError(f"--param expects key=value, got {pair!r}")
        out[key] = value
    return out


def _sizes(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v]
    except ValueError as exc:
        raise UsageError(f"bad size list {text!r}") from exc


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _instance(args):
    if args.input:
        return load(args.input)
    if not args.kind or args.n is None:
        raise UsageError("give --in FILE or --kind and --n")
    return generate(args.kind, int(args.n), args.seed, **_params(args.param))


def cmd_gen(args) -> int:
    if args.n is None:
        raise UsageError("gen needs --n")
    inst = generate(args.kind, int(args.n), args.seed, **_params(args.param))
    _emit(serialize(inst), args.out)
    return EXIT_OK


def cmd_solve(args) -> int:
    inst = _instance(args)
    reports = [run(inst, sid) for sid in args.solver.split(",")]
    if args.format == "rows":
        text = "\n".join([HEADER] + [r.row() for r in reports]) + "\n"
    else:
        text = "\n".join(r.text() for r in reports) + "\n"
    _emit(text, args.out)
    if len({r.answer_digest for r in reports}) > 1:
        print("solvers disagree", file=sys.stderr)
        return EXIT_MISMATCH
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.replay:
        inst = load(args.replay)
        failure = replay(inst, True if args.corrupt else None)
        name = inst.meta.get("reduction")
        if failure is None:
            print(f"PASS {name}: replayed instance agrees")
            return EXIT_OK
        print(f"FAIL {name}: {failure}")
        return EXIT_MISMATCH
    if not args.reduction:
        raise UsageError("verify needs a reduction id or --replay FILE")
    n = 32 if args.n is None else int(args.n)
    out = args.out or f"counterexample-{args.reduction}.json"
    result = verify(
        args.reduction, n, args.seed, args.trials, corrupt=args.corrupt, out=out, kind=args.kind,
        **_params(args.param),
    )
    print(result.summary())
    if not result.ok:
        print(f"counterexample written to {out}")
        return EXIT_MISMATCH
    return EXIT_OK


def cmd_bench(args) -> int:
    if args.n is None or not args.solver:
        raise UsageError("bench needs --n SIZES and --solver IDS")
    rows = bench(
        args.kind, _sizes(args.n), args.solver.split(","), args.seed, args.repeats, **_params(args.param)
    )
    text = format_rows(rows) if args.format == "rows" else format_text(rows)
    _emit(text, args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lwslab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, kind_required=False):
        p.add_argument("--kind", choices=KINDS, required=kind_required)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--param", action="append", metavar="KEY=VALUE", help="generator parameter")
        p.add_argument("--out", metavar="PATH")
        p.add_argument("--format", choices=("text", "rows"), default="text")

    p = sub.add_parser("gen", help="write a generated instance file")
    common(p, kind_required=True)
    p.add_argument("--n", type=int)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("solve", help="run solvers on one instance")
    common(p)
    p.add_argument("--n", type=int)
    p.add_argument("--in", dest="input", metavar="PATH")
    p.add_argument("--solver", required=True, help=f"comma-separated ids: {', '.join(SOLVERS)}")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="oracle-equivalence suite for one reduction")
    common(p)
    p.add_argument("reduction", nargs="?", help=f"one of {', '.join(SUITES)}")
    p.add_argument("--n", type=int, help="largest instance size (default 32)")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--corrupt", action="store_true", help="negative control: perturb the reduction side")
    p.add_argument("--replay", metavar="PATH", help="re-run a saved counterexample")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="work counters and median-of-3 wall time")
    common(p, kind_required=True)
    p.add_argument("--n", help="ascending comma-separated sizes, e.g. 1024,2048,4096")
    p.add_argument("--solver", help="comma-separated solver ids")
    p.add_argument("--repeats", type=int, default=3)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ArithmeticOverflow as exc:
        print(f"arithmetic overflow: {exc}", file=sys.stderr)
        return EXIT_OVERFLOW
    except (UsageError, ValueError, OSError) as exc:
        # ValueError covers instance payloads the library rejects
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
