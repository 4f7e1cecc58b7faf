"""Command line entry point: ``hsl verify ...`` and ``hsl expr ...``."""

from __future__ import annotations

import argparse
import os
import sys

from . import report
from .evaluator import EvalError, eval_text
from .parser import ParseError
from .runner import N_MAX_CAP, SUITES, ConfigError, SuiteConfig, exit_code, run

USAGE_ERROR = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(USAGE_ERROR)


def _range(text: str) -> tuple[int, int]:
    try:
        if ".." in text:
            a, b = text.split("..", 1)
            return int(a), int(b)
        v = int(text)
        return v, v
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer or a range a..b, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="hsl", description="Exact verification of localization, shift-operator and Yangian identities.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    v = sub.add_parser("verify", help="run verification suites")
    v.add_argument("--suite", required=True, choices=SUITES + ("all",))
    v.add_argument("--n-max", type=int, required=True, help=f"largest n (at most {N_MAX_CAP})")
    v.add_argument("--k", type=_range, help="k range a..b")
    v.add_argument("--m", type=_range, help="m range a..b")
    v.add_argument("--nq", type=int, default=6, help="q-series truncation order")
    v.add_argument("--nx", type=int, help="1/x truncation order for the Gauss suite (default 2n+2)")
    v.add_argument("--seed", type=int, help="seed for random evaluation points (default $HSL_SEED or 0)")
    v.add_argument("--jobs", type=int, default=1, help="worker processes")
    v.add_argument("--format", dest="fmt", choices=("json", "md"), required=True)
    v.add_argument("--out", help="write the report here instead of stdout")
    v.add_argument("--timings", action="store_true",
                   help="record wall-clock times (reports are then no longer reproducible)")

    e = sub.add_parser("expr", help="evaluate an expression")
    e.add_argument("expression")
    e.add_argument("--nq", type=int, default=6, help="q-series truncation order")
    return p


def _seed(flag: int | None) -> int:
    if flag is not None:
        return flag
    env = os.environ.get("HSL_SEED")
    if env:
        try:
            return int(env)
        except ValueError:
            raise ConfigError(f"HSL_SEED must be an integer, got {env!r}") from None
    return 0


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "expr":
        try:
            print(eval_text(args.expression, args.nq))
        except ParseError as exc:
            print(f"parse error at {exc}", file=sys.stderr)
            return USAGE_ERROR
        except EvalError as exc:
            print(f"evaluation error: {exc}", file=sys.stderr)
            return USAGE_ERROR
        return 0
    try:
        cfg = SuiteConfig(
            suite=args.suite, n_max=args.n_max, k_range=args.k, m_range=args.m, nq=args.nq, nx=args.nx,
            seed=_seed(args.seed), jobs=args.jobs, fmt=args.fmt, out=args.out, timings=args.timings,
        )
    except ConfigError as exc:
        print(f"hsl: error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    results = run(cfg)
    text = (report.to_json if cfg.fmt == "json" else report.to_markdown)(cfg.as_dict(), results)
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return exit_code(results)


if __name__ == "__main__":
    raise SystemExit(main())
