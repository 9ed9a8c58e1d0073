"""Command-line entry point: verify, catalog and lemma subcommands."""
from __future__ import annotations

import argparse
import json
import sys

from .config import catalog_names, load_catalog, load_config
from .errors import ConfigError, GeometryError, ReportIOError
from .inequalities import LemmaInstance, chen_lemma_gap
from .report import emit_report, run_verify

EXIT_OK, EXIT_ERROR, EXIT_VIOLATED = 0, 1, 2


def _finish(report, out, fmt) -> int:
    text = emit_report(report, out, fmt)
    if out is None:
        sys.stdout.write(text)
    for w in report.warnings:
        print(f"warning: {w}", file=sys.stderr)
    for e in report.errors:
        print(f"error: point {e.point_index} {e.theorem}: {e.error['type']}: {e.error['message']}",
              file=sys.stderr)
    if report.failed:
        for e in report.failed:
            print(f"violated: point {e.point_index} {e.theorem}: gap {e.report.gap:.6g}", file=sys.stderr)
        return EXIT_VIOLATED
    return EXIT_ERROR if report.errors else EXIT_OK


def _verify(args) -> int:
    cfg = load_config(args.config)
    out = args.out or cfg.output.get("path")
    fmt = args.format or cfg.output.get("format", "json")
    rep = run_verify(cfg, None if args.point is None else args.point, args.theorem)
    return _finish(rep, out, fmt)


def _catalog(args) -> int:
    if args.action == "list":
        for name in catalog_names():
            cfg = load_catalog(name)
            print(f"{name:22s} n={cfg.n} m={cfg.m}  {', '.join(cfg.theorems) or '-'}")
        return EXIT_OK
    if not args.name:
        raise ConfigError("catalog run needs an entry name")
    cfg = load_catalog(args.name)
    return _finish(run_verify(cfg), args.out, args.format or "json")


def _lemma(args) -> int:
    try:
        a = [float(v) for v in args.a.split(",")]
    except ValueError:
        raise ConfigError(f"--a must be comma-separated numbers, got {args.a!r}") from None
    if len(a) != args.k:
        raise ConfigError(f"--k {args.k} does not match {len(a)} values in --a")
    inst = LemmaInstance.from_a(a)
    res = chen_lemma_gap(inst)
    print(json.dumps({"k": inst.k, "a": list(inst.a), "b": inst.b, "gap": res.gap,
                      "equality": res.equality, "condition_residual": res.condition_residual},
                     indent=2))
    return EXIT_OK if res.gap >= -1e-9 else EXIT_VIOLATED


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="submersion-chen",
                                description="Check Chen-type inequalities for Riemannian submersions.")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run the theorems of a config file")
    v.add_argument("--config", required=True)
    v.add_argument("--point", type=int, action="append", help="0-based point index (repeatable)")
    v.add_argument("--theorem", action="append", help="theorem id (repeatable)")
    v.add_argument("--out")
    v.add_argument("--format", choices=("json", "csv"))
    v.set_defaults(func=_verify)

    c = sub.add_parser("catalog", help="list or run built-in examples")
    c.add_argument("action", choices=("list", "run"))
    c.add_argument("name", nargs="?")
    c.add_argument("--out")
    c.add_argument("--format", choices=("json", "csv"))
    c.set_defaults(func=_catalog)

    lm = sub.add_parser("lemma", help="evaluate the algebraic lemma for given a_i")
    lm.add_argument("--k", type=int, required=True)
    lm.add_argument("--a", required=True)
    lm.set_defaults(func=_lemma)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, GeometryError, ReportIOError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
