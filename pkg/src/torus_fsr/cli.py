"""Command-line entry point.

Exit codes: 0 all checks pass, 1 a check failed, 2 invalid arguments.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys

from . import cover, rule, verify
from .serialize import UnsupportedFormat, rat, render


def _template_summary(n: int) -> list[dict]:
    out = []
    for p in range(1, n + 1):
        t = rule.build_template(n, p)
        out.append(
            {
                "type": {"p": p, "q": n - p},
                "subtiles": len(t.subtiles),
                "subtile_types": [str(s.type_label) for s in t.subtiles],
                "volumes": [rat(s.volume) for s in t.subtiles],
                "identity": t.is_identity,
            }
        )
    return out


def cmd_rule_show(args) -> int:
    summary = _template_summary(args.n)
    if args.format == "json":
        print(json.dumps({"n": args.n, "templates": summary}, indent=1))
        return 0
    for entry in summary:
        p, q = entry["type"]["p"], entry["type"]["q"]
        kind = "identity" if entry["identity"] else f"{entry['subtiles']} subtiles"
        print(f"type ({p},{q}) Δ^{p - 1} x I^{q}: {kind}")
        for t, v in zip(entry["subtile_types"], entry["volumes"]):
            print(f"    ({t})  volume {v}")
    return 0


def _write(text: str, out: str) -> None:
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def cmd_subdivide(args) -> int:
    c = rule.iterate(rule.initial_sphere(args.n), None, args.k)
    _write(render(c, args.format), args.out)
    return 0


def cmd_oracle(args) -> int:
    c = cover.refine_exposed(args.n, args.k)
    _write(render(c, args.format), args.out)
    return 0


def cmd_verify(args) -> int:
    reports = verify.run_suite(args.max_n, args.max_k, args.checks, args.budget_seconds)
    for r in reports:
        print(r.line())
    ok = verify.suite_passed(reports)
    print("OK" if ok else "FAILED")
    return 0 if ok else 1


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _nonnegative(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return v


def _checks(text: str) -> tuple:
    names = tuple(s.strip() for s in text.split(",") if s.strip())
    bad = [s for s in names if s not in verify.ALL_CHECKS]
    if bad or not names:
        raise argparse.ArgumentTypeError(f"unknown checks {bad}; choose from {','.join(verify.ALL_CHECKS)}")
    return names


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="torus-fsr", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("rule-show", help="describe the templates of the n-torus rule")
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_rule_show)

    for name, func, help_ in (
        ("subdivide", cmd_subdivide, "k-fold subdivision of the initial sphere"),
        ("oracle", cmd_oracle, "typed tiling of the word-metric sphere S(k)"),
    ):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--n", type=_positive, required=True)
        p.add_argument("--k", type=_nonnegative, required=True)
        p.add_argument("--format", choices=("json", "off", "dot"), default="json")
        p.add_argument("--out", default="-")
        p.set_defaults(func=func)

    p = sub.add_parser("verify", help="cross-check engine against oracle")
    p.add_argument("--max-n", type=_positive, default=3)
    p.add_argument("--max-k", type=_nonnegative, default=3)
    p.add_argument("--checks", type=_checks, default=verify.ALL_CHECKS)
    p.add_argument("--budget-seconds", type=float, default=60.0)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except UnsupportedFormat as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
