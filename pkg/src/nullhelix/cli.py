"""Command line front end: ``nullhelix analyze`` and ``nullhelix verify-paper``."""
from __future__ import annotations

import argparse
import json
import os
import sys

from . import __version__
from .eikonal import CONVENTIONS
from .errors import SchemaError
from .jobs import dumps_report, export_profiles, load_job, run_job
from .paper_suite import suite_report, verify_paper_suite


def build_parser():
    parser = argparse.ArgumentParser(prog="nullhelix", description=__doc__)
    parser.add_argument("--version", action="version", version=f"nullhelix {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    analyze = sub.add_parser("analyze", help="run the tasks of a JSON job file")
    analyze.add_argument("job", help="path to the job file")
    analyze.add_argument("--out", help="directory for the report (and CSV profiles); default: report to stdout")
    analyze.add_argument("--csv", action="store_true", help="also write one CSV per sampled profile (needs --out)")
    analyze.add_argument("--convention", choices=CONVENTIONS, help="gradient convention (overrides the job file)")
    analyze.add_argument("--tol", type=float, help="constancy tolerance (overrides tolerances.const_tol)")

    verify = sub.add_parser("verify-paper", help="run the golden checks over the shipped example corpus")
    verify.add_argument("--out", help="directory for the suite report JSON")
    verify.add_argument("--tol", type=float, help="tighten every check tolerance to at most this value")
    return parser


def _analyze(args):
    if args.csv and not args.out:
        print("error: --csv needs --out", file=sys.stderr)
        return 2
    try:
        job = load_job(args.job, convention=args.convention, const_tol=args.tol)
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: cannot read {args.job}: {exc.strerror}", file=sys.stderr)
        return 2
    report = run_job(job)
    text = dumps_report(report)
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        with open(os.path.join(args.out, f"{job.name}.report.json"), "w", encoding="utf-8") as fh:
            fh.write(text)
        if args.csv:
            export_profiles(report, args.out)
    else:
        sys.stdout.write(text)
    for w in report["warnings"]:
        print(f"warning [{w['task']}/{w['location']}]: {w['message']}", file=sys.stderr)
    for e in report["errors"]:
        print(f"error [{e['task']}]: {e['type']}: {e['message']}", file=sys.stderr)
    return 0 if report["ok"] else 1


def _verify(args):
    checks = verify_paper_suite(tol=args.tol)
    for c in checks:
        print(c.line())
    failed = [c.name for c in checks if not c.passed]
    print(f"{len(checks) - len(failed)}/{len(checks)} checks passed")
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        with open(os.path.join(args.out, "verify-paper.json"), "w", encoding="utf-8") as fh:
            json.dump(suite_report(checks), fh, indent=2, sort_keys=True)
            fh.write("\n")
    return 1 if failed else 0


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.command == "analyze":
        return _analyze(args)
    return _verify(args)


if __name__ == "__main__":
    sys.exit(main())
