"""Run every shipped example job and write reports plus CSV profiles."""
import argparse
import os

from nullhelix.jobs import dumps_report, export_profiles, parse_job, run_job
from nullhelix.paper_suite import load_corpus


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="runs/examples")
    args = ap.parse_args()
    os.makedirs(args.out, exist_ok=True)
    for name, data in load_corpus().items():
        report = run_job(parse_job(data))
        with open(os.path.join(args.out, f"{name}.report.json"), "w", encoding="utf-8") as fh:
            fh.write(dumps_report(report))
        files = export_profiles(report, args.out)
        status = "ok" if report["ok"] else f"{len(report['errors'])} task error(s)"
        print(f"{name:22s} {status:18s} {len(report['warnings'])} warning(s), {len(files)} csv")


if __name__ == "__main__":
    main()
