"""Validate shipped specs and a fresh compare summary against the JSON schemas."""

import argparse
import json
import pathlib
import shutil
import subprocess
import sys

import jsonschema


def load(path):
    with open(path, encoding="utf-8") as f:
        return json.load(f)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--cli", required=True)
    ap.add_argument("--docs", required=True, type=pathlib.Path)
    ap.add_argument("--work", required=True, type=pathlib.Path)
    args = ap.parse_args()

    spec_schema = load(args.docs / "schemas" / "cifs_spec.schema.json")
    summary_schema = load(args.docs / "schemas" / "summary.schema.json")
    jsonschema.Draft202012Validator.check_schema(spec_schema)
    jsonschema.Draft202012Validator.check_schema(summary_schema)

    specs = sorted((args.docs / "specs").glob("*.json"))
    if not specs:
        sys.exit("no sample specs found")
    for path in specs:
        jsonschema.validate(load(path), spec_schema, cls=jsonschema.Draft202012Validator)
        print(f"spec ok: {path.name}")

    shutil.rmtree(args.work, ignore_errors=True)
    runs = [
        ["--family", "fp", "--params", "p=1", "--delta", "1e-7"],
        ["--family", "ctd-spaced", "--params", "p=2", "--delta", "1e-5", "--grid", "6"],
        ["--family", "sharp", "--spec", str(args.docs / "specs" / "sharp_p1.8_t3.6.json"),
         "--params", "p=1.8,t=3.6,h=0.5", "--delta", "1e-5", "--grid", "6"],
    ]
    for i, extra in enumerate(runs):
        out = args.work / f"run{i}"
        rc = subprocess.run([args.cli, "compare", *extra, "--out", str(out)],
                            stdout=subprocess.DEVNULL, check=False).returncode
        if rc not in (0, 1):
            sys.exit(f"compare {extra} exited {rc}")
        summary = load(out / "summary.json")
        jsonschema.validate(summary, summary_schema, cls=jsonschema.Draft202012Validator)
        if summary["all_pass"] != (rc == 0):
            sys.exit(f"exit code {rc} disagrees with all_pass in {out}")
        print(f"summary ok: {' '.join(extra)} (exit {rc})")


if __name__ == "__main__":
    main()
