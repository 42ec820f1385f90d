#!/usr/bin/env python3
"""Runs the CLI suite (tests/cli_suite.txt).

  cli_suite.py schema ZFILT SUITE SCHEMA_DIR   validate JSON against schemas, TSV shape
  cli_suite.py determinism ZFILT SUITE         two runs (different thread counts) must match byte for byte
"""
import json
import os
import subprocess
import sys

import jsonschema


def suite(path):
    with open(path) as f:
        return [line.split() for line in f if line.strip() and not line.startswith("#")]


def run(zfilt, args, threads="1"):
    env = dict(os.environ, ZFILT_THREADS=threads)
    p = subprocess.run([zfilt, *args], capture_output=True, env=env)
    return p.returncode, p.stdout


def check_schema(zfilt, cases, schema_dir):
    failures = 0
    for args in cases:
        code, out = run(zfilt, args)
        label = " ".join(args)
        if code != 0:
            print(f"FAIL exit {code}: {label}")
            failures += 1
            continue
        if "json" in args:
            schema = json.load(open(os.path.join(schema_dir, f"{args[0]}.schema.json")))
            try:
                jsonschema.validate(json.loads(out), schema)
            except jsonschema.ValidationError as e:
                print(f"FAIL schema: {label}: {e.message}")
                failures += 1
                continue
        else:
            rows = [l.split("\t") for l in out.decode().splitlines() if not l.startswith("#")]
            widths = {len(r) for r in rows}
            if not rows or len(widths) != 1:
                print(f"FAIL tsv shape: {label}")
                failures += 1
                continue
        print(f"ok  {label}")
    return failures


def check_determinism(zfilt, cases):
    failures = 0
    for args in cases:
        a, b = run(zfilt, args, "1"), run(zfilt, args, "4")
        if a != b:
            print(f"FAIL differs: {' '.join(args)}")
            failures += 1
    print(f"{len(cases)} invocations compared, {failures} differ")
    return failures


def main():
    mode, zfilt, suite_path = sys.argv[1:4]
    cases = suite(suite_path)
    if mode == "schema":
        return 1 if check_schema(zfilt, cases, sys.argv[4]) else 0
    if mode == "determinism":
        return 1 if check_determinism(zfilt, cases) else 0
    print(__doc__)
    return 2


if __name__ == "__main__":
    sys.exit(main())
