#!/usr/bin/env python3
"""Run each gfa verb twice, validate the reports against docs/schemas and
require byte-identical output between the runs."""
import json
import pathlib
import subprocess
import sys
import tempfile

import jsonschema

GAUSS = "exp(-(x/eps)^2)/(eps*sqrt(pi))"
RUNS = [
    ["valuation", "eps^2"],
    ["classify", "exp(-1/eps)"],
    ["embed", "heaviside", "--at", "-0.5,0,0.5", "--truncated"],
    ["analyze", "x/cosh(x/eps)", "--at", "0", "--radius", "0.5", "--probes", "-1,0,1"],
    ["extend", "emb:smooth(sin(x))"],
    ["wavefront", "emb:heaviside", "--probes", "-1,0,1"],
    ["associate", GAUSS, "delta"],
    ["sublinear", GAUSS, "--at", "0", "--order", "6", "--taylor"],
    ["examples"],
]


def main():
    gfa, schemas = sys.argv[1], pathlib.Path(sys.argv[2])
    failures = 0
    with tempfile.TemporaryDirectory() as tmp:
        for args in RUNS:
            verb = args[0]
            outputs = []
            for run in ("a", "b"):
                out = pathlib.Path(tmp) / run / verb
                out.mkdir(parents=True)
                proc = subprocess.run([gfa, "--quiet", "--out", str(out)] + args, capture_output=True, text=True)
                if proc.returncode != 0:
                    print(f"FAIL {verb}: exit {proc.returncode}: {proc.stderr.strip()}")
                    failures += 1
                    break
                outputs.append((out / f"{verb}.json").read_bytes())
            if len(outputs) != 2:
                continue
            schema = json.loads((schemas / f"{verb}.schema.json").read_text())
            errors = list(jsonschema.Draft202012Validator(schema).iter_errors(json.loads(outputs[0])))
            for e in errors[:5]:
                print(f"FAIL {verb}: {list(e.path)}: {e.message[:200]}")
            if outputs[0] != outputs[1]:
                print(f"FAIL {verb}: reports differ between runs")
                failures += 1
            failures += bool(errors)
            if not errors and outputs[0] == outputs[1]:
                print(f"ok   {verb}")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
