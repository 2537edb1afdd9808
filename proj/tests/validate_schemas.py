"""Runs the CLI and validates every emitted JSON document against schemas/."""

import json
import pathlib
import subprocess
import sys
import tempfile

from jsonschema import Draft202012Validator
from referencing import Registry, Resource

cli, schema_dir = sys.argv[1], pathlib.Path(sys.argv[2])

resources = []
for path in schema_dir.glob("*.schema.json"):
    doc = json.loads(path.read_text())
    resources.append((path.name, Resource.from_contents(doc)))
    resources.append((doc["$id"], Resource.from_contents(doc)))
registry = Registry().with_resources(resources)


def validator(name):
    schema = json.loads((schema_dir / name).read_text())
    return Draft202012Validator(schema, registry=registry)


def call(*args, ok=(0, 1)):
    proc = subprocess.run([cli, *args], capture_output=True, text=True)
    if proc.returncode not in ok:
        sys.exit(f"{' '.join(args)} exited {proc.returncode}: {proc.stderr}")
    return proc.stdout


failures = 0


def check(name, doc, label):
    global failures
    errors = list(validator(name).iter_errors(doc))
    for e in errors:
        print(f"FAIL {label}: {e.message} at {list(e.absolute_path)}")
    failures += bool(errors)


common = ["--p", "0.05", "--epsilon", "0.5"]
with tempfile.TemporaryDirectory() as tmp:
    runs = [
        [*common, "--inputs", "5,3", "--schedule", "staggered:0,-", "--faults", "none"],
        [*common, "--inputs", "5,3,9", "--schedule", "random:20", "--seed", "4"],
        [*common, "--inputs", "7,7", "--schedule", "alignment", "--faults", "explicit:" + "1" * 200],
    ]
    for i, args in enumerate(runs):
        out = call("run", *args)
        for n, line in enumerate(out.splitlines()):
            check("trace.schema.json", json.loads(line), f"run #{i} line {n}")
        trace = pathlib.Path(tmp) / f"t{i}.jsonl"
        trace.write_text(out)
        check("check.schema.json", json.loads(call("check", str(trace))), f"check #{i}")

    check("estimate.schema.json",
          json.loads(call("montecarlo", *common, "--inputs", "5,3", "--schedule", "staggered:0,2",
                          "--seed", "1", "--trials", "300")), "montecarlo")
    check("exact.schema.json",
          json.loads(call("exact", *common, "--inputs", "5,3", "--schedule", "staggered:0,-")), "exact")
    for j, doc in enumerate(json.loads(call("sweep", *common, "--inputs", "2,2", "--seed", "1", "--trials", "50",
                                            "--grid-w", "1,16", "--w-mode", "spread"))):
        check("estimate.schema.json", doc, f"sweep row {j}")

    config = {"p": "0.05", "epsilon": 0.5, "processors": 2, "offsets": [0, None], "values": [5, 3],
              "seed": 3, "trials": 20, "grid": {"w": [1, 2]}}
    check("config.schema.json", config, "config example")

print("schemas:", "FAIL" if failures else "PASS")
sys.exit(1 if failures else 0)
