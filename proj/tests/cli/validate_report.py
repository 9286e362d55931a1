"""Runs the CLI on every corpus model and validates the JSON against the shipped schema."""
import json
import pathlib
import subprocess
import sys

import jsonschema

cli, schema_path, cases_dir = sys.argv[1], pathlib.Path(sys.argv[2]), pathlib.Path(sys.argv[3])
schema = json.loads(schema_path.read_text())
validator = jsonschema.Draft202012Validator(schema)

failures = 0
for model in sorted(cases_dir.glob("*.ode")):
    level = "full" if model.stem in ("bilinear", "exp_decay", "pk") else "local"
    out = subprocess.run([cli, "analyze", str(model), "--level", level, "--json"], capture_output=True, text=True)
    if out.returncode != 0:
        print(f"FAIL {model.name}: exit {out.returncode}: {out.stderr.strip()}")
        failures += 1
        continue
    errors = list(validator.iter_errors(json.loads(out.stdout)))
    for e in errors:
        print(f"FAIL {model.name}: {e.json_path}: {e.message}")
    failures += bool(errors)
    if not errors:
        print(f"ok   {model.name} ({level})")
sys.exit(1 if failures else 0)
