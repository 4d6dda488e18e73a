"""Runs the CLI on the shipped configs and validates every report against the schema."""
import json
import pathlib
import subprocess
import sys
import tempfile

import jsonschema

EXPECTED = {
    "p1_verify_morse.json": ("verify-morse", 0),
    "p12_moishezon.json": ("moishezon-check", 0),
    "c_z2_kernel.json": ("kernel-asymptotics", 0),
    "torus_heat_trace.json": ("heat-trace", 0),
    "mixed_signature.json": ("all", 0),
    "bad_p_list.json": ("verify-morse", 2),
}


def main(binary, root):
    root = pathlib.Path(root)
    schema = json.loads((root / "schemas" / "report.schema.json").read_text())
    validator = jsonschema.Draft202012Validator(schema)
    failures = 0
    with tempfile.TemporaryDirectory() as tmp:
        for name, (sub, code) in EXPECTED.items():
            out = pathlib.Path(tmp) / name
            cmd = [binary, sub, "--config", str(root / "configs" / name), "--out", str(out)]
            rc = subprocess.run(cmd, capture_output=True, text=True)
            if rc.returncode != code:
                print(f"FAIL {name}: exit {rc.returncode}, expected {code}: {rc.stderr.strip()}")
                failures += 1
                continue
            if code == 2:
                lines = [l for l in rc.stderr.splitlines() if l]
                if len(lines) != 1:
                    print(f"FAIL {name}: expected one diagnostic line, got {lines}")
                    failures += 1
                continue
            report = json.loads((out / "report.json").read_text())
            errors = list(validator.iter_errors(report))
            for e in errors:
                print(f"FAIL {name}: {e.json_path}: {e.message}")
            failures += bool(errors)
            # same config, same seed: identical bytes once the timestamp is dropped
            again = pathlib.Path(tmp) / (name + ".again")
            subprocess.run(cmd[:-1] + [str(again), "--no-timestamp"], capture_output=True, check=False)
            first = dict(report)
            first["meta"] = {k: v for k, v in report["meta"].items() if k != "timestamp"}
            second = json.loads((again / "report.json").read_text())
            if json.dumps(first, sort_keys=True) != json.dumps(second, sort_keys=True):
                print(f"FAIL {name}: report not reproducible")
                failures += 1
            else:
                print(f"ok   {name}")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main(sys.argv[1], sys.argv[2]))
