"""Runs one case of the CLI golden corpus and checks its exit code and output."""
import json
import subprocess
import sys

exe, corpus, name, data, configs = sys.argv[1:6]
case = next(c for c in json.load(open(corpus, encoding="utf-8")) if c["name"] == name)
args = [a.replace("@DATA@", data).replace("@CONFIGS@", configs) for a in case["args"]]
proc = subprocess.run([exe] + args, capture_output=True, text=True, timeout=300)
print(proc.stdout)
print(proc.stderr, file=sys.stderr)
if proc.returncode != case["exit"]:
    sys.exit(f"{name}: exit {proc.returncode}, expected {case['exit']}")
if "stdout" in case and case["stdout"] not in proc.stdout:
    sys.exit(f"{name}: output lacks {case['stdout']!r}")
