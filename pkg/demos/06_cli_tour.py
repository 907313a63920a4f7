"""Everything above is also scriptable from the shell.

This driver shells out to the installed ``arboreal-gas`` entry point so
the printed commands can be pasted into a terminal directly.
"""

import json
import subprocess
import sys
import tempfile
from pathlib import Path

CLI = [sys.executable, "-m", "arboreal_gas.cli"]


def run(*args):
    print("$ arboreal-gas " + " ".join(args))
    out = subprocess.run(CLI + list(args), capture_output=True, text=True, check=True)
    return out.stdout


print(run("enumerate", "--d", "2", "--p", "1/2", "--n", "1"))

rows = json.loads(run("recursion", "--d", "2", "--p", "3/4", "--n", "5",
                      "--format", "json"))
print(f"q_5 = {rows[5]['q']}\n")

with tempfile.TemporaryDirectory() as tmp:
    samples = Path(tmp) / "samples.ndjson"
    run("sample", "finite", "--d", "2", "--p", "1/2", "--n", "2",
        "--replicas", "500", "--seed", "1", "--output", str(samples))
    print(run("stats", "--d", "2", "--kind", "finite", "--n", "2",
              "--input", str(samples)))

print(run("verify", "--d", "2", "--p", "1/2", "--suite", "recursion")[:200], "...")
