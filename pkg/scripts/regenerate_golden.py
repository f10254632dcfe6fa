"""Rewrite tests/golden/* from the pinned invocations. Review the diff before committing."""
import json
from pathlib import Path

from moranwalk.cli import main

GOLDEN = Path(__file__).resolve().parent.parent / "tests" / "golden"

if __name__ == "__main__":
    invocations = json.loads((GOLDEN / "invocations.json").read_text())
    for name, argv in invocations.items():
        code = main(argv + ["--output", str(GOLDEN / name)])
        print(f"{name}: exit {code}")
