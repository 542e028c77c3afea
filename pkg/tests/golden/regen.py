"""Rewrite expected/*.out from jobs/*.json. Run only after reviewing a behaviour change."""

import json
import pathlib
import sys

from artifact.cli import run

HERE = pathlib.Path(__file__).parent

if __name__ == "__main__":
    for job in sorted((HERE / "jobs").glob("*.json")):
        out = run(json.loads(job.read_text()))
        (HERE / "expected" / f"{job.stem}.out").write_text(out)
        print(job.stem, file=sys.stderr)
