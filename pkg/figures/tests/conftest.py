"""Fixture CSVs produced by running the gaialz command line.

The figures package only ever sees files, so the fixtures are generated
the same way a user would generate them. Nothing here imports gaialz.
"""

import json
import shutil
import subprocess
import sys

import pytest

RAMP = {
    "type": "grid",
    "N": 2,
    "v": 1.0,
    "eta": 1.0,
    "a": [0.0, 1.0],
    "b": [
        [{"re": 0.5, "im": 0.0}, {"re": 1.0, "im": 0.0}],
        [{"re": 1.0, "im": 0.0}, {"re": 0.5, "im": 0.0}],
    ],
}

DRIVEN = {
    "type": "lzsm",
    "N": 1,
    "v": 1.0,
    "eta": 5.0,
    "a": [0.0],
    "b": [[{"re": 0.3, "im": 0.0}]],
    "crossings": 6,
}


def run_gaialz(*args: str) -> None:
    binary = shutil.which("gaialz")
    cmd = [binary, *args] if binary else [sys.executable, "-m", "gaialz.cli", *args]
    done = subprocess.run(cmd, capture_output=True, text=True)
    assert done.returncode == 0, done.stderr


@pytest.fixture(scope="session")
def csv_dir(tmp_path_factory):
    root = tmp_path_factory.mktemp("csv")
    ramp = root / "ramp.json"
    ramp.write_text(json.dumps(RAMP))
    driven = root / "driven.json"
    driven.write_text(json.dumps(DRIVEN))
    # parameter sweep crossing the red boundary at low x
    run_gaialz(
        "compare", "--model", str(ramp), "--out", str(root / "sweep.csv"),
        "--sweep", "x=12:20:3", "--window=-60:60", "--tol", "1e-7",
    )
    # plain population trace, GAIA only
    run_gaialz("lzsm", "--model", str(driven), "--out", str(root / "trace.csv"))
    # trace-time comparison against the oracle
    run_gaialz("compare", "--model", str(driven), "--out", str(root / "ctrace.csv"))
    # interference zeros inside the sweep range
    run_gaialz(
        "interference", "--model", str(ramp), "--out", str(root / "zeros.csv"),
        "--sweep", "x=14.2:15.3:23",
    )
    return root
