import csv
import json
import math
import os
import subprocess
import sys

import pytest

from spinorbit.cli import build_parser, main

run_env = dict(os.environ)


def test_parser_selectors():
    ap = build_parser()
    args = ap.parse_args(["prove", "--theorem", "p1p2"])
    assert args.theorem == "p1p2"
    with pytest.raises(SystemExit) as exc:
        ap.parse_args(["prove", "--theorem", "nonsense"])
    assert exc.value.code == 2


def test_bad_params_is_usage_error(tmp_path):
    rc = main(["prove", "--theorem", "fixed-points", "--params", "bogus=1",
               "--out", str(tmp_path)])
    assert rc == 2


def test_section_scatter_cli(tmp_path):
    out = tmp_path / "scatter.csv"
    rc = main([
        "section-scatter", "--orbits", "3", "--iters", "5", "--out", str(out),
    ])
    assert rc == 0
    rows = list(csv.reader(out.open()))
    assert rows[0] == ["theta", "phi", "orbit_id"]
    assert len(rows) == 1 + 3 * 6  # header + 3 orbits x (initial + 5 iterates)
    for row in rows[1:]:
        assert 0.0 <= float(row[0]) <= math.pi


def test_section_scatter_circular_params(tmp_path):
    out = tmp_path / "circ.csv"
    rc = main([
        "section-scatter", "--orbits", "2", "--iters", "4",
        "--params", "e=0.0,omega2=0.79", "--out", str(out),
    ])
    assert rc == 0


def test_manifold_scatter_cli(tmp_path):
    out = tmp_path / "mani.csv"
    rc = main(["manifold-scatter", "P3", "--length", "1", "--out", str(out)])
    assert rc == 0
    rows = list(csv.reader(out.open()))
    assert rows[0] == ["branch", "step", "theta", "phi"]
    branches = {r[0] for r in rows[1:]}
    assert branches == {"unstable", "stable"}


def test_manifold_zero_length_is_point(tmp_path):
    out = tmp_path / "point.csv"
    rc = main(["manifold-scatter", "P1", "--length", "0", "--out", str(out)])
    assert rc == 0
    rows = list(csv.reader(out.open()))[1:]
    phis = [float(r[3]) for r in rows]
    assert max(phis) - min(phis) < 1e-4  # tiny seed segment only


def test_bench_cli_runs():
    rc = main(["bench", "--order", "8", "--skip-return"])
    assert rc == 0


@pytest.mark.slow
def test_prove_fixed_points_cli(tmp_path):
    rc = main(["prove", "--theorem", "fixed-points", "--out", str(tmp_path)])
    assert rc == 0
    doc = json.loads((tmp_path / "fixed-points.json").read_text())
    assert doc["result"]["verdict"] == "proved"
    assert len(doc["result"]["anchors"]) == 3


@pytest.mark.slow
def test_prove_cli_negative_control_exit_code(tmp_path):
    rc = main([
        "prove", "--theorem", "p1p2", "--params", "e=0.3",
        "--subdiv-depth", "5", "--out", str(tmp_path),
    ])
    assert rc == 1
    doc = json.loads((tmp_path / "p1p2.json").read_text())
    assert doc["result"]["verdict"] == "failed"


@pytest.mark.slow
def test_certificates_byte_stable(tmp_path):
    a = tmp_path / "a"
    b = tmp_path / "b"
    assert main(["prove", "--theorem", "p1p2", "--out", str(a)]) == 0
    assert main(["prove", "--theorem", "p1p2", "--out", str(b)]) == 0
    da = json.loads((a / "p1p2.json").read_text())
    db = json.loads((b / "p1p2.json").read_text())
    assert da["result"] == db["result"]
    ja = json.dumps(da["result"], sort_keys=True)
    jb = json.dumps(db["result"], sort_keys=True)
    assert ja == jb


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "spinorbit.cli", "--help"],
        capture_output=True,
        text=True,
        env=run_env,
    )
    assert proc.returncode == 0
    assert "prove" in proc.stdout
