import csv
import json
import subprocess
import sys

import numpy as np
import pytest

from controls import flipped_hamiltonian_superoperator, inflate_prefactor
from qsl.cli import (
    COLUMNS,
    EXIT_BOUND,
    EXIT_OK,
    EXIT_ORACLE,
    EXIT_SCHEMA,
    RunConfig,
    cmd_compare,
    log_slope,
    main,
    parse_overrides,
)
from qsl.scenarios import catalog_names


def read_csv(path):
    with open(path) as fh:
        rows = list(csv.reader(fh))
    return rows[0], rows[1:]


def test_parse_overrides():
    assert parse_overrides(["M=3", "variant=text", "gamma=0.5"]) == {"M": 3, "variant": "text", "gamma": 0.5}
    assert parse_overrides(["M=2,3,4"], allow_lists=True) == {"M": [2, 3, 4]}
    assert parse_overrides(["M="], allow_lists=True) == {"M": []}


def test_catalog_lists_all(capsys):
    assert main(["catalog"]) == EXIT_OK
    out = capsys.readouterr().out
    for name in ("fig1", "fig2", "fig3", "ghz_local", "ghz_global", "nlevel_dephasing", "decorrelator"):
        assert name in out


def test_run_csv_schema_and_precision(tmp_path):
    out = tmp_path / "fig1.csv"
    assert main(["run", "fig1", "--out", str(out), "--set", "steps=50"]) == EXIT_OK
    header, rows = read_csv(out)
    assert header == COLUMNS
    assert len(rows) == 51
    assert float(rows[0][1]) == pytest.approx(1.0)
    # Round-trip precision: the CSV text reproduces the float exactly.
    assert all(repr(float(v)) == repr(float(format(float(v), ".17g"))) for v in rows[10])
    again = tmp_path / "again.csv"
    main(["run", "fig1", "--out", str(again), "--set", "steps=50"])
    assert out.read_text() == again.read_text()


def test_run_single_step_and_non_dephasing_column(tmp_path):
    out = tmp_path / "one.csv"
    assert main(["run", "fig3", "--out", str(out), "--set", "steps=1"]) == EXIT_OK
    _, rows = read_csv(out)
    assert len(rows) == 2
    # Amplitude damping is not dephasing: the floor column is empty.
    assert all(r[COLUMNS.index("eq12_floor")] == "" for r in rows)


def test_run_json_and_direct_method(tmp_path):
    out = tmp_path / "g.json"
    assert main(["run", "ghz_local", "--out", str(out), "--format", "json",
                 "--method", "direct", "--set", "M=2", "--set", "steps=100", "--set", "t_end=1"]) == EXIT_OK
    doc = json.loads(out.read_text())
    traj = doc["trajectories"][0]
    assert doc["columns"] == COLUMNS and traj["seed"] is None
    assert log_slope(traj["t"], traj["purity_deviation"]) == pytest.approx(-8.0, rel=1e-6)


def test_fig1_twenty_seeds_above_floor(tmp_path):
    out = tmp_path / "seeds.csv"
    argv = ["run", "fig1", "--out", str(out), "--set", "steps=200"]
    for s in range(1, 21):
        argv += ["--seed", str(s)]
    assert main(argv) == EXIT_OK
    header, rows = read_csv(out)
    assert header == ["seed"] + COLUMNS
    data = np.array([[float(x) for x in r] for r in rows])
    assert sorted(set(data[:, 0].astype(int))) == list(range(1, 21))
    purity, floor = data[:, 2], data[:, 1 + COLUMNS.index("eq12_floor")]
    assert np.all(purity >= floor - 1e-9)


def test_bounds_json(capsys):
    assert main(["bounds", "fig1", "--set", "variant=text", "--from", "0", "--to", "1"]) == EXIT_OK
    doc = json.loads(capsys.readouterr().out)
    assert doc["hilbert_hs"] == pytest.approx(2.0)
    assert doc["hilbert_sp"] == pytest.approx(1.0)
    assert doc["liouville"] == pytest.approx(1.0)
    assert doc["skew_spectral_norm"] == pytest.approx(1.0)


def test_quadrature_env_override(capsys, monkeypatch):
    monkeypatch.setenv("QSL_QUADRATURE_STEPS", "7")
    doc_path = ["bounds", "fig1", "--from", "0", "--to", "1"]
    assert main(doc_path) == EXIT_OK
    assert json.loads(capsys.readouterr().out)["quadrature_steps"] == 7


def test_schema_errors(tmp_path, capsys):
    assert main(["run", "nope", "--out", str(tmp_path / "x.csv")]) == EXIT_SCHEMA
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"name": "bad", "dim": 2}))
    assert main(["run", str(bad), "--out", str(tmp_path / "x.csv")]) == EXIT_SCHEMA
    assert main(["bounds", "ghz_local", "--set", "colour=red"]) == EXIT_SCHEMA
    assert main(["compare", "ghz_local", "--set", "M=9"]) == EXIT_SCHEMA


@pytest.mark.slow
def test_compare_all_catalog(capsys):
    assert main(["compare", "--all-catalog"]) == EXIT_OK
    reports = json.loads(capsys.readouterr().out)
    assert [r["scenario"] for r in reports] == [s for s in catalog_names()]
    assert all(r["max_discrepancy"] < 1e-8 and not r["violations"] for r in reports)


def test_negative_control_oracle_mismatch(capsys):
    config = RunConfig("compare", "fig1")
    assert cmd_compare(config) == EXIT_OK
    assert cmd_compare(config, superoperator=flipped_hamiltonian_superoperator) == EXIT_ORACLE
    out = capsys.readouterr().out
    assert '"status": "oracle-mismatch"' in out


def test_negative_control_bound_violation(capsys):
    config = RunConfig("compare", "fig1")
    assert cmd_compare(config, dynamics=inflate_prefactor(3.0, 2.0)) == EXIT_BOUND
    report = json.loads(capsys.readouterr().out)[0]
    assert report["max_discrepancy"] < 1e-8
    assert any("liouville" in v for v in report["violations"])


def test_sweep_ghz_slopes(tmp_path):
    out = tmp_path / "sweep"
    argv = ["sweep", "ghz_local", "--set", "M=2,3,4", "--set", "t_end=1", "--set", "steps=100",
            "--out-dir", str(out)]
    assert main(argv) == EXIT_OK
    index = json.loads((out / "index.json").read_text())
    assert [p["params"]["M"] for p in index["points"]] == [2, 3, 4]
    for point, expected in zip(index["points"], (-8, -12, -16)):
        assert point["log_slope"] == pytest.approx(expected, rel=1e-6)
        assert point["skew_spectral_norm"] == pytest.approx(-expected)
        header, rows = read_csv(out / point["file"])
        assert header == COLUMNS and len(rows) == 101


def test_sweep_seeds_parallel_matches_serial(tmp_path):
    base = ["sweep", "fig1", "--set", "steps=50", "--seed", "1", "--seed", "2", "--seed", "3"]
    assert main(base + ["--out-dir", str(tmp_path / "a")]) == EXIT_OK
    assert main(base + ["--out-dir", str(tmp_path / "b"), "--jobs", "2"]) == EXIT_OK
    for name in ("point_0000.csv", "point_0001.csv", "point_0002.csv", "index.json"):
        assert (tmp_path / "a" / name).read_text() == (tmp_path / "b" / name).read_text()
    for name in ("point_0000.csv", "point_0001.csv", "point_0002.csv"):
        _, rows = read_csv(tmp_path / "a" / name)
        data = np.array([[float(x) for x in r] for r in rows])
        # fig1 tracks the deviation from I/2, so the envelope applies to that column.
        assert np.all(data[:, 2] >= data[:, 3] - 1e-9) and np.all(data[:, 2] <= data[:, 4] + 1e-9)


def test_sweep_fig3_lambda_ordering(tmp_path):
    out = tmp_path / "lam"
    argv = ["sweep", "fig3", "--set", "lam=0,0.25,0.5,0.75,1", "--set", "t_end=2", "--set", "steps=100",
            "--out-dir", str(out)]
    assert main(argv) == EXIT_OK
    index = json.loads((out / "index.json").read_text())
    curves = []
    for p in index["points"]:
        _, rows = read_csv(out / p["file"])
        pd = np.array([float(r[2]) for r in rows])
        curves.append(pd / pd[0])
    for slower, faster in zip(curves, curves[1:]):
        assert np.all(faster[1:] < slower[1:])


def test_empty_sweep_writes_index_only(tmp_path):
    out = tmp_path / "empty"
    assert main(["sweep", "ghz_local", "--set", "M=", "--out-dir", str(out)]) == EXIT_OK
    assert sorted(p.name for p in out.iterdir()) == ["index.json"]
    assert json.loads((out / "index.json").read_text())["points"] == []


def test_console_script_entry_point():
    res = subprocess.run([sys.executable, "-m", "qsl", "catalog"], capture_output=True, text=True)
    assert res.returncode == 0 and "ghz_global" in res.stdout
