import csv
import json

import numpy as np
import pytest

from cpmmg.cli import REPORT_FILES, main


def _rows(path):
    with open(path) as fh:
        return list(csv.DictReader(fh))


@pytest.fixture(scope="module")
def run_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("run")
    assert main(["run", "--years", "12", "--seed", "42", "--out", str(out)]) == 0
    return out


def test_reports_written(run_dir):
    for f in REPORT_FILES:
        assert (run_dir / f).exists()


def test_eens_table_shape(run_dir, bundled):
    rows = _rows(run_dir / "eens_by_mode.csv")
    assert len(rows) == sum(len(bundled.catalog(m)) for m in bundled.mg_tags) * 4
    assert {r["mode"] for r in rows} == {"JO", "SD", "IO", "GC"}


def test_summary_metadata(run_dir):
    s = json.loads((run_dir / "summary.json").read_text())
    assert s["seed"] == 42 and s["years"] == 12 and len(s["config_hash"]) == 64
    tot = sum(float(r["eens_mwh_per_year"]) for r in _rows(run_dir / "eens_by_mode.csv"))
    assert tot == pytest.approx(s["total_eens"])


def test_convergence_rows_are_prefix_means(run_dir):
    conv = _rows(run_dir / "convergence.csv")
    assert len(conv) == 12
    # rebuild yearly totals from the running mean and check the prefix property
    means = np.array([float(r["mean_eens"]) for r in conv])
    yearly = means * np.arange(1, 13) - np.concatenate([[0], means[:-1] * np.arange(1, 12)])
    np.testing.assert_allclose(np.cumsum(yearly) / np.arange(1, 13), means)
    hist = _rows(run_dir / "histogram.csv")
    assert sum(int(r["count"]) for r in hist) == 12


def test_byte_identical(run_dir, tmp_path):
    assert main(["run", "--years", "12", "--seed", "42", "--out", str(tmp_path), "--threads", "2"]) == 0
    for f in REPORT_FILES:
        assert (tmp_path / f).read_bytes() == (run_dir / f).read_bytes()


def test_ideal_cyber_not_worse(run_dir, tmp_path):
    assert main(["run", "--years", "12", "--seed", "42", "--out", str(tmp_path), "--ideal-cyber"]) == 0
    ideal = json.loads((tmp_path / "summary.json").read_text())["total_eens"]
    assert ideal <= json.loads((run_dir / "summary.json").read_text())["total_eens"]


@pytest.mark.parametrize("argv", [
    ["run", "--years", "0"],
    ["run", "--case", "/nonexistent/case.json"],
    ["run", "--bogus"],
    ["run", "--t-ini", "0"],
    ["run", "--lambda-ser", "0"],
    ["run", "--ideal-cyber", "--ablate-indirect"],
    [],
])
def test_validation_errors_exit_one(argv, capsys):
    assert main(argv) == 1
    assert "error" in capsys.readouterr().err


def test_runtime_error_exits_two(tmp_path, capsys):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    assert main(["run", "--years", "1", "--out", str(blocker / "sub")]) == 2
    assert "runtime error" in capsys.readouterr().err


def test_help_mentions_flags(capsys):
    with pytest.raises(SystemExit) as e:
        main(["run", "--help"])
    assert e.value.code == 0
    out = capsys.readouterr().out
    for flag in ("--ideal-cyber", "--t-ini", "--lambda-thr", "--emit-lp-dumps", "--threads"):
        assert flag in out
