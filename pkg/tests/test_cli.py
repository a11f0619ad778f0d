import subprocess
import sys

import numpy as np
import pytest

import nvdlab.cli
from nvdlab import csvio
from nvdlab.cli import cli_main
from nvdlab.errors import NumericalFailure


def test_run_swe(tmp_path, capsys):
    out = tmp_path / "swe.csv"
    code = cli_main(["run", "--problem", "swe", "--n-cells", "50", "--t-final", "0.2", "-o", str(out)])
    assert code == 0
    cols = csvio.read_columns(out)
    assert list(cols) == ["x", "h", "u", "h_ref", "u_ref"]
    assert cols["x"].size == 50
    assert "L1=" in capsys.readouterr().err


def test_run_burgers_to_stdout(capsys):
    assert cli_main(["run", "--n-cells", "20", "--t-final", "0.1", "--scheme", "waceb"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "x,u,u_ref" and len(out) == 21


def test_run_t_zero_echoes_ic(tmp_path):
    out = tmp_path / "ic.csv"
    assert cli_main(["run", "--n-cells", "16", "--t-final", "0", "-o", str(out)]) == 0
    cols = csvio.read_columns(out)
    np.testing.assert_array_equal(cols["u"], np.sin(cols["x"]))


def test_run_snapshots(tmp_path):
    out = tmp_path / "visc.csv"
    args = ["run", "--problem", "burgers-viscous", "--n-cells", "20", "--nu", "0.05",
            "--t-final", "0.2", "--snapshot-times", "0.1,0.2", "-o", str(out)]
    assert cli_main(args) == 0
    assert (tmp_path / "visc_t0.1.csv").exists() and (tmp_path / "visc_t0.2.csv").exists()
    assert list(csvio.read_columns(out)) == ["x", "u"]


def test_config_file_and_override(tmp_path):
    cfg = tmp_path / "c.ini"
    cfg.write_text("problem = swe\nn_cells = 40\nt_final = 0.1\n")
    out = tmp_path / "o.csv"
    assert cli_main(["run", "--config", str(cfg), "--n-cells", "30", "-o", str(out)]) == 0
    assert csvio.read_columns(out)["x"].size == 30


def test_converge(tmp_path, capsys):
    out = tmp_path / "conv.csv"
    assert cli_main(["converge", "--meshes", "10,20,40", "-o", str(out)]) == 0
    cols = csvio.read_columns(out)
    assert list(cols) == ["N", "L1", "p1", "L2", "p2", "Linf", "pinf"]
    np.testing.assert_array_equal(cols["N"], [10, 20, 40])
    assert np.isnan(cols["p1"][0]) and cols["p1"][2] > 1.5
    assert "adbquickest" in capsys.readouterr().err


def test_compare(tmp_path, capsys):
    stem = tmp_path / "cmp.csv"
    args = ["compare", "--problem", "swe", "--n-cells", "40", "--t-final", "0.1",
            "--schemes", "fou,adbquickest,fou", "-o", str(stem)]
    assert cli_main(args) == 0
    captured = capsys.readouterr()
    assert "duplicate scheme" in captured.err
    lines = captured.out.splitlines()
    assert lines[0] == "scheme,N,L1,L2,Linf" and len(lines) == 3
    sol = csvio.read_columns(tmp_path / "cmp_solution.csv")
    assert list(sol) == ["x", "fou", "adbquickest", "ref"]
    err = csvio.read_columns(tmp_path / "cmp_abs_error.csv")
    np.testing.assert_allclose(err["fou"], np.abs(sol["fou"] - sol["ref"]))


def test_reference_command(tmp_path):
    out = tmp_path / "ref.csv"
    assert cli_main(["reference", "--problem", "swe", "--n-cells", "20", "--t-final", "0.5", "-o", str(out)]) == 0
    assert list(csvio.read_columns(out)) == ["x", "h", "u"]


@pytest.mark.parametrize("argv", [
    ["run", "--theta", "2"],
    ["run", "--scheme", "smart"],
    ["run", "--problem", "swe", "--reference", "series"],
    ["run", "--bc-left", "periodic", "--bc-right", "transmissive"],
    ["converge", "--meshes", "10,30"],
    ["reference", "--problem", "burgers-viscous"],
    ["run", "--config", "/nonexistent/file"],
    ["run", "--unknown-flag"],
    [],
])
def test_config_errors(argv, capsys):
    assert cli_main(argv) == 2


def test_numerical_failure(monkeypatch, capsys):
    def fail(*a, **k):
        raise NumericalFailure("non-finite value at step 3, cell 7")

    monkeypatch.setattr(nvdlab.cli, "simulate", fail)
    assert cli_main(["run", "--n-cells", "10"]) == 3
    assert "step 3" in capsys.readouterr().err


def test_oracle_failure(capsys):
    # characteristics solution does not exist once the shock has formed
    assert cli_main(["run", "--n-cells", "20", "--reference", "characteristics", "--t-final", "1.0"]) == 4
    assert "shock" in capsys.readouterr().err


def test_help_exits_zero(capsys):
    assert cli_main(["run", "--help"]) == 0
    assert "problem defaults" in capsys.readouterr().out


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "nvdlab", "run", "--n-cells", "10", "--t-final", "0.05"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert proc.stdout.startswith("x,u,u_ref\n")
