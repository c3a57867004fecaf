import csv
import io
import json
import subprocess
import sys

import numpy as np
import pytest

from nsgamma import cli, spectrum
from nsgamma.config import RunConfig
from nsgamma.spectrum import ConfigError

GAMMA = 6.582119569e-3


def run(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def read_table(text):
    rows = [line for line in text.splitlines() if not line.startswith("#")]
    return np.loadtxt(io.StringIO("\n".join(rows[1:])), delimiter=",", ndmin=2)


@pytest.fixture
def cfg_file(tmp_path):
    def write(text="fragment = 140Xe\n", name="run.cfg"):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path

    return write


# ------------------------------------------------------------------ config


def test_defaults_match_xe140_inputs():
    c = RunConfig()
    assert (c.hw2_mev, c.hw3_mev, c.beta2_0, c.beta3_0) == (2.2, 2.8, 0.7, 0.7)
    assert (c.tau_diss_s, c.d0_fm, c.mode, c.fragment) == (1e-19, 5.0, "exact", "140Xe")


def test_config_parsing():
    c = RunConfig.from_text("# comment\nhw2_mev = 2.0  # trailing\nrefine = false\npoints=3001\n")
    assert c.hw2_mev == 2.0 and c.refine is False and c.points == 3001


def test_widths_replace_lifetime():
    c = RunConfig.from_text("gamma2_mev = 0.001\ngamma3_mev = 0.002\n")
    assert c.tau_diss_s is None
    assert c.to_params().gamma == pytest.approx(0.003)


@pytest.mark.parametrize(
    "text, key",
    [
        ("hw2_mev = abc\n", "hw2_mev"),
        ("colour = red\n", "colour"),
        ("tau_diss_s = 1e-19\ngamma2_mev = 0.1\ngamma3_mev = 0.1\n", "tau_diss_s"),
        ("gamma2_mev = 0.1\n", "gamma3_mev"),
        ("kappa_fm = 10\nd0_fm = 5\n", "d0_fm"),
        ("mode = quantum\n", "mode"),
        ("hw3_mev = -1\n", "hw3_mev"),
        ("tau_diss_s = 0\n", "tau_diss_s"),
        ("points = 1\n", "points"),
        ("hw2_mev = 2.0\nhw2_mev = 2.1\n", "hw2_mev"),
    ],
)
def test_config_errors_name_the_key(text, key):
    with pytest.raises(ConfigError, match=key):
        RunConfig.from_text(text)


def test_echo_round_trip():
    c = RunConfig.from_text("tau_diss_s = 3.3e-19\nkappa_fm = 9.87654321\nmode = paper\nhw_max_mev = 12.5\n")
    assert RunConfig.from_text("\n".join(c.echo_lines())) == c


# ---------------------------------------------------------------- spectrum


def test_spectrum_default(capsys, cfg_file):
    code, out, _ = run(capsys, "spectrum", "--config", cfg_file())
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("# nsgamma spectrum")
    assert "hw_mev,dE_dhw_per_mev,dN_dhw_per_mev" in lines
    data = read_table(out)
    peak = data[np.argmax(data[:, 1]), 0]
    assert abs(peak - 5.0) <= GAMMA
    np.testing.assert_allclose(data[1:, 2], data[1:, 1] / data[1:, 0], rtol=1e-8)
    # nine significant digits in scientific notation
    assert lines[-1].split(",")[0].count("e") == 1 and len(lines[-1].split(",")[0].split("e")[0]) == 10


def test_spectrum_silent_without_quadrupole(capsys, cfg_file):
    code, out, _ = run(capsys, "spectrum", "--config", cfg_file("beta2_0 = 0\n"))
    assert code == 0
    data = read_table(out)
    assert np.all(data[:, 1:] == 0.0)


def test_spectrum_paper_vs_exact(tmp_path, cfg_file):
    cfg = cfg_file()
    ex, pa = tmp_path / "exact.csv", tmp_path / "paper.csv"
    assert cli.main(["spectrum", "--config", str(cfg), "--out", str(ex)]) == 0
    assert cli.main(["spectrum", "--config", str(cfg), "--out", str(pa), "--mode", "paper"]) == 0
    e = read_table(ex.read_text())
    p = read_table(pa.read_text())
    ratio = np.trapezoid(p[:, 1], p[:, 0]) / np.trapezoid(e[:, 1], e[:, 0])
    assert ratio == pytest.approx(16.0, rel=0.01)
    assert "# mode = paper" in pa.read_text()


def test_spectrum_byte_identical_and_echo_reproduces(tmp_path, cfg_file):
    cfg = cfg_file("tau_diss_s = 2e-19\nd0_fm = 4.5\npoints = 1001\n")
    a, b, c = (tmp_path / n for n in ("a.csv", "b.csv", "c.csv"))
    cli.main(["spectrum", "--config", str(cfg), "--out", str(a)])
    cli.main(["spectrum", "--config", str(cfg), "--out", str(b)])
    assert a.read_bytes() == b.read_bytes()
    echoed = [line[2:] for line in a.read_text().splitlines() if line.startswith("# ") and " = " in line]
    cfg2 = cfg_file("\n".join(echoed) + "\n", name="echo.cfg")
    cli.main(["spectrum", "--config", str(cfg2), "--out", str(c)])
    assert c.read_bytes() == a.read_bytes()


def test_bad_config_exit_code(capsys, cfg_file):
    code, out, err = run(capsys, "spectrum", "--config", cfg_file("hw2_mev = x\n"))
    assert code == 2 and "hw2_mev" in err and out == ""


def test_missing_config_file(capsys, tmp_path):
    code, _, err = run(capsys, "yield", "--config", tmp_path / "nope.cfg")
    assert code == 2 and "config" in err


def test_grid_too_coarse_is_config_error(capsys, cfg_file):
    code, _, err = run(capsys, "spectrum", "--config", cfg_file("refine = false\npoints = 101\n"))
    assert code == 2 and "grid points" in err


def test_numeric_failure_exit_code(capsys, cfg_file, monkeypatch):
    def boom(*a, **k):
        raise spectrum.NumericError("did not converge")

    monkeypatch.setattr(spectrum, "build_spectrum", boom)
    code, _, err = run(capsys, "yield", "--config", cfg_file())
    assert code == 3 and "did not converge" in err


# ------------------------------------------------------------------- yield


def test_yield_default(capsys, cfg_file):
    code, out, _ = run(capsys, "yield", "--config", cfg_file())
    assert code == 0
    data = json.loads(out)
    assert set(data) >= {
        "n_gamma_per_fission", "e_total_mev", "e_total_time_domain_mev",
        "parseval_rel_error", "peak_hw_mev", "fwhm_mev",
    }
    assert 4e-3 <= data["n_gamma_per_fission"] <= 1.6e-2
    assert data["parseval_rel_error"] <= 1e-4
    assert data["fwhm_mev"] == pytest.approx(GAMMA, rel=0.05)


def test_yield_doubles_with_tau(capsys, cfg_file):
    _, out1, _ = run(capsys, "yield", "--config", cfg_file())
    _, out2, _ = run(capsys, "yield", "--config", cfg_file("tau_diss_s = 2e-19\n", name="t2.cfg"))
    ratio = json.loads(out2)["n_gamma_per_fission"] / json.loads(out1)["n_gamma_per_fission"]
    assert ratio == pytest.approx(2.0, rel=0.01)


def test_yield_zero_dipole(capsys, cfg_file):
    code, out, _ = run(capsys, "yield", "--config", cfg_file("beta3_0 = 0\n"))
    assert code == 0 and json.loads(out)["n_gamma_per_fission"] == 0.0


# ------------------------------------------------------------------- sweep


def test_sweep_tau_log_slope(capsys, cfg_file):
    code, out, _ = run(
        capsys, "sweep", "--config", cfg_file(), "--param", "tau_diss_s",
        "--from", "1e-20", "--to", "1e-18", "--points", "5", "--log",
    )
    assert code == 0
    assert "param_value,n_gamma_per_fission,e_total_mev" in out
    data = read_table(out)
    assert data.shape == (5, 3)
    slope = np.polyfit(np.log(data[:, 0]), np.log(data[:, 1]), 1)[0]
    assert slope == pytest.approx(1.0, abs=0.01)


def test_sweep_d0_quadratic(capsys, cfg_file):
    _, out, _ = run(capsys, "sweep", "--config", cfg_file(), "--param", "d0_fm", "--from", "2.5", "--to", "5", "--points", "2")
    data = read_table(out)
    assert data.shape == (2, 3)
    assert data[1, 1] / data[0, 1] == pytest.approx(4.0, rel=0.01)
    assert data[1, 1] > data[0, 1]


def test_sweep_with_explicit_widths(capsys, cfg_file):
    cfg = cfg_file("gamma2_mev = 0.003\ngamma3_mev = 0.003\n")
    code, out, _ = run(capsys, "sweep", "--config", cfg, "--param", "tau_diss_s", "--from", "1e-19", "--to", "2e-19", "--points", "2")
    assert code == 0
    data = read_table(out)
    assert data[1, 1] / data[0, 1] == pytest.approx(2.0, rel=0.01)


@pytest.mark.parametrize(
    "extra",
    [["--from", "2", "--to", "1"], ["--from", "0", "--to", "1", "--log"], ["--from", "1", "--to", "2", "--points", "1"]],
)
def test_sweep_bad_range(capsys, cfg_file, extra):
    code, _, _ = run(capsys, "sweep", "--config", cfg_file(), "--param", "hw2_mev", *extra)
    assert code == 2


# ---------------------------------------------------------------- validate


def test_validate_default(capsys, tmp_path):
    report = tmp_path / "report.csv"
    code, out, _ = run(capsys, "validate", "--out", report)
    assert code == 0
    assert "0 failed check(s)" in out
    assert "hbar_c_mev_fm = 197.3269804" in out
    assert "delta_line_fraction" in out
    rows = list(csv.DictReader(report.open()))
    ratio = next(r for r in rows if r["check_name"] == "paper_to_exact_energy_ratio")
    assert float(ratio["test_value"]) == pytest.approx(16.0, rel=0.01)
    assert all(r["passed"] == "True" for r in rows if r["kind"] == "check")


def test_validate_zero_width(capsys, cfg_file):
    code, _, err = run(capsys, "validate", "--config", cfg_file("gamma2_mev = 0\ngamma3_mev = 0\n"))
    assert code == 2


def test_validate_broad_line(capsys, cfg_file):
    code, out, _ = run(capsys, "validate", "--config", cfg_file("gamma2_mev = 0.75\ngamma3_mev = 0.75\n"))
    assert code == 0
    assert "WARN  narrow_resonance" in out


def test_validate_counts_failures(capsys, monkeypatch):
    from nsgamma import oracle

    bad = [oracle.OracleReport(f"c{i}", 1.0, 2.0, 1.0, 0.1, False) for i in range(130)]
    monkeypatch.setattr(cli, "validation_rows", lambda cfg: bad)
    code, _, _ = run(capsys, "validate")
    assert code == 125


def test_module_entry_point(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("points = 201\n")
    proc = subprocess.run(
        [sys.executable, "-m", "nsgamma", "yield", "--config", str(cfg)],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0, proc.stderr
    assert json.loads(proc.stdout)["n_gamma_per_fission"] > 0
