"""Front-end tests: exit codes, file naming, config merging, plot scripts.

Everything runs in process through cli.main so the tests can assert on
return codes and captured streams without spawning interpreters.
"""

import os

import numpy as np
import pytest

from torus_echo import cli
from torus_echo.scans import load_grid, scan_phase_space


def run(*argv) -> int:
    """Invoke the CLI; normalize argparse's SystemExit to a return code."""
    try:
        return cli.main([str(a) for a in argv])
    except SystemExit as exc:
        return int(exc.code)


def read_lines(path):
    with open(path) as fh:
        return fh.read().splitlines()


@pytest.fixture(autouse=True)
def _no_thread_env(monkeypatch):
    monkeypatch.delenv(cli.THREADS_ENV, raising=False)


# ---------------------------------------------------------------------------
# fidelity


def test_fidelity_writes_expected_csv(tmp_path, capsys):
    rc = run("fidelity", "--map", "sm", "--k", 1.2, "--dkh", 2, "--n", 64,
             "--t", 20, "--out-dir", tmp_path)
    assert rc == 0
    path = tmp_path / "fidelity_sm_k1.2_dkh2_n64_t20_trace.csv"
    assert path.exists()
    lines = read_lines(path)
    assert lines[0].startswith("# torus-echo fidelity ")
    assert "k=1.2" in lines[0] and "n=64" in lines[0]
    assert lines[1] == "# kind=trace"
    assert lines[2] == "t,re_f,im_f,abs_f"
    assert len(lines) == 3 + 21
    first = lines[3].split(",")
    assert first[0] == "0"
    assert float(first[3]) == 1.0
    out = capsys.readouterr().out
    assert "wrote" in out and str(path) in out and out.rstrip().endswith("s)")


def test_fidelity_rerun_is_byte_identical(tmp_path):
    argv = ("fidelity", "--map", "hm", "--k", 0.3, "--dkh", 1.5, "--n", 32,
            "--t", 10, "--out-dir", tmp_path)
    assert run(*argv) == 0
    path = tmp_path / "fidelity_hm_k0.3_dkh1.5_n32_t10_trace.csv"
    first = path.read_bytes()
    assert run(*argv) == 0
    assert path.read_bytes() == first


def test_fidelity_pure_kind_names_the_center(tmp_path):
    rc = run("fidelity", "--map", "sm", "--k", 0.9, "--dkh", 1.5, "--n", 32,
             "--t", 10, "--kind", "pure", "--q0", 0.25, "--p0", 0.5,
             "--out-dir", tmp_path)
    assert rc == 0
    path = tmp_path / "fidelity_sm_k0.9_dkh1.5_n32_t10_pure_q0.25_p0.5.csv"
    assert path.exists()
    assert read_lines(path)[1] == "# kind=pure"


def test_plot_flag_emits_gnuplot_script(tmp_path):
    rc = run("fidelity", "--map", "sm", "--k", 1.2, "--dkh", 2, "--n", 32,
             "--t", 10, "--plot", "--out-dir", tmp_path)
    assert rc == 0
    stem = "fidelity_sm_k1.2_dkh2_n32_t10_trace"
    script = (tmp_path / (stem + ".gp")).read_text()
    assert script.startswith('set datafile separator ","')
    assert f'"{stem}.csv"' in script
    assert f'set output "{stem}.png"' in script


# ---------------------------------------------------------------------------
# exit codes


def test_missing_required_flag_is_a_config_error(tmp_path, capsys):
    rc = run("fidelity", "--map", "sm", "--k", 1.0, "--n", 32, "--t", 5,
             "--out-dir", tmp_path)
    assert rc == 2
    err = capsys.readouterr().err
    assert err.startswith("torus-echo:") and "--dkh" in err


def test_invalid_choice_exits_2(tmp_path):
    rc = run("fidelity", "--map", "xx", "--k", 1.0, "--dkh", 1, "--n", 32,
             "--t", 5, "--out-dir", tmp_path)
    assert rc == 2


def test_matrix_guard_returns_1(tmp_path, capsys):
    rc = run("fidelity", "--map", "sm", "--k", 1.0, "--dkh", 1, "--n", 16384,
             "--t", 5, "--out-dir", tmp_path)
    assert rc == 1
    assert capsys.readouterr().err.startswith("torus-echo:")


def test_domain_errors_map_to_2(tmp_path):
    rc = run("fidelity", "--map", "sm", "--k", 1.0, "--dkh", 1, "--n", 1,
             "--t", 5, "--out-dir", tmp_path)
    assert rc == 2


def test_nonpositive_counts_are_rejected(tmp_path, capsys):
    rc = run("fidelity", "--map", "sm", "--k", 1.0, "--dkh", 1, "--n", 32,
             "--t", 0, "--out-dir", tmp_path)
    assert rc == 2
    assert "--t" in capsys.readouterr().err


# ---------------------------------------------------------------------------
# config files


def test_config_supplies_defaults_and_flags_override(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(
        "# small demo run\n"
        "k = 0.7\n"
        "t = 10\n"
        "dkh = 1.5\n"
        "centered-p = yes\n"
    )
    rc = run("fidelity", "--config", cfg, "--map", "sm", "--n", 32,
             "--k", 0.9, "--out-dir", tmp_path)
    assert rc == 0
    path = tmp_path / "fidelity_sm_k0.9_dkh1.5_n32_t10_trace.csv"
    assert path.exists()
    assert "centered_p=True" in read_lines(path)[0]


def test_unknown_config_key_is_rejected(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("bogus = 3\n")
    rc = run("fidelity", "--config", cfg, "--map", "sm", "--k", 1.0,
             "--dkh", 1, "--n", 32, "--t", 5, "--out-dir", tmp_path)
    assert rc == 2
    assert "unknown config key: bogus" in capsys.readouterr().err


def test_missing_config_file_is_reported(tmp_path, capsys):
    rc = run("fidelity", "--config", tmp_path / "absent.cfg", "--map", "sm",
             "--k", 1.0, "--dkh", 1, "--n", 32, "--t", 5)
    assert rc == 2
    assert "config file not found" in capsys.readouterr().err


def test_malformed_config_line_is_reported(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("just words\n")
    rc = run("fidelity", "--config", cfg, "--map", "sm", "--k", 1.0,
             "--dkh", 1, "--n", 32, "--t", 5, "--out-dir", tmp_path)
    assert rc == 2
    assert "expected key = value" in capsys.readouterr().err


# ---------------------------------------------------------------------------
# sweeps


def test_nm_sweep_rows_and_progress(tmp_path, capsys):
    rc = run("nm-sweep", "--map", "sm", "--k-values", "0.5,1.0", "--dkh", 1,
             "--n", 32, "--t", 5, "--out-dir", tmp_path)
    assert rc == 0
    path = tmp_path / "nm_sweep_sm_k0.5-1x2_dkh1_n32_t5.csv"
    lines = read_lines(path)
    assert lines[1] == "K,deltaK_over_hbar,N,T,kind,value"
    rows = lines[2:]
    assert len(rows) == 2
    assert rows[0].startswith("0.5,") and ",trace," in rows[0]
    captured = capsys.readouterr()
    assert "nm-sweep: cell 2/2" in captured.err
    assert "wrote" in captured.out


def test_nm_sweep_gamma_companion_needs_plot_and_a_dkh_grid(tmp_path):
    base = ("nm-sweep", "--map", "sm", "--k", 0.5, "--n", 32, "--t", 5,
            "--out-dir", tmp_path)
    assert run(*base, "--dkh-values", "1,2") == 0
    stem = "nm_sweep_sm_k0.5_dkh1-2x2_n32_t5"
    assert not (tmp_path / (stem + "_gamma.csv")).exists()

    assert run(*base, "--dkh-values", "1,2", "--plot") == 0
    gamma = tmp_path / (stem + "_gamma.csv")
    assert gamma.exists()
    assert read_lines(gamma)[1] == "dkh,gamma"
    script = (tmp_path / (stem + ".gp")).read_text()
    assert "with image" in script and gamma.name in script

    assert run(*base, "--dkh", 1, "--plot") == 0
    single = "nm_sweep_sm_k0.5_dkh1_n32_t5"
    assert not (tmp_path / (single + "_gamma.csv")).exists()
    assert "using 1:6" in (tmp_path / (single + ".gp")).read_text()


def test_avg_mp_sweep_csv(tmp_path):
    rc = run("avg-mp-sweep", "--map", "hm", "--k", 0.2, "--dkh", 1, "--n", 32,
             "--t", 5, "--s", 2, "--out-dir", tmp_path)
    assert rc == 0
    lines = read_lines(tmp_path / "avg_mp_sweep_hm_k0.2_dkh1_n32_t5_s2.csv")
    assert lines[1] == "K,deltaK_over_hbar,N,T,kind,value"
    assert len(lines) == 3
    assert ",pure-average," in lines[2]


def test_grid_flags_are_mutually_exclusive(tmp_path, capsys):
    rc = run("nm-sweep", "--map", "sm", "--k-values", "0.5", "--k-min", 0.1,
             "--dkh", 1, "--n", 32, "--t", 5, "--out-dir", tmp_path)
    assert rc == 2
    assert "not both" in capsys.readouterr().err


def test_threads_env_must_be_an_integer(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv(cli.THREADS_ENV, "abc")
    rc = run("nm-sweep", "--map", "sm", "--k", 0.5, "--dkh", 1, "--n", 32,
             "--t", 5, "--out-dir", tmp_path)
    assert rc == 2
    assert cli.THREADS_ENV in capsys.readouterr().err


def test_threads_env_drives_the_pool(tmp_path, monkeypatch):
    monkeypatch.setenv(cli.THREADS_ENV, "2")
    rc = run("nm-sweep", "--map", "sm", "--k-values", "0.5,1.0", "--dkh", 1,
             "--n", 32, "--t", 5, "--out-dir", tmp_path)
    assert rc == 0


def test_explicit_zero_threads_rejected(tmp_path, capsys):
    rc = run("nm-sweep", "--map", "sm", "--k", 0.5, "--dkh", 1, "--n", 32,
             "--t", 5, "--threads", 0, "--out-dir", tmp_path)
    assert rc == 2
    assert "thread hint" in capsys.readouterr().err


# ---------------------------------------------------------------------------
# scans


def test_phase_scan_csv_and_pgm(tmp_path):
    rc = run("phase-scan", "--map", "sm", "--k", 0.9, "--dkh", 1, "--n", 32,
             "--t", 10, "--s", 3, "--out-dir", tmp_path)
    assert rc == 0
    stem = "phase_scan_sm_k0.9_dkh1_n32_t10_s3"
    grid = load_grid(tmp_path / (stem + ".csv"))
    direct = scan_phase_space("sm", 0.9, 1.0, 32, 10, 3)
    assert np.array_equal(grid.values, direct.values)
    pgm = (tmp_path / (stem + ".pgm")).read_bytes()
    assert pgm.startswith(b"P5 3 3 255\n")
    assert len(pgm) == len(b"P5 3 3 255\n") + 9


def test_line_scan_csv(tmp_path):
    rc = run("line-scan", "--map", "sm", "--k", 0.9, "--dkh", 1, "--n", 32,
             "--t", 10, "--q0", 0.1, "--p0", 0.2, "--q1", 0.9, "--p1", 0.2,
             "--points", 4, "--out-dir", tmp_path)
    assert rc == 0
    lines = read_lines(tmp_path / "line_scan_sm_k0.9_dkh1_n32_t10.csv")
    assert lines[1] == "q,p,value"
    rows = [line.split(",") for line in lines[2:]]
    assert len(rows) == 4
    assert float(rows[0][0]) == pytest.approx(0.1)
    assert float(rows[-1][0]) == pytest.approx(0.9)
    assert all(float(r[1]) == pytest.approx(0.2) for r in rows)


# ---------------------------------------------------------------------------
# classical commands


def test_classical_portrait_csv(tmp_path):
    rc = run("classical-portrait", "--map", "sm", "--k", 1.2, "--orbits", 9,
             "--steps", 5, "--out-dir", tmp_path)
    assert rc == 0
    lines = read_lines(tmp_path / "portrait_sm_k1.2.csv")
    assert lines[1] == "x,p"
    rows = lines[2:]
    assert len(rows) == 9 * 6
    for row in rows:
        x, p = (float(tok) for tok in row.split(","))
        assert 0.0 <= x < 1.0 and 0.0 <= p < 1.0


def test_diffusion_csv_and_progress(tmp_path, capsys):
    rc = run("diffusion", "--map", "sm", "--k-values", "0.5,2.5",
             "--horizon", 200, "--orbits", 100, "--out-dir", tmp_path)
    assert rc == 0
    lines = read_lines(tmp_path / "diffusion_sm_k0.5-2.5x2_h200.csv")
    assert lines[1] == "K,horizon,D"
    assert lines[2].startswith("0.5,200,")
    assert len(lines) == 4
    assert "diffusion: cell 2/2" in capsys.readouterr().err


def test_classical_nm_csv(tmp_path):
    rc = run("classical-nm", "--map", "sm", "--k", 0.9, "--delta-k", 0.001,
             "--t", 50, "--grid", 4, "--out-dir", tmp_path)
    assert rc == 0
    lines = read_lines(tmp_path / "classical_nm_sm_k0.9_t50.csv")
    assert lines[1] == "K,T,value"
    k, t, value = lines[2].split(",")
    assert float(k) == 0.9 and t == "50" and float(value) >= 0.0


# ---------------------------------------------------------------------------
# rate commands


def test_gamma_curve_csv(tmp_path):
    rc = run("gamma-curve", "--dkh-max", 6, "--points", 25,
             "--out-dir", tmp_path)
    assert rc == 0
    lines = read_lines(tmp_path / "gamma_curve_max6_25.csv")
    assert lines[1] == "dkh,gamma"
    rows = lines[2:]
    assert len(rows) == 25
    d0, g0 = (float(tok) for tok in rows[0].split(","))
    assert d0 == 0.0 and g0 == 0.0
    assert float(rows[-1].split(",")[0]) == 6.0


def test_short_time_check_prints_a_summary(tmp_path, capsys):
    rc = run("short-time-check", "--map", "sm", "--k", 2.5, "--dkh", 2,
             "--n", 128, "--out-dir", tmp_path)
    assert rc == 0
    captured = capsys.readouterr()
    assert captured.out.startswith("short-time-check sm K=2.5 dkh=2 N=128:")
    assert "diverged=False" in captured.out
    assert "wrote" not in captured.out
    assert list(tmp_path.iterdir()) == []


def test_out_dir_is_created_on_demand(tmp_path):
    target = tmp_path / "deep" / "nest"
    rc = run("gamma-curve", "--dkh-max", 2, "--points", 5,
             "--out-dir", target)
    assert rc == 0
    assert (target / "gamma_curve_max2_5.csv").exists()
