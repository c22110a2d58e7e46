from pathlib import Path

import pytest

from evanskit.cli import main

ROOT = Path(__file__).resolve().parent.parent
CONFIGS = ROOT / "configs"
GOLDEN = Path(__file__).resolve().parent / "golden"


def run(tmp_path, scenario, text=None, config=None, extra=()):
    if config is None:
        config = tmp_path / "run.cfg"
        config.write_text(text)
    out = tmp_path / "out"
    code = main([scenario, "--config", str(config), "--out", str(out), *extra])
    return code, out


@pytest.mark.parametrize("scenario", ["interval", "maslov", "pencil", "count"])
def test_golden_outputs(tmp_path, scenario):
    code, out = run(tmp_path, scenario, config=CONFIGS / f"{scenario}.cfg")
    assert code == 0
    assert (out / "result.csv").read_bytes() == (GOLDEN / f"{scenario}.csv").read_bytes()
    assert (out / "summary.txt").read_text() == (GOLDEN / f"{scenario}.summary.txt").read_text()


def summary(out):
    return (out / "summary.txt").read_text().splitlines()


def test_interval_count(tmp_path):
    code, out = run(tmp_path, "interval", config=CONFIGS / "interval.cfg")
    assert code == 0 and "count = 2" in summary(out)


def test_maslov_flow(tmp_path):
    code, out = run(tmp_path, "maslov", config=CONFIGS / "maslov.cfg")
    assert code == 0 and "flow = -2" in summary(out)


def test_pencil_multiplicity(tmp_path):
    code, out = run(tmp_path, "pencil", config=CONFIGS / "pencil.cfg")
    assert code == 0 and "multiplicity = 2" in summary(out)


def test_schrod1d_and_disc_run(tmp_path):
    code, out = run(tmp_path, "schrod1d", config=CONFIGS / "schrod1d.cfg")
    assert code == 0 and "count = 2" in summary(out)
    code, out = run(tmp_path, "disc", config=CONFIGS / "disc.cfg")
    assert code == 0
    lines = (out / "result.csv").read_text().splitlines()
    assert lines[0].startswith("# evanskit scenario=disc config_sha256=")
    assert lines[1] == "k,re_dk,im_dk,re_ratio,im_ratio,term,partial_sum"
    assert len(lines) == 2 + 401


def test_deterministic(tmp_path):
    _, a = run(tmp_path / "a", "count", config=CONFIGS / "count.cfg")
    _, b = run(tmp_path / "b", "count", config=CONFIGS / "count.cfg", extra=("--seed", "7", "--threads", "1"))
    assert (a / "result.csv").read_bytes() == (b / "result.csv").read_bytes()


def test_config_error_exit_code(tmp_path, capsys):
    code, _ = run(tmp_path, "disc", "scenario = disc\n[disc]\nlambda = 7\np = 0\n")
    assert code == 1
    assert "line 4" in capsys.readouterr().err


def test_missing_config_file(tmp_path):
    code, _ = run(tmp_path, "interval", config=tmp_path / "absent.cfg")
    assert code == 1


def test_on_spectrum_exit_code(tmp_path):
    # window endpoint at the Dirichlet eigenvalue pi^2
    text = "scenario = interval\n[window]\nlambda1 = 9.869604401089358\nlambda2 = 20\n"
    code, _ = run(tmp_path, "interval", text)
    assert code == 2


def test_numerical_error_exit_code(tmp_path, capsys):
    # 400 modes cannot certify a 1e-12 tail for p = 2
    text = "scenario = disc\n[disc]\nlambda = 7\nmax_mode = 400\ntail_tol = 1e-12\n"
    code, _ = run(tmp_path, "disc", text)
    assert code == 3
    assert "TruncationError" in capsys.readouterr().err


def test_wide_window_is_resolved(tmp_path):
    text = "scenario = interval\n[window]\nlambda1 = 5\nlambda2 = 2000\n[contour]\nsamples = 8\n"
    code, out = run(tmp_path, "interval", text)
    assert code == 0
    assert "count = 14" in summary(out)


def test_threads_from_environment(tmp_path, monkeypatch):
    monkeypatch.setenv("EVANSKIT_THREADS", "2")
    code, _ = run(tmp_path, "pencil", config=CONFIGS / "pencil.cfg")
    assert code == 0
