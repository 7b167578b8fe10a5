import json
import math
import os
import subprocess
import sys

import pytest

from fdwave import cli, greens, subord
from fdwave.cli import main


def run(argv, capsys):
    code = main(argv)
    return code, capsys.readouterr().out


def parse_csv(text):
    lines = [ln for ln in text.splitlines() if ln and not ln.startswith("#")]
    assert lines[0] == cli.HEADER
    return [ln.split(",") for ln in lines[1:]]


# ---------------------------------------------------------------- eval

def test_eval_gaussian_grid(capsys):
    code, out = run(["eval", "--alpha", "2", "--beta", "1", "--n", "2", "--r-steps", "4",
                     "--t-min", "0.5", "--t-max", "2", "--t-steps", "3"], capsys)
    assert code == 0
    rows = parse_csv(out)
    assert len(rows) == 12
    for r, t, v, _, method in rows:
        r, t, v = float(r), float(t), float(v)
        assert v == pytest.approx((4 * math.pi * t) ** -1 * math.exp(-r * r / (4 * t)), rel=1e-14)
        assert method == "closed-form"


def test_single_point_equals_direct_call(capsys):
    code, out = run(["eval", "--alpha", "1.5", "--beta", "0.75", "--n", "1", "--r-min", "0.7",
                     "--r-max", "0.7", "--r-steps", "1", "--t-min", "1.3", "--t-max", "1.3"], capsys)
    assert code == 0
    (row,) = parse_csv(out)
    direct = greens.g_eval((1.5, 0.75, 1), (0.7, 1.3), tol=1e-10)
    assert float(row[2]) == direct.value and float(row[3]) == direct.abs_err


def test_empty_grid_header_only(tmp_path):
    out = tmp_path / "g.csv"
    assert main(["eval", "--r-steps", "0", "--out", str(out)]) == 0
    assert out.read_text() == cli.HEADER + "\n"


def test_output_identical_across_workers(tmp_path):
    args = ["eval", "--alpha", "1.7", "--beta", "0.6", "--n", "2", "--r-steps", "5",
            "--t-min", "0.5", "--t-max", "3", "--t-steps", "4", "--log-grid"]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(args + ["--out", str(a)]) == 0
    assert main(args + ["--workers", "3", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_config_file_with_override(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# gaussian\nalpha = 2\nbeta = 1\nn = 3\nr-steps = 2\nt-min = 2\nt-max = 2\n")
    code, out = run(["eval", "--config", str(cfg), "--n", "1"], capsys)
    assert code == 0
    rows = parse_csv(out)
    assert len(rows) == 2 and all(float(t) == 2.0 for _, t, *_ in rows)
    r, v = float(rows[0][0]), float(rows[0][2])
    assert v == pytest.approx((8 * math.pi) ** -0.5 * math.exp(-r * r / 8), rel=1e-14)


def test_read_config_types(tmp_path):
    p = tmp_path / "c.cfg"
    p.write_text("alpha=1.5\nworkers=2\nlog-grid=yes\nout=x.csv  # trailing\n")
    assert cli.read_config(str(p)) == {"alpha": 1.5, "workers": 2, "log_grid": True, "out": "x.csv"}


@pytest.mark.parametrize("text", ["bogus = 1\n", "alpha\n", "workers = two\n"])
def test_bad_config_exit_1(tmp_path, text):
    p = tmp_path / "c.cfg"
    p.write_text(text)
    assert main(["eval", "--config", str(p)]) == 1


@pytest.mark.parametrize("argv", [
    ["eval", "--tol", "2"],
    ["eval", "--r-min", "3", "--r-max", "1"],
    ["eval", "--workers", "0"],
    ["eval", "--bogus"],
    ["eval", "--alpha", "3"],
    ["eval", "--config", "/nonexistent/run.cfg"],
    ["eval", "--out", "/nonexistent/dir/g.csv"],
    ["kernel", "--kernel", "phi", "--alpha", "1.5", "--beta", "1.5"],
])
def test_invalid_input_exit_1(argv):
    assert main(argv) == 1


def test_numeric_failure_exit_2(capsys):
    # the wave case alpha = beta = 2 is a distribution for n = 1; off the front no route converges
    code, out = run(["eval", "--alpha", "2", "--beta", "2", "--n", "1", "--r-steps", "3"], capsys)
    assert code == 2
    rows = parse_csv(out)
    assert any(row[4] == "failed" for row in rows)
    assert any(row[4] != "failed" for row in rows)


# ---------------------------------------------------------------- kernel

def test_kernel_phi_closed_form(capsys):
    code, out = run(["kernel", "--kernel", "phi", "--alpha", "1", "--beta", "0.5",
                     "--r-min", "0.1", "--r-max", "10", "--r-steps", "7", "--log-grid"], capsys)
    assert code == 0
    for s, _, v, *_ in parse_csv(out):
        s = float(s)
        assert float(v) == pytest.approx(1 / (math.pi * math.sqrt(s) * (1 + s)), rel=1e-12)
    footer = [ln for ln in out.splitlines() if ln.startswith("# mass=")]
    assert len(footer) == 1
    mass = float(footer[0].split()[1].split("=")[1])
    assert mass == pytest.approx(1.0, abs=1e-8)


def test_kernel_wright_gaussian(capsys):
    code, out = run(["kernel", "--kernel", "wright", "--gamma-ratio", "0.5", "--r-steps", "5"], capsys)
    assert code == 0
    for s, t, v, *_ in parse_csv(out):
        s = float(s)
        assert float(v) == pytest.approx(math.exp(-s * s / 4) / math.sqrt(math.pi), rel=1e-12)


def test_kernel_footer_per_time(capsys):
    code, out = run(["kernel", "--kernel", "wright", "--gamma-ratio", "0.3", "--r-steps", "2",
                     "--t-min", "0.5", "--t-max", "2", "--t-steps", "2"], capsys)
    assert code == 0
    masses = [ln for ln in out.splitlines() if ln.startswith("# mass=")]
    assert len(masses) == 2
    for ln in masses:
        assert float(ln.split()[1].split("=")[1]) == pytest.approx(1.0, abs=1e-8)


# ---------------------------------------------------------------- mellin

def test_mellin_gaussian_unit_kernel(capsys):
    code, out = run(["mellin", "--alpha", "2", "--beta", "1", "--n", "3"], capsys)
    assert code == 0
    assert "series: unit kernel" in out


def test_mellin_delta1_series(capsys):
    a, b, n = 1.5, 0.6, 1
    code, out = run(["mellin", "--alpha", str(a), "--beta", str(b), "--n", str(n), "--base", "delta1"],
                    capsys)
    assert code == 0
    rows = [ln.split(",") for ln in out.splitlines() if ln[:1].isdigit()]
    assert len(rows) == 10
    from scipy import special as sp
    for k, c, e in rows:
        k = int(k)
        want = a * (-1) ** k * float(sp.rgamma(1 - b - b * k)) / math.factorial(k)
        assert float(c) == pytest.approx(want, rel=1e-12, abs=1e-14)
        assert float(e) == pytest.approx(a * (k + 1) - n)


def test_mellin_uncancelled_double_pole(capsys):
    assert main(["mellin", "--alpha", "2", "--beta", "1", "--n", "2", "--no-cancel"]) == 3
    assert main(["mellin", "--alpha", "2", "--beta", "1", "--n", "2"]) == 0


# ---------------------------------------------------------------- verify

def test_verify_json_lines(capsys):
    code, out = run(["verify", "mellin"], capsys)
    assert code == 0
    rows = [json.loads(ln) for ln in out.splitlines()]
    assert rows and all(set(r) == {"suite", "check", "status", "observed", "bound"} for r in rows)
    assert all(r["status"] == "pass" for r in rows)


def test_verify_greens_normalization_rows(capsys):
    code, out = run(["verify", "greens", "--tol", "1e-7"], capsys)
    assert code == 0
    names = [json.loads(ln)["check"] for ln in out.splitlines()]
    assert sum(name.startswith("normalization_") for name in names) == 9


def test_verify_detects_sign_flip(monkeypatch, capsys):
    original = subord.kernel_phi

    def flipped(*args, **kw):
        res = original(*args, **kw)
        return res.scaled(-1.0)

    # kernel values are memoized; keep flipped values out of later tests
    subord._density_cached.cache_clear()
    monkeypatch.setattr(subord, "kernel_phi", flipped)
    try:
        code, out = run(["verify", "subord"], capsys)
    finally:
        subord._density_cached.cache_clear()
    assert code == 4
    assert any(json.loads(ln)["status"] == "fail" for ln in out.splitlines())


def test_verify_suite_error_is_reported(monkeypatch, capsys):
    def boom(tol):
        raise RuntimeError("broken")
        yield

    monkeypatch.setitem(cli.verify.RUNNERS, "mellin", boom)
    code, out = run(["verify", "mellin"], capsys)
    assert code == 4
    assert json.loads(out.splitlines()[-1])["check"].startswith("error:")


@pytest.mark.slow
def test_verify_all_clean(capsys):
    code, _ = run(["verify", "all"], capsys)
    assert code == 0


def test_console_entry_point():
    env = dict(os.environ)
    proc = subprocess.run([sys.executable, "-m", "fdwave.cli", "eval", "--r-steps", "1"],
                          capture_output=True, text=True, env=env, timeout=120)
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[0] == cli.HEADER
