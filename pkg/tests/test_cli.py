import csv
import io
import math
import subprocess
import sys

import numpy as np
import pytest

from ztinv.cli import EXIT_CONFIG, EXIT_EVAL, EXIT_FRACTIONAL, EXIT_OK, FRACTIONAL_WARNING, run

from conftest import EXAMPLE1_COEFFS


def invoke(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


def rows(text, sep=","):
    body = [line for line in text.splitlines() if not line.startswith("#")]
    return list(csv.DictReader(body, delimiter=sep))


def test_invert_example1():
    code, out, _ = invoke("invert", "--expr", "exp(1/z)*sin(1/z)", "--method", "dft", "--N", "64")
    assert code == EXIT_OK
    table = rows(out)
    assert len(table) == 64
    values = [float(r["x_tilde"]) for r in table[:6]]
    np.testing.assert_allclose(values, EXAMPLE1_COEFFS, atol=1e-9)
    assert out.splitlines()[0] == "n,x_tilde"
    assert "# dft: status=ok imag_leakage=" in out


def test_output_format_is_17_digits():
    _, out, _ = invoke("invert", "--expr", "1/(1-0.5*z^-1)", "--N", "16")
    first = rows(out)[0]["x_tilde"]
    assert first == format(1 / (1 - 0.5 ** 16), ".17g")
    assert "\r" not in out


def test_invert_quad_columns():
    code, out, _ = invoke("invert", "--expr", "1+z^-1", "--method", "quad", "--N", "3")
    assert code == EXIT_OK
    assert out.splitlines()[0] == "n,x_tilde,est_error,refinements"


def test_invert_all_methods_tsv():
    code, out, _ = invoke("invert", "--expr", "z^-1", "--method", "all", "--N", "4", "--format", "tsv")
    assert code == EXIT_OK
    table = rows(out, "\t")
    assert list(table[0]) == ["n", "x_tilde_lsq", "x_tilde_dft", "x_tilde_quad"]
    for key in ("x_tilde_lsq", "x_tilde_dft", "x_tilde_quad"):
        assert float(table[1][key]) == pytest.approx(1.0, abs=1e-9)


def test_compare_example2():
    code, out, _ = invoke("compare", "--expr", "exp(exp(1/z))", "--N", "64", "--radius", "1.0")
    assert code == EXIT_OK
    table = rows(out)
    for r in table[:3]:
        assert float(r["oracle"]) == pytest.approx(math.e, abs=1e-15)
        for m in ("lsq", "dft", "quad"):
            if r[m]:
                assert float(r[f"abs_err_{m}"]) <= 1e-8
    assert table[0]["dft"] and table[0]["quad"]


def test_compare_survives_failed_method():
    # N=60 unknowns with m=61 points forces a rank-deficient LSQ solve
    code, out, err = invoke("compare", "--expr", "exp(1/z)", "--N", "60", "--m", "61",
                            "--annulus", "1.9", "2.0")
    assert code == EXIT_OK
    table = rows(out)
    assert all(r["lsq"] == "" for r in table)
    assert all(r["dft"] != "" for r in table)
    assert "# lsq: status=failed RankDeficient" in out
    assert "lsq failed" in err


def test_compare_without_oracle():
    code, out, _ = invoke("compare", "--expr", "log(2+z^-1)", "--N", "8")
    assert code == EXIT_OK
    assert out.splitlines()[0] == "n,lsq,dft,quad"
    assert "# oracle: status=unavailable" in out


def test_fractional_power_exit():
    code, out, err = invoke("invert", "--expr", "1/(1-0.5*z^-0.5)")
    assert code == EXIT_FRACTIONAL
    assert FRACTIONAL_WARNING in err
    assert out == ""


def test_parse_error_exit():
    code, _, err = invoke("invert", "--expr", "2z")
    assert code == EXIT_CONFIG
    assert "error" in err


def test_bad_flag_exit():
    assert invoke("invert", "--expr", "z^-1", "--N", "0")[0] == EXIT_CONFIG
    assert invoke("frobnicate")[0] == EXIT_CONFIG
    assert invoke("invert", "--expr", "z^-1", "--method", "lsq", "--N", "10",
                  "--annulus", "0.5", "2")[0] == EXIT_CONFIG


def test_evaluation_failure_exit():
    code, _, err = invoke("invert", "--expr", "1/(1-z^-1)", "--N", "8")
    assert code == EXIT_EVAL
    assert "--scale" in err


def test_scale_flag():
    code, out, _ = invoke("invert", "--expr", "1/(1-2*z^-1)", "--scale", "0.25", "--N", "64")
    assert code == EXIT_OK
    x = np.array([float(r["x_tilde"]) for r in rows(out)[:21]])
    np.testing.assert_allclose(x, 2.0 ** np.arange(21), rtol=1e-8)


def test_scale_overflow_exit():
    code, _, _ = invoke("invert", "--expr", "1/(1-0.5*z^-1)", "--scale", "0.01", "--N", "1024")
    assert code == EXIT_EVAL


def test_radius_warning_for_other_methods():
    code, _, err = invoke("invert", "--expr", "z^-1", "--method", "dft", "--N", "4", "--radius", "2")
    assert code == EXIT_OK
    assert "--radius only affects the quad method" in err


def test_error_model_ratio():
    _, out20, _ = invoke("error-model", "--A", "1", "--a", "0.9", "--n", "0", "--N", "20")
    _, out40, _ = invoke("error-model", "--A", "1", "--a", "0.9", "--n", "0", "--N", "40")
    e20 = float(rows(out20)[0]["predicted_error"])
    e40 = float(rows(out40)[0]["predicted_error"])
    assert e20 / e40 == pytest.approx(0.9 ** -20, rel=0.15)
    _, both, _ = invoke("error-model", "--a", "0.9", "--N", "20", "40")
    assert float(rows(both)[1]["ratio_to_first_N"]) == pytest.approx(e20 / e40)


def test_error_model_guards():
    assert invoke("error-model", "--a", "1.0", "--N", "20")[0] == EXIT_CONFIG
    assert invoke("error-model", "--a", "0.5", "--n", "30", "--N", "20")[0] == EXIT_CONFIG


def test_oracle_command():
    code, out, _ = invoke("oracle", "--expr", "exp(1/z)*sin(1/z)", "--N", "6")
    assert code == EXIT_OK
    np.testing.assert_allclose([float(r["x"]) for r in rows(out)], EXAMPLE1_COEFFS, atol=1e-16)
    assert invoke("oracle", "--expr", "z*z^-1", "--N", "4")[0] == EXIT_CONFIG


def test_output_file(tmp_path):
    path = tmp_path / "x.csv"
    code, out, _ = invoke("invert", "--expr", "z^-2", "--N", "4", "-o", str(path))
    assert code == EXIT_OK and out == ""
    assert path.read_bytes().startswith(b"n,x_tilde\n0,")


def test_seed_environment_override(monkeypatch):
    args = ("invert", "--expr", "exp(1/z)", "--method", "lsq", "--N", "12")
    base = invoke(*args)[1]
    monkeypatch.setenv("ZTINV_SEED", "7")
    assert invoke(*args)[1] == invoke(*args, "--seed", "7")[1]
    assert invoke(*args)[1] != base


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "ztinv", "invert", "--expr", "1/(1-0.5*z^-0.5)"],
                          capture_output=True, text=True)
    assert proc.returncode == EXIT_FRACTIONAL
    assert FRACTIONAL_WARNING in proc.stderr
