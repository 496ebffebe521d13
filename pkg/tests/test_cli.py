import json
import math
import subprocess
import sys

import numpy as np
import pytest

from fermirel import cli, gaussian, matrixio, rindler


def run(capsys, *argv):
    code = cli.run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


# -- spectrum ---------------------------------------------------------------------------------


def test_spectrum_three_points(capsys):
    code, out, _ = run(capsys, "spectrum", "--ell-min", "-1", "--ell-max", "1", "--steps", "3")
    assert code == 0
    table = cli.parse_table(out, "csv")
    assert table.columns == ["ell", "lambda"]
    assert [row[0] for row in table.rows] == [-1.0, 0.0, 1.0]
    assert table.rows[1][1] == 0.5
    assert table.rows[0][1] == rindler.lambda_spectrum(-1.0)
    assert table.rows[2][1] == rindler.lambda_spectrum(1.0)


def test_spectrum_degenerate_range(capsys):
    code, out, err = run(capsys, "spectrum", "--ell-min", "0", "--ell-max", "0", "--steps", "2")
    assert code == 2 and out == "" and "range" in err


def test_spectrum_too_few_steps(capsys):
    assert run(capsys, "spectrum", "--steps", "1")[0] == 2


def test_spectrum_pairing_in_emitted_file(tmp_path, capsys):
    path = tmp_path / "spectrum.csv"
    code, out, _ = run(capsys, "spectrum", "--ell-min", "-2", "--ell-max", "2", "--steps", "401", "--out", str(path))
    assert code == 0 and out == ""
    table = cli.parse_table(path.read_text(), "csv")
    lam = np.array([row[1] for row in table.rows])
    assert len(lam) == 401
    assert np.all(np.diff(lam) < 0)
    np.testing.assert_allclose(lam + lam[::-1], 1.0, atol=1e-15)


# -- verify ------------------------------------------------------------------------------------


def test_verify_passes(capsys):
    code, out, _ = run(capsys, "verify", "--seed", "42", "--trials", "100", "--modes", "3")
    assert code == 0
    table = cli.parse_table(out, "csv")
    assert [row[0] for row in table.rows] == list(cli.VERIFY_CHECKS)
    for check, trials, worst, tol, status in table.rows:
        assert trials == 100 and worst < 1e-8 and status == "PASS"


def test_verify_is_deterministic(tmp_path, capsys):
    a, b, c = (tmp_path / name for name in ("a.json", "b.json", "c.json"))
    common = ["verify", "--seed", "7", "--trials", "20", "--modes", "3", "--format", "json"]
    assert run(capsys, *common, "--out", str(a))[0] == 0
    assert run(capsys, *common, "--out", str(b))[0] == 0
    assert run(capsys, *common, "--jobs", "4", "--out", str(c))[0] == 0
    assert a.read_bytes() == b.read_bytes() == c.read_bytes()


def test_verify_reports_discrepancy(capsys):
    code, out, _ = run(capsys, "verify", "--trials", "5", "--modes", "2", "--tol", "1e-30")
    assert code == 1
    assert "FAIL" in out


def test_verify_dimension_limit(capsys):
    code, _, err = run(capsys, "verify", "--modes", "99")
    assert code == 2 and "99 modes" in err


def test_config_file_supplies_defaults(tmp_path, capsys):
    config = tmp_path / "config.json"
    config.write_text(json.dumps({"ell-min": -1, "ell_max": 1, "steps": 5, "format": "json"}))
    code, out, _ = run(capsys, "spectrum", "--config", str(config), "--steps", "3")
    assert code == 0
    table = cli.parse_table(out, "json")
    assert [row[0] for row in table.rows] == [-1.0, 0.0, 1.0]


def test_config_rejects_unknown_keys(tmp_path, capsys):
    config = tmp_path / "config.json"
    config.write_text(json.dumps({"colour": "blue"}))
    assert run(capsys, "spectrum", "--config", str(config))[0] == 2


# -- table round trip ---------------------------------------------------------------------------


@pytest.mark.parametrize("fmt", ["csv", "json"])
def test_tables_round_trip_byte_for_byte(fmt, capsys):
    for argv in (
        ["spectrum", "--ell-min", "-1.3", "--ell-max", "2.7", "--steps", "17"],
        ["entropy-nonunitary", "--lam", "0.1,0.25,0.5", "--fsq", "0,1,1e6"],
        ["entropy-rindler", "--gaussian", "1,0.05"],
    ):
        code, out, _ = run(capsys, *argv, "--format", fmt)
        assert code == 0
        assert cli.format_table(cli.parse_table(out, fmt), fmt) == out


# -- entropies -------------------------------------------------------------------------------------


def test_entropy_excite(capsys):
    code, out, _ = run(capsys, "entropy-excite", "--d", "0.25", "--f", "1")
    table = cli.parse_table(out, "csv")
    assert code == 0
    assert dict(table.rows)["relative_entropy"] == pytest.approx(0.5 * math.log(3), abs=1e-15)


def test_entropy_excite_unnormalized(capsys):
    code, _, err = run(capsys, "entropy-excite", "--d", "0.25,0.5", "--f", "1,1j")
    assert code == 2 and "expected 1" in err


def test_entropy_nonunitary_sweep(capsys):
    code, out, _ = run(capsys, "entropy-nonunitary", "--lam", "0.25,0.5", "--fsq", "0,1")
    rows = cli.parse_table(out, "csv").rows
    assert code == 0 and len(rows) == 4
    assert rows[1][2] == pytest.approx(0.5 * math.log(4 / 3), abs=1e-15)
    assert rows[2][2] == 0.0 and rows[3][2] == 0.0


def test_entropy_gaussian(tmp_path, capsys, rng):
    cov = gaussian.random_covariance(rng, 2, scale=1.5)
    cov0 = gaussian.random_covariance(rng, 2, scale=1.5)
    a, b = tmp_path / "c.json", tmp_path / "c0.json"
    matrixio.save_matrix(a, cov)
    matrixio.save_matrix(b, cov0)
    code, out, _ = run(capsys, "entropy-gaussian", "--cov", str(a), "--ref", str(b))
    values = dict(cli.parse_table(out, "csv").rows)
    t, t0 = gaussian.density_from_covariance(cov), gaussian.density_from_covariance(cov0)
    assert code == 0
    assert values["von_neumann_entropy"] == pytest.approx(gaussian.von_neumann_entropy(t), abs=1e-12)
    assert values["relative_entropy"] == pytest.approx(gaussian.relative_entropy(t, t0, cov0), abs=1e-12)
    assert values["relative_entropy_entropy_form"] == pytest.approx(values["relative_entropy"], abs=1e-8)


def test_entropy_gaussian_invalid_matrix(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"n_modes": 1, "re": [[0.7, 0.0], [0.0, 0.7]], "im": [[0, 0], [0, 0]]}))
    code, _, err = run(capsys, "entropy-gaussian", "--cov", str(path))
    assert code == 2 and "self_dual" in err


def test_entropy_rindler_gaussian(capsys):
    code, out, _ = run(capsys, "entropy-rindler", "--gaussian", "1,0.01")
    values = dict(cli.parse_table(out, "csv").rows)
    assert code == 0
    assert values["relative_entropy"] == pytest.approx(4 * math.pi * math.tanh(2 * math.pi), abs=1e-3)
    assert values["quadrature_error"] < 1e-8
    assert values["method"] == "gauss-kronrod"


def test_entropy_rindler_empty_profile(tmp_path, capsys):
    path = tmp_path / "empty.csv"
    path.write_text("")
    code, _, err = run(capsys, "entropy-rindler", "--profile", str(path))
    assert code == 2 and "empty profile" in err


def test_entropy_rindler_bad_row_reports_line(tmp_path, capsys):
    path = tmp_path / "bad.csv"
    path.write_text("ell,re,im\n0,1,0\n0.5,x,0\n")
    code, _, err = run(capsys, "entropy-rindler", "--profile", str(path))
    assert code == 2 and "line 3" in err


def test_entropy_rindler_theta_path_matches_ell_path(tmp_path, capsys):
    theta = np.linspace(-4, 4, 1601)
    values = np.exp(-2 * theta ** 2 - 1.1j * theta)
    prof = rindler.RapidityProfile(theta, values)
    theta_csv = tmp_path / "theta.csv"
    theta_csv.write_text(rindler.write_profile_csv(prof))
    code, out, _ = run(capsys, "entropy-rindler", "--profile", str(theta_csv), "--ell-grid=-6,8,2801")
    via_theta = dict(cli.parse_table(out, "csv").rows)
    assert code == 0 and via_theta["input"] == "theta"

    boost = rindler.rapidity_to_boost(prof, np.linspace(-6, 8, 2801))
    ell_csv = tmp_path / "ell.csv"
    ell_csv.write_text(rindler.write_profile_csv(boost))
    code, out, _ = run(capsys, "entropy-rindler", "--profile", str(ell_csv))
    via_ell = dict(cli.parse_table(out, "csv").rows)
    assert code == 0 and via_ell["input"] == "ell"
    assert via_theta["relative_entropy"] == pytest.approx(via_ell["relative_entropy"], abs=1e-6)


def test_entropy_rindler_theta_needs_grid(tmp_path, capsys):
    path = tmp_path / "theta.csv"
    theta = np.linspace(-4, 4, 81)
    path.write_text(rindler.write_profile_csv(rindler.RapidityProfile(theta, np.exp(-4 * theta ** 2))))
    assert run(capsys, "entropy-rindler", "--profile", str(path))[0] == 2


def test_entropy_rindler_needs_one_input(capsys):
    assert run(capsys, "entropy-rindler")[0] == 2


def test_console_script_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "fermirel.cli", "spectrum", "--steps", "2", "--format", "json"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["rows"] == [[-2.0, rindler.lambda_spectrum(-2.0)], [2.0, rindler.lambda_spectrum(2.0)]]


# -- matrix I/O ------------------------------------------------------------------------------------


def test_matrix_json_round_trip(tmp_path, rng):
    cov = gaussian.random_covariance(rng, 3)
    path = tmp_path / "m.json"
    matrixio.save_matrix(path, cov)
    np.testing.assert_array_equal(matrixio.load_covariance(path).data, cov.data)
    t = gaussian.density_from_covariance(cov)
    matrixio.save_matrix(path, t)
    np.testing.assert_array_equal(matrixio.load_density(path).data, t.data)


@pytest.mark.parametrize(
    "obj, message",
    [
        ({"re": [[0]], "im": [[0]]}, "missing"),
        ({"n_modes": 1.5, "re": [[0]], "im": [[0]]}, "positive integer"),
        ({"n_modes": 1, "re": [[0, 0]], "im": [[0, 0], [0, 0]]}, "shape"),
        ({"n_modes": 1, "re": [["a", 0], [0, 0]], "im": [[0, 0], [0, 0]]}, "numeric"),
    ],
)
def test_matrix_json_validation(obj, message):
    with pytest.raises(ValueError, match=message):
        matrixio.matrix_from_json(obj)
