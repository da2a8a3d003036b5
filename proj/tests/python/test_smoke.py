import json
import math

import pytest

mfs = pytest.importorskip("mfsplateau")


def test_build_basis_small():
    basis = mfs.MfsBasis(4, 2.0)
    assert basis.spectrum[0] == pytest.approx(math.log(15.0) / (2 * math.pi), rel=1e-14)
    assert len(basis.collocation) == 4


def test_invalid_radius_raises_config_error():
    with pytest.raises(mfs.ConfigError, match="radius must exceed 1"):
        mfs.MfsBasis(16, 0.5)


def test_solve_then_evaluate_interpolates():
    basis = mfs.MfsBasis(32, 1.5)
    f = [math.cos(2 * math.pi * j / 32) for j in range(32)]
    q = basis.solve(f)
    for j, z in enumerate(basis.collocation):
        assert basis.evaluate(q, z) == pytest.approx(f[j], abs=1e-12)


def test_flat_disk_energy_and_area():
    basis = mfs.MfsBasis(64, 1.5)
    circle = mfs.BoundaryCurve("circle")
    angles = mfs.equidistant(64)
    assert mfs.energy(basis, circle, angles, 0.9) < 1e-20
    surface = mfs.build_surface(basis, circle, angles)
    assert surface.dirichlet_energy() == pytest.approx(math.pi, abs=1e-6)


def test_gradient_matches_finite_differences():
    basis = mfs.MfsBasis(16, 1.5)
    curve = mfs.BoundaryCurve("ellipse", {"a": 2.0, "b": 1.0})
    angles = mfs.random_initial(16, 7, 6)
    g = mfs.gradient(basis, curve, angles, 0.87)
    h = 1e-6
    for j in (0, 5, 11):
        plus = list(angles)
        minus = list(angles)
        plus[j] += h
        minus[j] -= h
        fd = (mfs.energy(basis, curve, plus, 0.87) - mfs.energy(basis, curve, minus, 0.87)) / (2 * h)
        assert g[j] == pytest.approx(fd, rel=1e-5, abs=1e-9)


def test_short_run_decreases_energy():
    basis = mfs.MfsBasis(32, 1.5)
    curve = mfs.BoundaryCurve("ellipse")
    report = mfs.nesterov_run(basis, curve, mfs.equidistant(32), max_iters=200)
    assert report["iters_run"] == 200
    assert report["final_energy"] < report["energy_trace"][0][1]


def test_fourier_initial_example():
    phi = mfs.fourier_initial(4, 1.0, 1)
    expected = [0.0, math.pi / 2 + 1, math.pi, 3 * math.pi / 2 - 1]
    assert phi == pytest.approx(expected, abs=1e-15)


def test_classify_energies():
    assert mfs.classify_energies([9.1, 9.12, 12.3], 1) == [[0, 1], [2]]


def test_cli_solve_writes_report(tmp_path):
    code, out, err = mfs.run_cli(["solve", "--n", "32", "--iters", "50", "--out", str(tmp_path)])
    assert code == 0, err
    report = json.loads((tmp_path / "report.json").read_text())
    assert "final_energy" in report
    assert report["config"]["n"] == 32


def test_cli_empty_sweep_is_config_error(tmp_path):
    code, _, err = mfs.run_cli(["sweep", "--n", "16", "--out", str(tmp_path)])
    assert code == 2
    assert json.loads(err)["error"]["kind"] == "config_error"
