import numpy as np
import pytest

import affapprox as ax
from corpus import random_lipschitz_path

R1 = ax.NormedSpace.lq(2, 1)


def _f1():
    return ax.GridFunction1D(R1, 0.0, 1.0, 1, np.array([[0.0], [0.5], [0.0]]))


def _tent(m=1):
    return ax.GridFunction1D.from_callable(R1, 0.0, 1.0, m, lambda t: [min(t, 1 - t)])


def test_linear_interp_endpoints_and_midpoint():
    space = ax.NormedSpace.lq(2, 2)
    h = ax.GridFunction1D(space, 0.0, 1.0, 1, np.array([[0.0, 1.0], [9.0, 9.0], [2.0, 3.0]]))
    assert np.array_equal(ax.linear_interp(h, 0.0), [0.0, 1.0])
    assert np.array_equal(ax.linear_interp(h, 1.0), [2.0, 3.0])
    assert np.allclose(ax.linear_interp(h, 0.5), [1.0, 2.0], atol=1e-15)


def test_linear_interp_quarter_point():
    space = ax.NormedSpace.lq(2, 2)
    h = ax.GridFunction1D(space, 0.0, 1.0, 0, np.array([[0.0, 0.0], [2.0, 0.0]]))
    assert np.allclose(ax.linear_interp(h, 0.25), [0.5, 0.0], atol=1e-15)


def test_energy_level_zero_formula():
    space = ax.NormedSpace.lq(3, 2)
    h = random_lipschitz_path(space, 4, seed=5, a=-1.0, b=3.0)
    e0 = ax.energy(h, 0, 3.0)
    expect = ax.norm_eval(space, h.values[-1] - h.values[0]) ** 3 / (h.b - h.a) ** 3
    assert e0 == pytest.approx(expect, rel=1e-12)


def test_energy_linear_function_constant_profile():
    space = ax.NormedSpace.lq(2, 3)
    v = np.array([0.3, -1.0, 0.5])
    h = ax.GridFunction1D.from_callable(space, 0.0, 2.0, 4, lambda t: t * v)
    expect = ax.norm_eval(space, v) ** 2
    for j in range(5):
        assert ax.energy(h, j, 2.0) == pytest.approx(expect, rel=1e-12)


def test_energy_f1_hand_value():
    assert ax.energy(_f1(), 1, 2.0) == pytest.approx(1.0, abs=1e-12)
    assert ax.energy(_f1(), 0, 2.0) == 0.0


def test_energy_rejects_bad_level():
    with pytest.raises(ValueError):
        ax.energy(_f1(), 2, 2.0)
    with pytest.raises(ValueError):
        ax.energy(_f1(), -1, 2.0)


def test_gain_check_linear():
    space = ax.NormedSpace.lq(2, 2)
    h = ax.GridFunction1D.from_callable(space, 0.0, 1.0, 3, lambda t: [t, -t])
    rep = ax.refinement_gain_check(h, 2.0, 1.0)
    assert rep.max_deviation == pytest.approx(0.0, abs=1e-14)
    assert rep.energies[-1] == pytest.approx(rep.energies[0], rel=1e-12)
    assert rep.gain_bound == pytest.approx(rep.energies[0], rel=1e-12)
    assert rep.passed


def test_gain_check_tent_hand_values():
    rep = ax.refinement_gain_check(_tent(1), 2.0, 1.0)
    assert rep.energies[-1] == pytest.approx(1.0, abs=1e-12)
    assert rep.max_deviation == pytest.approx(0.5, abs=1e-12)
    assert rep.gain_bound == pytest.approx(1.0 / 16.0, abs=1e-12)
    assert rep.passed


def test_gain_check_random_corpus():
    space = ax.NormedSpace.lq(3, 4)
    p, K = ax.uc_params(space)
    for seed in range(200):
        h = random_lipschitz_path(space, 3 + seed % 6, seed)
        rep = ax.refinement_gain_check(h, p, K)
        assert rep.passed, f"seed {seed}: E_m={rep.energies[-1]} < bound={rep.gain_bound}"


def test_monotone_examples():
    space = ax.NormedSpace.lq(2, 3)
    lin = ax.GridFunction1D.from_callable(space, 0.0, 1.0, 3, lambda t: [t, 2 * t, 0.0])
    assert ax.refinement_monotone(lin, 2.0)
    assert ax.refinement_monotone(_f1(), 2.0)
    space4 = ax.NormedSpace.lq(2, 4)
    for seed in range(50):
        h = random_lipschitz_path(space4, 6, seed)
        assert ax.refinement_monotone(h, 2.0)


def test_energy_bounded_by_lipschitz_power():
    space = ax.NormedSpace.lq(2, 4)
    for seed in range(20):
        h = random_lipschitz_path(space, 5, seed)
        lip = ax.lipschitz_estimate(h)
        for j in range(h.m + 1):
            assert ax.energy(h, j, 2.0) <= lip**2 + 1e-9


def test_midpoint_certificate_examples():
    space = ax.NormedSpace.lq(2, 2)
    lin = ax.GridFunction1D.from_callable(space, 0.0, 1.0, 3, lambda t: [t, 1 - t])
    assert ax.midpoint_certificate(lin, 0, 8) == pytest.approx(0.0, abs=1e-14)
    assert ax.midpoint_certificate(_f1(), 0, 2) == pytest.approx(0.25, abs=1e-14)

    path = ax.build_bump_path(ax.CounterexampleSpec(3, 2.0))
    grid = ax.GridFunction1D.from_callable(path.space, 0.0, 1.0, 3, path)
    # window [0, 1/2]: midpoint at 1/4 carries the level-2 bump
    cert = ax.midpoint_certificate(grid, 0, 4)
    assert cert == pytest.approx(0.5 / (np.sqrt(3) * 4.0), abs=1e-12)


def test_midpoint_certificate_validates_indices():
    with pytest.raises(ValueError):
        ax.midpoint_certificate(_f1(), 0, 1)  # odd gap: midpoint off-grid
    with pytest.raises(ValueError):
        ax.midpoint_certificate(_f1(), 1, 1)
    with pytest.raises(ValueError):
        ax.midpoint_certificate(_f1(), 0, 4)


def test_certificate_below_fit_sup_error():
    # certificate validity against the solver over the same window
    space = ax.NormedSpace.lq(2, 4)
    for seed in (0, 1, 2):
        h = random_lipschitz_path(space, 4, seed)
        pts = h.points()[:, None]
        for left, right in ((0, 16), (0, 8), (4, 12), (2, 6)):
            fit = ax.best_affine_fit((pts[left:right + 1], h.values[left:right + 1]), space)
            cert = ax.midpoint_certificate(h, left, right)
            assert cert <= fit.sup_error + 1e-9


def test_report_json_shape():
    rep = ax.refinement_gain_check(_tent(2), 2.0, 1.0)
    obj = rep.to_json()
    assert set(obj) == {"energies", "gain_bound", "max_deviation", "pass", "tolerance"}
    assert len(obj["energies"]) == 3
