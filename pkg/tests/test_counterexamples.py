import math

import numpy as np
import pytest

import affapprox as ax
from corpus import bump_instance


def test_spec_validation():
    with pytest.raises(ValueError):
        ax.CounterexampleSpec(0, 2.0)
    with pytest.raises(ValueError):
        ax.CounterexampleSpec(3, 1.5)
    with pytest.raises(ValueError):
        ax.CounterexampleSpec(3, 2.0, 0)


def test_bump_path_m1_midpoint():
    path = ax.BumpPath(1, 2.0)
    assert np.array_equal(path.value_dyadic(1, 1), [0.5])
    assert np.array_equal(ax.BumpPath(1, 3.0).value_dyadic(1, 1), [0.5])


def test_bump_path_endpoints_zero():
    for m, p in ((3, 2.0), (5, 3.0)):
        path = ax.BumpPath(m, p)
        assert np.all(path.value_dyadic(0, 0) == 0.0)
        assert np.all(path.value_dyadic(1, 0) == 0.0)


def test_bump_path_increment_norms():
    for p in (2.0, 3.0):
        for m in range(1, 11):
            path = ax.BumpPath(m, p)
            for k in range(1, m + 1):
                vals = path.level_values(k)
                inc = vals[1:] - vals[:-1]
                norms = np.sum(np.abs(inc) ** p, axis=1) ** (1.0 / p)
                expect = (k / m) ** (1.0 / p) / (1 << k)
                assert float(np.max(np.abs(norms - expect))) <= 1e-12


def test_bump_path_dyadic_vs_float_eval():
    path = ax.BumpPath(4, 2.0)
    for num, lev in ((3, 5), (7, 6), (1, 2), (13, 4)):
        exact = path.value_dyadic(num, lev)
        approx = path(num / (1 << lev))
        assert np.max(np.abs(exact - approx)) <= 1e-15
    with pytest.raises(ValueError):
        path.value_dyadic(9, 3)
    with pytest.raises(ValueError):
        path.level_values(5)


def test_padded_line_seams_and_ramp():
    for n in (1, 4, 16):
        spec = ax.CounterexampleSpec(3, 2.0, n)
        g = ax.build_padded_line(spec)
        seam = 2.0 / math.sqrt(n)
        assert np.max(np.abs(g(seam))) <= 1e-15
        assert np.max(np.abs(g(-seam))) <= 1e-15
        at = g(2 * seam)
        assert at[-1] == pytest.approx(seam, abs=1e-15)
        assert np.all(at[:-1] == 0.0)


def test_padded_line_lipschitz():
    spec = ax.CounterexampleSpec(4, 2.0, 4)
    g = ax.build_padded_line(spec)
    grid = ax.GridFunction1D.from_callable(g.space, -2.0, 2.0, 8, g)
    assert ax.lipschitz_estimate(grid) <= 1.0 + 1e-9


def test_product_field_values_and_lipschitz():
    spec = ax.CounterexampleSpec(3, 2.0, 2)
    F = ax.build_product_field(spec)
    g = F.line
    out = F(np.zeros((1, 2)))[0]
    block = g(0.0)
    assert np.array_equal(out[: block.shape[0]], block)
    assert np.array_equal(out[block.shape[0]:], block)

    rng = np.random.default_rng(5)
    pts = rng.uniform(-1, 1, (60, 2))
    vals = F(pts)
    for i in range(pts.shape[0] - 1):
        d = pts[i + 1:] - pts[i]
        dist = np.sqrt(np.sum(d * d, axis=1))
        vn = ax.norm_eval_many(F.space, vals[i + 1:] - vals[i])
        assert float(np.max(vn / dist)) <= 1.0 + 1e-9


def test_product_field_axis_restriction():
    spec = ax.CounterexampleSpec(3, 2.0, 3)
    F = ax.build_product_field(spec)
    y = np.array([0.9, 0.05, 0.2])
    ts = np.linspace(-0.1, 0.1, 7)
    pts = np.tile(y, (7, 1))
    pts[:, 1] = ts
    vals = F(pts)
    d = spec.m + 1
    assert np.allclose(vals[:, d:2 * d], F.line(ts), atol=1e-15)
    for j in (0, 2):  # frozen coordinates contribute constant blocks
        assert np.ptp(vals[:, j * d:(j + 1) * d], axis=0).max() == 0.0


def test_certify_interval_examples():
    spec = ax.CounterexampleSpec(3, 2.0)
    rep = ax.certify_interval(spec, 0.0, 1.0)
    assert rep.details["k"] == 2
    assert rep.certificate == pytest.approx(1 / (8 * math.sqrt(3)), abs=1e-12)
    assert rep.threshold == pytest.approx(1 / (16 * math.sqrt(3)), abs=1e-12)
    assert rep.passed

    rep2 = ax.certify_interval(spec, 0.0, 0.5)
    assert rep2.details["k"] == 3
    assert rep2.certificate == pytest.approx(0.5 / (math.sqrt(3) * 8), abs=1e-12)
    assert rep2.threshold == pytest.approx(0.5 / (16 * math.sqrt(3)), abs=1e-12)
    assert rep2.passed


def test_certify_interval_precondition():
    spec = ax.CounterexampleSpec(3, 2.0)
    with pytest.raises(ValueError):
        ax.certify_interval(spec, 0.0, 0.4)  # below 4/2^m
    with pytest.raises(ValueError):
        ax.certify_interval(spec, 0.5, 0.5)
    with pytest.raises(ValueError):
        ax.certify_interval(spec, -0.1, 0.9)


def test_certify_interval_matches_grid_certificate():
    spec = ax.CounterexampleSpec(4, 2.0)
    path = ax.build_bump_path(spec)
    grid = ax.GridFunction1D.from_callable(path.space, 0.0, 1.0, spec.m, path)
    rep = ax.certify_interval(spec, 0.25, 0.75)
    k = rep.details["k"]
    lo, hi = rep.details["interval"]
    li = int(round(lo * (1 << spec.m)))
    ri = int(round(hi * (1 << spec.m)))
    assert rep.certificate == pytest.approx(ax.midpoint_certificate(grid, li, ri), abs=1e-15)
    assert 4.0 / (1 << k) <= 0.5 < 8.0 / (1 << k)


def test_certify_interval_sweep_all_windows():
    for m, p in ((3, 2.0), (5, 3.0)):
        spec = ax.CounterexampleSpec(m, p)
        path = ax.build_bump_path(spec)
        denom = 1 << m
        for i in range(denom):
            for j in range(i + 4, denom + 1):
                rep = ax.certify_interval(spec, i / denom, j / denom, path)
                assert rep.passed


def test_certify_window_first_branch():
    spec = ax.CounterexampleSpec(4, 2.0, 4)
    rep = ax.certify_window(spec, 0.0, 1.0)
    assert rep.details["branch"] == "bump"
    assert rep.passed


def test_certify_window_second_branch():
    spec = ax.CounterexampleSpec(4, 2.0, 64)
    rep = ax.certify_window(spec, 0.0, 2.0)
    assert rep.details["branch"] == "ramp"
    # ramp midpoint certificate is at least (r - 2/sqrt(n))/2
    assert rep.certificate >= (2.0 - 2.0 / 8.0) / 2.0 - 1e-12
    assert rep.passed


def test_certify_window_preconditions():
    spec = ax.CounterexampleSpec(4, 2.0, 4)
    with pytest.raises(ValueError):
        ax.certify_window(spec, 0.0, 0.5 / (1 << spec.m))  # r too small
    with pytest.raises(ValueError):
        ax.certify_window(spec, 0.9, 1.0)  # |y| > 1/sqrt(n)


def test_certify_ball_delegation():
    # depth 9 keeps the radius precondition 32/(sqrt(n) 2^m) below the radii
    spec = ax.CounterexampleSpec(9, 2.0, 4)
    rep = ax.certify_ball(spec, np.zeros(4), 0.5)
    assert rep.details["axis"] == 0
    assert rep.passed

    rep2 = ax.certify_ball(spec, np.array([0.9, 0.0, 0.0, 0.0]), 0.05)
    assert rep2.details["axis"] == 1
    assert rep2.passed


def test_certify_ball_preconditions():
    spec = ax.CounterexampleSpec(4, 2.0, 2)
    with pytest.raises(ValueError):
        ax.certify_ball(spec, np.array([1.0, 0.0]), 0.1)
    with pytest.raises(ValueError):
        ax.certify_ball(spec, np.array([0.8, 0.0]), 0.5)  # ball pokes out


def test_ball_consequence_empirical():
    # sampled product field, n=2, m=3: the empirical modulus at
    # eps = 1/(16 m^{1/p}) stays below min(1, 32/(sqrt(n) 2^m))
    spec = ax.CounterexampleSpec(3, 2.0, 2)
    F = ax.build_product_field(spec)
    cube = ax.GridFunctionCube.from_callable(F.space, 2, [-1.0, -1.0], 2.0, 4, F, batch=True)
    eps = 1.0 / (16.0 * math.sqrt(3))
    centers = np.array([[0.0, 0.0], [0.25, 0.0], [0.0, -0.25], [0.5, 0.5]])
    rep = ax.empirical_modulus(cube, ax.NormedSpace.lq(2, 2), eps,
                               radii=[1.0, 0.5], centers=centers, max_iter=300)
    bound = 32.0 / (math.sqrt(2) * (1 << spec.m))
    assert rep.best_rho <= min(1.0, bound)
