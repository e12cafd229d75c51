import numpy as np
import pytest

import affapprox as ax


def _cube(n=2, m=2, d=1, theta=1.0):
    space = ax.NormedSpace.lq(2, d)
    side = (1 << m) + 1
    values = np.arange(side**n * d, dtype=np.float64).reshape(side**n, d)
    return ax.GridFunctionCube(space, n, np.zeros(n), theta, m, values)


def test_grid1d_shape_validation():
    space = ax.NormedSpace.lq(2, 2)
    with pytest.raises(ValueError):
        ax.GridFunction1D(space, 0.0, 1.0, 2, np.zeros((4, 2)))
    with pytest.raises(ValueError):
        ax.GridFunction1D(space, 1.0, 0.0, 1, np.zeros((3, 2)))


def test_grid1d_points_and_json():
    space = ax.NormedSpace.lq(2, 1)
    h = ax.GridFunction1D.from_callable(space, -1.0, 1.0, 2, lambda t: [t * t])
    assert np.allclose(h.points(), [-1, -0.5, 0, 0.5, 1])
    assert h.spacing == 0.5
    back = ax.GridFunction1D.from_json(h.to_json())
    assert back.space == h.space and back.m == h.m
    assert np.array_equal(back.values, h.values)


def test_cube_points_row_major():
    cube = _cube(n=2, m=1)
    pts = cube.points()
    # row-major: last coordinate varies fastest
    assert np.allclose(pts[:3], [[0.0, 0.0], [0.0, 0.5], [0.0, 1.0]])
    assert np.allclose(pts[-1], [1.0, 1.0])


def test_cube_axis_lines_order():
    cube = _cube(n=2, m=1, d=1)
    view = cube.shape_view()
    lines0 = cube.axis_lines(0)
    # axis-0 lines vary the first index; faces run over the second axis
    assert np.array_equal(lines0[0][:, 0], view[:, 0, 0])
    assert np.array_equal(lines0[1][:, 0], view[:, 1, 0])
    lines1 = cube.axis_lines(1)
    assert np.array_equal(lines1[0][:, 0], view[0, :, 0])
    with pytest.raises(ValueError):
        cube.axis_lines(2)


def test_cube_soft_limits_and_override():
    space = ax.NormedSpace.lq(2, 1)
    with pytest.raises(ValueError):
        ax.GridFunctionCube(space, 5, np.zeros(5), 1.0, 1, np.zeros((3**5, 1)))
    big = ax.GridFunctionCube(space, 5, np.zeros(5), 1.0, 1, np.zeros((3**5, 1)),
                              allow_large=True)
    assert big.side_count == 3


def test_cube_json_roundtrip():
    cube = _cube(n=2, m=1, d=2)
    back = ax.GridFunctionCube.from_json(cube.to_json())
    assert back.space == cube.space
    assert np.array_equal(back.values, cube.values)
    assert np.array_equal(back.origin, cube.origin)


def test_grid_sampler_exact_and_off_grid():
    cube = _cube(n=2, m=2)
    s = cube.sampler()
    pts = cube.points()
    assert np.array_equal(s(pts), cube.values)
    with pytest.raises(ax.OffGridError):
        s(np.array([[0.1, 0.3]]))
    with pytest.raises(ax.OffGridError):
        s(np.array([[1.25, 0.0]]))


def test_callable_sampler():
    space = ax.NormedSpace.lq(2, 1)
    samp = ax.CallableSampler(space, 2, lambda pts: pts[:, :1] * 2.0)
    out = samp(np.array([[0.5, 0.0], [1.0, 3.0]]))
    assert np.allclose(out, [[1.0], [2.0]])
