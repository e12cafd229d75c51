"""Sampled vector-valued functions on dyadic grids of intervals and cubes."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .spaces import NormedSpace

# Dense storage caps; override with allow_large when a run really needs more.
MAX_DIM = 4
MAX_LEVEL = 8
MAX_POINTS = 1 << 22


class OffGridError(ValueError):
    """A sampler was asked for a point that is not on its grid."""


@dataclass
class GridFunction1D:
    """Samples of h on the uniform dyadic grid of [a, b] at level m.

    values[k] = h(a + k * 2^-m * (b - a)), so values has 2^m + 1 rows.
    """

    space: NormedSpace
    a: float
    b: float
    m: int
    values: np.ndarray

    def __post_init__(self):
        if not self.a < self.b:
            raise ValueError("need a < b")
        if self.m < 0:
            raise ValueError("resolution level m must be >= 0")
        self.values = np.ascontiguousarray(self.values, dtype=np.float64)
        expect = (1 << self.m) + 1
        if self.values.shape != (expect, self.space.dim):
            raise ValueError(
                f"values must have shape ({expect}, {self.space.dim}), got {self.values.shape}"
            )

    @property
    def spacing(self) -> float:
        return (self.b - self.a) / (1 << self.m)

    def point(self, k: int) -> float:
        return self.a + (k / (1 << self.m)) * (self.b - self.a)

    def points(self) -> np.ndarray:
        ks = np.arange((1 << self.m) + 1, dtype=np.float64)
        return self.a + (ks / (1 << self.m)) * (self.b - self.a)

    @staticmethod
    def from_callable(space: NormedSpace, a: float, b: float, m: int, fn) -> "GridFunction1D":
        pts = GridFunction1D(space, a, b, m, np.zeros(((1 << m) + 1, space.dim))).points()
        values = np.asarray([np.asarray(fn(t), dtype=np.float64) for t in pts])
        return GridFunction1D(space, a, b, m, values)

    def to_json(self) -> dict:
        return {
            "space": self.space.to_json(),
            "a": self.a,
            "b": self.b,
            "m": self.m,
            "values": self.values.tolist(),
        }

    @staticmethod
    def from_json(obj: dict) -> "GridFunction1D":
        return GridFunction1D(
            NormedSpace.from_json(obj["space"]),
            float(obj["a"]),
            float(obj["b"]),
            int(obj["m"]),
            np.asarray(obj["values"], dtype=np.float64),
        )


@dataclass
class GridFunctionCube:
    """Samples of f on the dyadic grid of the cube x + [0, theta]^n.

    values is row-major over multi-indices k in {0..2^m}^n (last axis
    fastest), row k holding f(origin + theta * k / 2^m).
    """

    space: NormedSpace
    n: int
    origin: np.ndarray
    theta: float
    m: int
    values: np.ndarray
    allow_large: bool = field(default=False, repr=False)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("domain dimension n must be >= 1")
        if self.theta <= 0:
            raise ValueError("side theta must be positive")
        if self.m < 0:
            raise ValueError("resolution level m must be >= 0")
        self.origin = np.ascontiguousarray(self.origin, dtype=np.float64)
        if self.origin.shape != (self.n,):
            raise ValueError("origin must have length n")
        side = (1 << self.m) + 1
        total = side**self.n
        if not self.allow_large:
            if self.n > MAX_DIM or self.m > MAX_LEVEL or total > MAX_POINTS:
                raise ValueError(
                    f"grid of {total} points (n={self.n}, m={self.m}) exceeds the soft "
                    "limits; pass allow_large=True to override"
                )
        self.values = np.ascontiguousarray(self.values, dtype=np.float64)
        if self.values.shape != (total, self.space.dim):
            raise ValueError(
                f"values must have shape ({total}, {self.space.dim}), got {self.values.shape}"
            )

    @property
    def side_count(self) -> int:
        return (1 << self.m) + 1

    @property
    def spacing(self) -> float:
        return self.theta / (1 << self.m)

    def shape_view(self) -> np.ndarray:
        side = self.side_count
        return self.values.reshape((side,) * self.n + (self.space.dim,))

    def points(self) -> np.ndarray:
        """All grid points, row-major, shape (side^n, n)."""
        side = self.side_count
        axes = [self.origin[i] + self.theta * np.arange(side) / (side - 1) if side > 1
                else np.array([self.origin[i]]) for i in range(self.n)]
        mesh = np.meshgrid(*axes, indexing="ij")
        return np.stack([m.reshape(-1) for m in mesh], axis=-1)

    def axis_lines(self, j: int) -> np.ndarray:
        """All axis-j grid lines as a (side^(n-1), side, d) stack.

        Line order is row-major over the remaining axes in their original
        order, which is the deterministic face order used everywhere.
        """
        if not 0 <= j < self.n:
            raise ValueError("axis out of range")
        view = self.shape_view()
        moved = np.moveaxis(view, j, self.n - 1)
        return np.ascontiguousarray(moved.reshape(-1, self.side_count, self.space.dim))

    @staticmethod
    def from_callable(space: NormedSpace, n: int, origin, theta: float, m: int, fn,
                      batch: bool = False, allow_large: bool = False) -> "GridFunctionCube":
        """Sample fn on the grid; `batch` means fn maps (N, n) -> (N, dim)."""
        probe = GridFunctionCube(space, n, np.asarray(origin, dtype=np.float64), theta, m,
                                 np.zeros((((1 << m) + 1) ** n, space.dim)),
                                 allow_large=allow_large)
        pts = probe.points()
        if batch:
            values = np.asarray(fn(pts), dtype=np.float64)
        else:
            values = np.asarray([np.asarray(fn(p), dtype=np.float64) for p in pts])
        return GridFunctionCube(space, n, probe.origin, theta, m, values, allow_large=allow_large)

    def sampler(self) -> "GridSampler":
        return GridSampler(self)

    def to_json(self) -> dict:
        return {
            "space": self.space.to_json(),
            "n": self.n,
            "origin": self.origin.tolist(),
            "theta": self.theta,
            "m": self.m,
            "values": self.values.tolist(),
        }

    @staticmethod
    def from_json(obj: dict, allow_large: bool = False) -> "GridFunctionCube":
        return GridFunctionCube(
            NormedSpace.from_json(obj["space"]),
            int(obj["n"]),
            np.asarray(obj["origin"], dtype=np.float64),
            float(obj["theta"]),
            int(obj["m"]),
            np.asarray(obj["values"], dtype=np.float64),
            allow_large=allow_large,
        )


class GridSampler:
    """Evaluates a stored cube grid at absolute points that lie on it."""

    def __init__(self, cube: GridFunctionCube):
        self._cube = cube
        self.n = cube.n
        self.space = cube.space

    def __call__(self, points: np.ndarray) -> np.ndarray:
        cube = self._cube
        pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
        rel = (pts - cube.origin[None, :]) / cube.spacing
        idx = np.rint(rel)
        if not np.all(np.abs(rel - idx) <= 1e-9 * np.maximum(1.0, np.abs(rel))):
            bad = pts[np.any(np.abs(rel - idx) > 1e-9 * np.maximum(1.0, np.abs(rel)), axis=1)][0]
            raise OffGridError(f"point {bad.tolist()} is not on the stored grid")
        idx = idx.astype(np.int64)
        side = cube.side_count
        if np.any(idx < 0) or np.any(idx >= side):
            bad = pts[np.any((idx < 0) | (idx >= side), axis=1)][0]
            raise OffGridError(f"point {bad.tolist()} is outside the stored cube")
        flat = np.zeros(idx.shape[0], dtype=np.int64)
        for axis in range(cube.n):
            flat = flat * side + idx[:, axis]
        return cube.values[flat]


class CallableSampler:
    """Adapter giving an exact closed-form function the sampler protocol."""

    def __init__(self, space: NormedSpace, n: int, fn):
        self.space = space
        self.n = n
        self._fn = fn

    def __call__(self, points: np.ndarray) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
        return np.asarray(self._fn(pts), dtype=np.float64)
