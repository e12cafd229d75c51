"""Cube machinery: multiscale deviation, multilinear (Walsh) decomposition,
and affine extraction from the first-order coefficients.

Everything works in cube-local normalized coordinates: the cube
x + [0, theta]^n maps to [0, 1]^n and values are normalized per unit side
length where a scale-free quantity is needed.  Translation and rescaling
back to absolute coordinates happen only at the boundary
(`affine_from_walsh` returns an absolute-coordinates map).

The multiscale deviation of a sampled f is the worst chord deviation of
its axis-parallel grid lines, per unit side length:

    D(f) = max over axes j, faces y (j-th coordinate 0), grid steps k of
           || f_j^y(k theta / 2^m) - chord(k theta / 2^m) || / theta.

D(f) = 0 exactly when every axis-parallel restriction is affine on the
grid.  Walsh coefficients {v_S} are the multilinear interpolation
coefficients of the 2^n cube-vertex values; for a function whose
normalized form is 1-Lipschitz (Euclidean) they satisfy
||v_S|| / theta <= 2^(|S|-1), and when additionally D(f) <= eps the
multilinear interpolant matches f on the whole grid to eps * n per unit
side length.  Subset keys are n-bit masks (bit i-1 <=> coordinate i);
iteration is in ascending mask order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels as kernels
from .affinefit import AffineMap
from .grids import GridFunctionCube
from .spaces import norm_eval_many


@dataclass
class WalshCoefficients:
    """Multilinear interpolation coefficients over normalized coordinates.

    coeffs[mask] multiplies the monomial prod_{i in S} y_i where S is the
    subset encoded by mask; coeffs[0] is the value at the cube origin.
    """

    n: int
    coeffs: np.ndarray

    def __post_init__(self):
        self.coeffs = np.ascontiguousarray(self.coeffs, dtype=np.float64)
        if self.coeffs.shape[0] != (1 << self.n):
            raise ValueError("need exactly 2^n coefficient rows")

    def to_json(self) -> dict:
        return {"n": self.n,
                "coeffs": {str(mask): self.coeffs[mask].tolist() for mask in range(1 << self.n)}}

    @staticmethod
    def from_json(obj: dict) -> "WalshCoefficients":
        n = int(obj["n"])
        rows = [obj["coeffs"][str(mask)] for mask in range(1 << n)]
        return WalshCoefficients(n, np.asarray(rows, dtype=np.float64))


@dataclass
class DeviationWitness:
    """Argmax of the multiscale deviation with the deterministic tie-break."""

    value: float
    axis: int
    face: tuple
    k: int


@dataclass
class WalshCheckReport:
    coeff_ok: bool
    coeff_max_excess: float
    approx_max: float
    approx_ok: bool

    def to_json(self) -> dict:
        return {
            "coeff_ok": self.coeff_ok,
            "coeff_max_excess": self.coeff_max_excess,
            "approx_max": self.approx_max,
            "approx_ok": self.approx_ok,
        }


def deviation_argmax(f: GridFunctionCube) -> DeviationWitness:
    """Multiscale deviation together with its first witness.

    Ties resolve to the lexicographically smallest (axis, face, k), faces
    in row-major order over the non-axis coordinates.
    """
    side = f.side_count
    best = -1.0
    witness = None
    for j in range(f.n):
        lines = f.axis_lines(j)
        devs = kernels.chord_devs(lines, f.space.q, f.space.block_count)
        flat = int(np.argmax(devs))
        val = float(devs.reshape(-1)[flat])
        if val > best:
            line_idx, k = divmod(flat, side)
            face = np.unravel_index(line_idx, (side,) * (f.n - 1)) if f.n > 1 else ()
            best = val
            witness = DeviationWitness(val / f.theta, j, tuple(int(c) for c in face), int(k))
    return witness


def multiscale_deviation(f: GridFunctionCube) -> float:
    """Worst axis-line chord deviation per unit side length (>= 0)."""
    return deviation_argmax(f).value


def walsh_coefficients(f: GridFunctionCube) -> WalshCoefficients:
    """Coefficients {v_S} from the 2^n cube-vertex values.

    Computed by iterated forward differences of the vertex table, which
    realizes the recursion v_S = v_S^0 for n not in S and
    v_S = v_{S - n}^1 - v_{S - n}^0 for n in S over the two opposite
    faces.  Linear in f; exact multilinear interpolation of the vertices.
    """
    view = f.shape_view()
    top = f.side_count - 1
    corner = view[np.ix_(*([np.array([0, top])] * f.n))]
    # flatten so the flat index equals the subset mask (coordinate 1 = LSB)
    order = tuple(range(f.n - 1, -1, -1)) + (f.n,)
    table = np.ascontiguousarray(np.transpose(corner, order).reshape(1 << f.n, f.space.dim)).copy()
    for bit in range(f.n):
        step = 1 << bit
        for mask in range(1 << f.n):
            if mask & step:
                table[mask] -= table[mask ^ step]
    return WalshCoefficients(f.n, table)


def multilinear_eval(w: WalshCoefficients, y) -> np.ndarray:
    """sum_S (prod_{i in S} y_i) v_S at a normalized point y."""
    yv = np.asarray(y, dtype=np.float64)
    if yv.shape != (w.n,):
        raise ValueError("point dimension mismatch")
    acc = np.zeros(w.coeffs.shape[1])
    for mask in range(1 << w.n):
        weight = 1.0
        mm = mask
        i = 0
        while mm:
            if mm & 1:
                weight *= yv[i]
            mm >>= 1
            i += 1
        acc += weight * w.coeffs[mask]
    return acc


def _monomial_matrix(coords: np.ndarray, n: int) -> np.ndarray:
    """(P, 2^n) matrix of monomials prod_{i in S} y_i for rows of coords."""
    P = coords.shape[0]
    out = np.ones((P, 1 << n))
    for mask in range(1, 1 << n):
        weight = np.ones(P)
        mm = mask
        i = 0
        while mm:
            if mm & 1:
                weight = weight * coords[:, i]
            mm >>= 1
            i += 1
        out[:, mask] = weight
    return out


def multilinear_grid_errors(f: GridFunctionCube) -> np.ndarray:
    """||f - multilinear interpolant|| at every grid point (raw values)."""
    w = walsh_coefficients(f)
    side = f.side_count
    axes = [np.arange(side) / (side - 1) if side > 1 else np.zeros(1)] * f.n
    mesh = np.meshgrid(*axes, indexing="ij")
    coords = np.stack([m.reshape(-1) for m in mesh], axis=-1)
    approx = _monomial_matrix(coords, f.n) @ w.coeffs
    return norm_eval_many(f.space, f.values - approx)


def walsh_bounds_check(f: GridFunctionCube, eps: float, tol: float = 1e-9) -> WalshCheckReport:
    """Check the coefficient bounds and the grid approximation bound.

    Sound under the preconditions: the normalized function (unit cube,
    values per unit side) is 1-Lipschitz Euclidean, and the measured
    multiscale deviation is <= eps.  coeff_ok iff ||v_S||/theta <=
    2^(|S|-1) + tol for all nonempty S; approx_ok iff the worst grid
    error per unit side is <= eps*n + tol.
    """
    w = walsh_coefficients(f)
    norms = norm_eval_many(f.space, w.coeffs) / f.theta
    excess = -np.inf
    for mask in range(1, 1 << f.n):
        bound = 2.0 ** (bin(mask).count("1") - 1)
        excess = max(excess, float(norms[mask]) - bound)
    coeff_ok = excess <= tol
    approx_max = float(np.max(multilinear_grid_errors(f))) / f.theta
    approx_ok = approx_max <= eps * f.n + tol
    return WalshCheckReport(bool(coeff_ok), float(excess), approx_max, bool(approx_ok))


def affine_from_walsh(f: GridFunctionCube, eps: float, strict: bool = True,
                      ) -> tuple[AffineMap, float, float]:
    """Affine map from the order-<=1 coefficients, with its subcube error.

    A(u) = v_0 + sum_i ((u_i - x_i)/theta) v_{i}; the returned error is
    the max of ||f - A|| over grid points of x + [0, sqrt(eps)*theta]^n
    and must sit below bound = 8 n^2 eps theta when the preconditions
    hold (f 1-Lipschitz Euclidean on the cube, deviation <= eps, and in
    strict mode the resolution requirement 2^m >= 2/eps >= 10 n^2).
    """
    if strict:
        if not ((1 << f.m) >= 2.0 / eps >= 10.0 * f.n**2):
            raise ValueError(
                f"strict mode needs 2^m >= 2/eps >= 10 n^2 (m={f.m}, eps={eps}, n={f.n})")
    w = walsh_coefficients(f)
    T = np.stack([w.coeffs[1 << i] / f.theta for i in range(f.n)], axis=1)
    z = w.coeffs[0] - T @ f.origin
    amap = AffineMap(T, z)

    side = f.side_count
    top = side - 1
    kmax = int(np.floor(np.sqrt(eps) * top + 1e-12))
    keep = np.arange(0, min(kmax, top) + 1)
    view = f.shape_view()
    sub = view[np.ix_(*([keep] * f.n))].reshape(-1, f.space.dim)
    axes = [f.origin[i] + f.theta * keep / top for i in range(f.n)]
    mesh = np.meshgrid(*axes, indexing="ij")
    pts = np.stack([m.reshape(-1) for m in mesh], axis=-1)
    err = float(np.max(norm_eval_many(f.space, sub - amap(pts))))
    bound = 8.0 * f.n**2 * eps * f.theta
    return amap, err, bound
