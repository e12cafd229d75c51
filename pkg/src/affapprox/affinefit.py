"""Certified best affine approximation in sup norm, and the empirical
modulus of affine approximability.

The fit minimizes phi(T, z) = max_i ||f(x_i) - T x_i - z||_Y, a convex
nonsmooth problem, by subgradient descent with step c/sqrt(t), warm
started from the least-squares affine fit.  Points are centered at
(min + max)/2 internally, which keeps the solve exactly equivariant
under dyadic translations of the inputs.  The final sup error is
recomputed exactly at the best iterate, and a midpoint certificate over
collinear sample triples provides an unconditional lower bound: for any
affine A and a triple x_i, x_k = (x_i + x_j)/2, x_j,

    (1/2) ||(y_i + y_j)/2 - y_k||  <=  max residual of A on the triple.

`empirical_modulus` scans a dyadic ladder of radii (descending) and a
grid of admissible centers (row-major) over a sampled cube bounding the
source unit ball, and reports the largest radius at which some sub-ball
admits an affine fit with sup residual <= eps * Lip * radius.  The sup
is taken over grid points only; the gap to the continuous sup is at most
Lip * grid spacing and is reported as `grid_gap`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels as kernels
from .grids import GridFunctionCube
from .spaces import NormedSpace, lipschitz_estimate, norm_eval, norm_eval_many
from .util import run_cells


@dataclass
class AffineMap:
    """x -> T x + z with T of shape (target_dim, n)."""

    T: np.ndarray
    z: np.ndarray

    def __post_init__(self):
        self.T = np.ascontiguousarray(self.T, dtype=np.float64)
        self.z = np.ascontiguousarray(self.z, dtype=np.float64)
        if self.T.ndim != 2 or self.z.ndim != 1 or self.T.shape[0] != self.z.shape[0]:
            raise ValueError("inconsistent affine map shapes")

    def __call__(self, x) -> np.ndarray:
        pts = np.asarray(x, dtype=np.float64)
        if pts.ndim == 1:
            return self.T @ pts + self.z
        return pts @ self.T.T + self.z[None, :]

    def to_json(self) -> dict:
        return {"T": self.T.tolist(), "z": self.z.tolist()}

    @staticmethod
    def from_json(obj: dict) -> "AffineMap":
        return AffineMap(np.asarray(obj["T"], dtype=np.float64), np.asarray(obj["z"], dtype=np.float64))


@dataclass
class FitResult:
    map: AffineMap
    sup_error: float
    lower_certificate: float
    iterations: int
    converged: bool

    def to_json(self) -> dict:
        return {
            "map": self.map.to_json(),
            "sup_error": self.sup_error,
            "lower_certificate": self.lower_certificate,
            "iterations": self.iterations,
            "converged": self.converged,
        }


@dataclass
class ApproximabilityReport:
    eps: float
    lip: float
    best_rho: float
    center: np.ndarray | None
    map: AffineMap | None
    relative_error: float
    grid_gap: float

    def to_json(self) -> dict:
        return {
            "eps": self.eps,
            "lip": self.lip,
            "best_rho": self.best_rho,
            "center": None if self.center is None else self.center.tolist(),
            "map": None if self.map is None else self.map.to_json(),
            "relative_error": self.relative_error,
            "grid_gap": self.grid_gap,
        }


def _as_arrays(samples):
    if isinstance(samples, tuple) and len(samples) == 2 and isinstance(samples[0], np.ndarray):
        pts, vals = samples
    else:
        pts = np.asarray([np.asarray(s[0], dtype=np.float64).reshape(-1) for s in samples])
        vals = np.asarray([np.asarray(s[1], dtype=np.float64).reshape(-1) for s in samples])
    pts = np.atleast_2d(np.asarray(pts, dtype=np.float64))
    vals = np.atleast_2d(np.asarray(vals, dtype=np.float64))
    if pts.shape[0] != vals.shape[0]:
        raise ValueError("points and values must pair up")
    return pts, vals


def sample_certificate(points: np.ndarray, values: np.ndarray, space: NormedSpace) -> float:
    """Best midpoint certificate over collinear triples with on-grid midpoint.

    Midpoints are matched by exact float equality (dyadic sample points
    match exactly); triples whose midpoint is not a sample contribute
    nothing.  Returns 0.0 when no triple exists.
    """
    n_pts = points.shape[0]
    index = {tuple(points[i].tolist()): i for i in range(n_pts)}
    best = 0.0
    for i in range(n_pts):
        for j in range(i + 1, n_pts):
            mid = 0.5 * (points[i] + points[j])
            k = index.get(tuple(mid.tolist()))
            if k is None:
                continue
            cert = 0.5 * norm_eval(space, 0.5 * (values[i] + values[j]) - values[k])
            if cert > best:
                best = cert
    return best


def best_affine_fit(samples, target_space: NormedSpace, tol: float = 1e-9,
                    max_iter: int = 2000, certificate: bool = True) -> FitResult:
    """Minimize the sup-norm residual of an affine model over the samples."""
    pts, vals = _as_arrays(samples)
    if not (np.all(np.isfinite(pts)) and np.all(np.isfinite(vals))):
        raise ValueError("non-finite inputs")
    if vals.shape[1] != target_space.dim:
        raise ValueError("values do not match the target space dimension")
    # exact duplicate (point, value) rows carry no information for the sup
    _, keep = np.unique(np.hstack([pts, vals]), axis=0, return_index=True)
    if keep.shape[0] != pts.shape[0]:
        keep = np.sort(keep)
        pts = pts[keep]
        vals = vals[keep]
    n_pts, n = pts.shape
    if n_pts < n + 1:
        raise ValueError(f"need at least {n + 1} samples, got {n_pts}")

    center = 0.5 * (pts.min(axis=0) + pts.max(axis=0))
    centered = pts - center[None, :]
    design = np.hstack([centered, np.ones((n_pts, 1))])
    w0, *_ = np.linalg.lstsq(design, vals, rcond=None)

    resid0 = vals - design @ w0
    sup0 = float(np.max(norm_eval_many(target_space, resid0)))
    xnorm2 = float(np.max(np.sum(design * design, axis=1)))
    step0 = sup0 / (1.0 + xnorm2)

    w_best, sup_best, iters, step_converged = kernels.subgradient_fit(
        np.ascontiguousarray(design), np.ascontiguousarray(vals),
        np.ascontiguousarray(w0), target_space.q, target_space.block_count,
        step0, int(max_iter), float(tol))

    # recompute the final sup exactly at the returned iterate
    resid = vals - design @ w_best
    sup = float(np.max(norm_eval_many(target_space, resid)))

    cert = sample_certificate(centered, vals, target_space) if certificate else 0.0
    converged = bool(step_converged) or (sup - cert < tol)

    T = w_best[:n].T
    z = w_best[n] - T @ center
    return FitResult(AffineMap(T, z), sup, cert, int(iters), converged)


def _default_radii(levels: int) -> list[float]:
    return [2.0 ** (-j) for j in range(levels + 1)]


def _thinned_centers(f: GridFunctionCube, source: NormedSpace, rho: float) -> np.ndarray:
    """Grid centers admissible for radius rho, thinned to ~rho/4 spacing.

    The stride is a power of two, which keeps the cube midpoint (the
    origin of the source ball for a [-1,1]^n bounding cube) in the list.
    """
    stride = 1
    while stride * 2 * f.spacing <= rho / 4.0 and stride * 2 <= (1 << f.m):
        stride *= 2
    side = f.side_count
    keep_axis = np.arange(0, side, stride)
    axes = [f.origin[i] + f.theta * keep_axis / (side - 1) for i in range(f.n)]
    mesh = np.meshgrid(*axes, indexing="ij")
    pts = np.stack([m.reshape(-1) for m in mesh], axis=-1)
    ok = norm_eval_many(source, pts) <= 1.0 - rho + 1e-12
    return pts[ok]


def empirical_modulus(f: GridFunctionCube, source: NormedSpace, eps: float,
                      radii: list[float] | None = None, centers: np.ndarray | None = None,
                      tol: float = 1e-9, max_iter: int = 600, parallelism: int = 1,
                      return_sweep: bool = False):
    """Largest dyadic radius at which some admissible sub-ball is eps-affine.

    Scans radii descending and centers row-major; the first success at a
    radius wins (lexicographically smallest center index).  Success means
    best_affine_fit sup residual / rho <= eps * lip over the grid points
    of the ball.  Centers must satisfy ||y||_X <= 1 - rho.
    """
    if source.dim != f.n:
        raise ValueError("source space dimension must match the cube dimension")
    lo = f.origin
    hi = f.origin + f.theta
    if np.any(lo > -1.0 + 1e-9) or np.any(hi < 1.0 - 1e-9):
        raise ValueError("cube must bound the source unit ball [-1, 1]^n box")
    if radii is not None and len(radii) == 0:
        raise ValueError("empty radius ladder")

    lip = lipschitz_estimate(f)
    grid_gap = lip * f.spacing
    sweep: list[dict] = []

    if lip == 0.0:
        # constant function: exactly affine everywhere (documented convention)
        const = AffineMap(np.zeros((f.space.dim, f.n)), f.values[0].copy())
        report = ApproximabilityReport(eps, 0.0, 1.0, np.zeros(f.n), const, 0.0, 0.0)
        return (report, sweep) if return_sweep else report

    if radii is None:
        radii = _default_radii(f.m)
    radii = sorted(set(float(r) for r in radii), reverse=True)

    pts = f.points()

    def try_candidate(cell):
        rho, y = cell
        dist = norm_eval_many(source, pts - y[None, :])
        mask = dist <= rho * (1.0 + 1e-12)
        sub_pts = pts[mask]
        if sub_pts.shape[0] < f.n + 1:
            return None
        fit = best_affine_fit((sub_pts, f.values[mask]), f.space, tol=tol, max_iter=max_iter)
        ok = fit.sup_error / rho <= eps * lip
        return {
            "rho": rho,
            "center": y.tolist(),
            "sup_error": fit.sup_error,
            "certificate": fit.lower_certificate,
            "pass": bool(ok),
            "_fit": fit,
        }

    for rho in radii:
        cand = centers if centers is not None else _thinned_centers(f, source, rho)
        cand = np.atleast_2d(np.asarray(cand, dtype=np.float64))
        if centers is not None:
            ok = norm_eval_many(source, cand) <= 1.0 - rho + 1e-12
            cand = cand[ok]
        if cand.shape[0] == 0:
            continue
        winner = None
        block = 16  # fixed advance granularity keeps sweeps independent of parallelism
        for start in range(0, cand.shape[0], block):
            cells = [(rho, cand[i]) for i in range(start, min(start + block, cand.shape[0]))]
            rows = run_cells(try_candidate, cells, parallelism)
            for row in rows:
                if row is None:
                    continue
                fit = row.pop("_fit")
                sweep.append(row)
                if row["pass"] and winner is None:
                    winner = (row, fit)
            if winner is not None:
                break
        if winner is not None:
            row, fit = winner
            report = ApproximabilityReport(
                eps, lip, rho, np.asarray(row["center"]), fit.map,
                row["sup_error"] / rho, grid_gap)
            return (report, sweep) if return_sweep else report

    report = ApproximabilityReport(eps, lip, 0.0, None, None, float("nan"), grid_gap)
    return (report, sweep) if return_sweep else report
