"""Norm descriptors, norm evaluation, convexity parameters, Lipschitz estimates.

A NormedSpace describes either a plain ell_q norm on R^dim or the mixed
norm ell_2^outer(ell_q^inner) in which a vector splits into `outer`
consecutive blocks of length `inner`, each measured in ell_q, and the
block norms are combined Euclideanly.

For 1 < q < oo the four-point convexity inequality

    2 ||x||^p + (2 / K^p) ||y||^p  <=  ||x + y||^p + ||x - y||^p

holds with power p = max(q, 2) and constant K = max(1/sqrt(q - 1), 1).
`uc_residual` evaluates the slack of this inequality at a given pair; it
is nonnegative (up to roundoff) whenever (p, K) are valid for the norm.

Caveat for mixed spaces: the (p, K) returned by `uc_params` reuse the
inner-q formula.  That is a documented default, not a sharp constant;
both parameters can be overridden per space via the `power` / `constant`
fields.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels as kernels

LQ = "lq"
MIXED = "mixed"


@dataclass(frozen=True)
class NormedSpace:
    """Descriptor of a finite-dimensional norm.

    kind "lq": ell_q on R^dim (outer == inner == 0).
    kind "mixed": ell_2^outer(ell_q^inner), dim == outer * inner.
    """

    kind: str
    q: float
    dim: int
    outer: int = 0
    inner: int = 0
    power: float | None = None
    constant: float | None = None

    def __post_init__(self):
        if self.kind == LQ:
            if self.dim < 1:
                raise ValueError("dim must be a positive integer")
            if self.outer or self.inner:
                raise ValueError("plain ell_q space has no block structure")
        elif self.kind == MIXED:
            if self.outer < 1 or self.inner < 1:
                raise ValueError("outer and inner must be positive integers")
            if self.dim != self.outer * self.inner:
                raise ValueError("dim must equal outer * inner")
        else:
            raise ValueError(f"unknown space kind {self.kind!r}")
        if not (self.q >= 1.0):
            raise ValueError("q must satisfy q >= 1")

    @staticmethod
    def lq(q: float, dim: int) -> "NormedSpace":
        return NormedSpace(LQ, float(q), int(dim))

    @staticmethod
    def mixed(outer: int, q: float, inner: int) -> "NormedSpace":
        return NormedSpace(MIXED, float(q), int(outer) * int(inner), int(outer), int(inner))

    @property
    def block_count(self) -> int:
        """Block count in the kernel convention (0 for plain ell_q)."""
        return self.outer if self.kind == MIXED else 0

    def to_json(self) -> dict:
        if self.kind == LQ:
            obj = {"kind": "lq", "q": self.q, "dim": self.dim}
        else:
            obj = {"kind": "mixed", "outer": self.outer, "q": self.q, "inner": self.inner}
        if self.power is not None:
            obj["power"] = self.power
        if self.constant is not None:
            obj["constant"] = self.constant
        return obj

    @staticmethod
    def from_json(obj: dict) -> "NormedSpace":
        kind = obj["kind"]
        power = obj.get("power")
        constant = obj.get("constant")
        if kind == "lq":
            base = NormedSpace.lq(obj["q"], obj["dim"])
        elif kind == "mixed":
            base = NormedSpace.mixed(obj["outer"], obj["q"], obj["inner"])
        else:
            raise ValueError(f"unknown space kind {kind!r}")
        if power is None and constant is None:
            return base
        return NormedSpace(base.kind, base.q, base.dim, base.outer, base.inner, power, constant)


def _check_dim(space: NormedSpace, arr: np.ndarray) -> None:
    if arr.shape[-1] != space.dim:
        raise ValueError(f"vector length {arr.shape[-1]} does not match space dimension {space.dim}")


def norm_eval_many(space: NormedSpace, vs) -> np.ndarray:
    """Norms of the rows of a (N, dim) array."""
    arr = np.ascontiguousarray(np.atleast_2d(vs), dtype=np.float64)
    _check_dim(space, arr)
    if math.isinf(space.q):
        mags = np.abs(arr)
        if space.kind == MIXED:
            blocks = mags.reshape(arr.shape[0], space.outer, space.inner)
            bn = np.max(blocks, axis=-1)
            return np.sqrt(np.sum(bn * bn, axis=-1))
        return np.max(mags, axis=-1)
    return kernels.norm_rows(arr, space.q, space.block_count)


def norm_eval(space: NormedSpace, v) -> float:
    """Norm of one vector; zero iff v = 0."""
    arr = np.asarray(v, dtype=np.float64)
    if arr.ndim != 1:
        raise ValueError("norm_eval expects a single vector")
    return float(norm_eval_many(space, arr[None, :])[0])


def uc_params(space: NormedSpace) -> tuple[float, float]:
    """Four-point convexity parameters (p, K) for the space.

    Overrides on the space win; otherwise p = max(q, 2) and
    K = max(1/sqrt(q-1), 1), which requires 1 < q < oo.  Mixed spaces
    inherit the inner-q formula as a default (see module docstring).
    """
    p = space.power
    K = space.constant
    if p is not None and K is not None:
        return float(p), float(K)
    q = space.q
    if q <= 1.0 or math.isinf(q):
        raise ValueError("no power-type convexity parameters for q <= 1 or q = inf")
    if p is None:
        p = max(q, 2.0)
    if K is None:
        K = max(1.0 / math.sqrt(q - 1.0), 1.0)
    return float(p), float(K)


def uc_residual(space: NormedSpace, x, y, p: float | None = None, K: float | None = None) -> float:
    """Slack of the four-point inequality at (x, y).

    Returns ||x+y||^p + ||x-y||^p - 2||x||^p - (2/K^p)||y||^p; callers
    assert this is >= -tolerance.
    """
    xs = np.asarray(x, dtype=np.float64)[None, :]
    ys = np.asarray(y, dtype=np.float64)[None, :]
    return float(uc_residual_many(space, xs, ys, p, K)[0])


def uc_residual_many(space: NormedSpace, xs, ys, p: float | None = None, K: float | None = None) -> np.ndarray:
    """Vectorized `uc_residual` over row pairs."""
    if p is None or K is None:
        p0, K0 = uc_params(space)
        p = p0 if p is None else p
        K = K0 if K is None else K
    xa = np.ascontiguousarray(np.atleast_2d(xs), dtype=np.float64)
    ya = np.ascontiguousarray(np.atleast_2d(ys), dtype=np.float64)
    _check_dim(space, xa)
    if xa.shape != ya.shape:
        raise ValueError("x and y batches must have identical shapes")
    if math.isinf(space.q):
        raise ValueError("four-point residual requires finite q")
    return kernels.uc_residual_rows(xa, ya, space.q, space.block_count, float(p), float(K))


def _domain_dist(diff: np.ndarray, metric: str, source: NormedSpace | None) -> float:
    if metric == "euclidean":
        return float(np.sqrt(np.sum(diff * diff)))
    if metric == "max":
        return float(np.max(np.abs(diff)))
    if metric == "space":
        if source is None:
            raise ValueError("metric 'space' needs a source NormedSpace")
        return norm_eval(source, diff)
    raise ValueError(f"unknown metric {metric!r}")


def lipschitz_estimate(gf, metric: str = "euclidean", source: NormedSpace | None = None,
                       exhaustive: bool = False) -> float:
    """Largest sampled difference quotient of a grid function.

    Adjacent grid pairs only by default (linear cost); `exhaustive` scans
    all pairs of grid points, which is where the choice of domain metric
    actually matters.  The result is a lower bound on the true Lipschitz
    constant.
    """
    values = gf.values
    if hasattr(gf, "a"):  # 1-D interval grid
        if values.shape[0] < 2:
            raise ValueError("need at least 2 samples")
        space = gf.space
        if exhaustive:
            best = 0.0
            ts = gf.points()
            for i in range(values.shape[0]):
                diffs = values[i + 1:] - values[i]
                if diffs.shape[0] == 0:
                    continue
                norms = norm_eval_many(space, diffs)
                dts = ts[i + 1:] - ts[i]
                best = max(best, float(np.max(norms / dts)))
            return best
        diffs = values[1:] - values[:-1]
        norms = norm_eval_many(space, diffs)
        return float(np.max(norms)) / gf.spacing

    # cube grid
    space = gf.space
    side = gf.side_count
    step = gf.spacing
    if exhaustive:
        total = values.shape[0]
        if total > 4096:
            raise ValueError("exhaustive Lipschitz scan limited to 4096 grid points")
        pts = gf.points()
        best = 0.0
        for i in range(total):
            vdiff = values[i + 1:] - values[i]
            if vdiff.shape[0] == 0:
                continue
            norms = norm_eval_many(space, vdiff)
            for off, nv in enumerate(norms):
                dist = _domain_dist(pts[i + 1 + off] - pts[i], metric, source)
                if dist > 0:
                    best = max(best, float(nv) / dist)
        return best
    view = gf.shape_view()
    best = 0.0
    unit = np.zeros(gf.n)
    for j in range(gf.n):
        moved = np.moveaxis(view, j, gf.n - 1)
        diffs = (moved[..., 1:, :] - moved[..., :-1, :]).reshape(-1, gf.space.dim)
        if diffs.shape[0] == 0:
            continue
        unit[:] = 0.0
        unit[j] = step
        dist = _domain_dist(unit, metric, source)
        norms = norm_eval_many(space, diffs)
        best = max(best, float(np.max(norms)) / dist)
    del side
    return best
