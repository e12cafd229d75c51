"""Explicit hard instances for affine approximation, with certificates.

Three constructions, each exposed as an exact closed-form sampler:

  * BumpPath f: [0,1] -> ell_p^m.  Start from 0 and, at every dyadic
    level k = 1..m, push the midpoints of the current piecewise-affine
    path by (1 / (m^{1/p} 2^k)) e_k.  The level-k increments all have
    norm 2^-k (k/m)^{1/p}, so the final path is exactly 1-Lipschitz, yet
    every window [a, b] with b - a >= 4/2^m carries a midpoint
    certificate beating (b-a) / (16 m^{1/p}) against every affine map.

  * PaddedBumpLine g: R -> ell_p^{m+1}.  The path, rescaled to
    [-2/sqrt(n), 2/sqrt(n)] and amplified by 4/sqrt(n), continued by the
    ramp (|x| - 2/sqrt(n)) e_{m+1} outside.  Still 1-Lipschitz; windows
    [y - r, y + r] with |y| <= 1/sqrt(n) and r >= 32/(sqrt(n) 2^m) carry
    certificates against the threshold r / (16 m^{1/p}).

  * ProductBumpField F: ell_2^n -> ell_2^n(ell_p^{m+1}), applying g in
    every coordinate.  1-Lipschitz into the mixed norm; any admissible
    ball y + rB has a coordinate |y_i| < 1/sqrt(n), and the certificate
    of g along that axis transfers to the ball.

Grid positions are handled as exact (numerator, level) dyadic pairs, so
the midpoint recursion never drifts; only the value arithmetic is
floating point.

Certificates are midpoint lower bounds, valid against *every* affine
map.  In the window construction the certified margin can shrink to
r/(32 m^{1/p}) when the window is clipped hard by the ramp seam, so
`certify_window` can report a borderline failure in that extreme
geometry; the interval certificates always pass strictly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .spaces import NormedSpace, norm_eval


@dataclass(frozen=True)
class CounterexampleSpec:
    """Construction parameters: depth m, target exponent p, dimension n."""

    m: int
    p: float
    n: int = 1

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("depth m must be >= 1")
        if self.p < 2.0:
            raise ValueError("target exponent p must be >= 2")
        if self.n < 1:
            raise ValueError("dimension n must be >= 1")


@dataclass
class CertReport:
    certificate: float
    threshold: float
    passed: bool
    details: dict

    def to_json(self) -> dict:
        return {
            "certificate": self.certificate,
            "threshold": self.threshold,
            "pass": self.passed,
            "details": self.details,
        }


class BumpPath:
    """Exact sampler for the stacked-bump path f: [0,1] -> ell_p^m."""

    def __init__(self, m: int, p: float):
        self.m = m
        self.p = float(p)
        self.space = NormedSpace.lq(p, m)
        tables = [np.zeros((2, m))]
        for k in range(1, m + 1):
            prev = tables[-1]
            cur = np.empty(((1 << k) + 1, m))
            cur[0::2] = prev
            cur[1::2] = 0.5 * (prev[:-1] + prev[1:])
            cur[1::2, k - 1] += 1.0 / (m ** (1.0 / self.p) * (1 << k))
            tables.append(cur)
        self._tables = tables

    def level_values(self, k: int) -> np.ndarray:
        """Values on the level-k dyadic grid (the stage-k path)."""
        if not 0 <= k <= self.m:
            raise ValueError("level out of range")
        return self._tables[k].copy()

    def value_dyadic(self, num: int, level: int) -> np.ndarray:
        """Exact value at the dyadic rational num / 2^level in [0, 1]."""
        if level < 0 or num < 0 or num > (1 << level):
            raise ValueError("dyadic argument outside [0, 1]")
        table = self._tables[self.m]
        if level <= self.m:
            return table[num << (self.m - level)].copy()
        shift = level - self.m
        j = num >> shift
        rem = num - (j << shift)
        if rem == 0:
            return table[j].copy()
        frac = rem / (1 << shift)
        return table[j] + frac * (table[j + 1] - table[j])

    def __call__(self, t):
        """Piecewise-affine evaluation at float t (vectorized)."""
        table = self._tables[self.m]
        tt = np.asarray(t, dtype=np.float64)
        scalar = tt.ndim == 0
        tt = np.atleast_1d(tt)
        u = np.clip(tt, 0.0, 1.0) * (1 << self.m)
        j = np.minimum(u.astype(np.int64), (1 << self.m) - 1)
        frac = (u - j)[:, None]
        out = table[j] + frac * (table[j + 1] - table[j])
        return out[0] if scalar else out


class PaddedBumpLine:
    """Exact sampler for g: R -> ell_p^{m+1} built from a BumpPath."""

    def __init__(self, m: int, p: float, n: int):
        self.m = m
        self.p = float(p)
        self.n = 1
        self.scale_n = n
        self.path = BumpPath(m, p)
        self.space = NormedSpace.lq(p, m + 1)
        self.seam = 2.0 / math.sqrt(n)
        self.amp = 4.0 / math.sqrt(n)

    def __call__(self, x):
        xx = np.asarray(x, dtype=np.float64)
        scalar = xx.ndim == 0
        xx = np.atleast_1d(xx).reshape(-1)
        out = np.zeros((xx.shape[0], self.m + 1))
        inside = np.abs(xx) <= self.seam
        if np.any(inside):
            z = xx[inside] / self.amp + 0.5
            out[np.where(inside)[0], : self.m] = self.amp * self.path(z)
        outside = ~inside
        out[np.where(outside)[0], self.m] = np.abs(xx[outside]) - self.seam
        return out[0] if scalar else out


class ProductBumpField:
    """Exact sampler for F: ell_2^n -> ell_2^n(ell_p^{m+1})."""

    def __init__(self, m: int, p: float, n: int):
        self.m = m
        self.p = float(p)
        self.n = n
        self.line = PaddedBumpLine(m, p, n)
        self.space = NormedSpace.mixed(n, p, m + 1)

    def __call__(self, points):
        pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
        if pts.shape[1] != self.n:
            raise ValueError("point dimension mismatch")
        blocks = [self.line(pts[:, i]) for i in range(self.n)]
        return np.concatenate(blocks, axis=1)


def build_bump_path(spec: CounterexampleSpec) -> BumpPath:
    return BumpPath(spec.m, spec.p)


def build_padded_line(spec: CounterexampleSpec) -> PaddedBumpLine:
    return PaddedBumpLine(spec.m, spec.p, spec.n)


def build_product_field(spec: CounterexampleSpec) -> ProductBumpField:
    return ProductBumpField(spec.m, spec.p, spec.n)


def _locate_scale(width: float) -> int:
    """The unique k with 4/2^k <= width < 8/2^k."""
    k = max(1, math.ceil(math.log2(4.0 / width) - 1e-9))
    while 4.0 / (1 << k) > width:
        k += 1
    while k > 1 and 4.0 / (1 << (k - 1)) <= width:
        k -= 1
    return k


def certify_interval(spec: CounterexampleSpec, a: float, b: float,
                     path: BumpPath | None = None) -> CertReport:
    """Midpoint certificate for the bump path on a window [a, b] of [0, 1].

    Requires b - a >= 4/2^m.  Picks the scale k with 4/2^k <= b-a < 8/2^k
    and a level-(k-1) dyadic interval inside the window; its midpoint
    carries the orthogonal level-k bump of size 1/(m^{1/p} 2^k), so the
    certificate is half that, which strictly beats the threshold
    (b - a) / (16 m^{1/p}).
    """
    if not (0.0 <= a < b <= 1.0):
        raise ValueError("need 0 <= a < b <= 1")
    width = b - a
    if width < 4.0 / (1 << spec.m) - 1e-12:
        raise ValueError(f"window of length {width} is below 4/2^m")
    if path is None:
        path = build_bump_path(spec)
    k = _locate_scale(width)
    denom = 1 << (k - 1)
    j = math.ceil(a * denom - 1e-12)
    while j / denom < a - 1e-12:
        j += 1
    if (j + 1) / denom > b + 1e-12:
        raise ValueError("no dyadic interval of the located scale fits the window")
    left = path.value_dyadic(j, k - 1)
    right = path.value_dyadic(j + 1, k - 1)
    mid = path.value_dyadic(2 * j + 1, k)
    certificate = 0.5 * norm_eval(path.space, mid - 0.5 * (left + right))
    threshold = width / (16.0 * spec.m ** (1.0 / spec.p))
    return CertReport(
        certificate, threshold, certificate > threshold,
        {"m": spec.m, "p": spec.p, "window": [a, b], "k": k,
         "interval": [j / denom, (j + 1) / denom]},
    )


def certify_window(spec: CounterexampleSpec, y: float, r: float,
                   line: PaddedBumpLine | None = None) -> CertReport:
    """Certificate for the padded line on [y - r, y + r].

    Needs |y| <= 1/sqrt(n) and r >= 32/(sqrt(n) 2^m).  For r <= 8/sqrt(n)
    the window meets the bump zone in an interval of length >= r/2 and
    the rescaled interval certificate applies; for larger r the ramp
    coordinate supplies a direct midpoint certificate at (y - r, y, y + r).
    """
    rootn = math.sqrt(spec.n)
    if abs(y) > 1.0 / rootn + 1e-12:
        raise ValueError("center must satisfy |y| <= 1/sqrt(n)")
    if r < 32.0 / (rootn * (1 << spec.m)) - 1e-12:
        raise ValueError("radius below 32/(sqrt(n) 2^m)")
    if line is None:
        line = build_padded_line(spec)
    threshold = r / (16.0 * spec.m ** (1.0 / spec.p))
    if r <= 8.0 / rootn:
        a = max(y - r, -line.seam)
        b = min(y + r, line.seam)
        za = (rootn / 4.0) * a + 0.5
        zb = (rootn / 4.0) * b + 0.5
        sub = certify_interval(spec, za, zb, line.path)
        certificate = line.amp * sub.certificate
        details = {"m": spec.m, "p": spec.p, "window": [y - r, y + r],
                   "branch": "bump", "inner": sub.details}
    else:
        vals = line(np.array([y - r, y, y + r]))
        certificate = 0.5 * norm_eval(line.space, vals[1] - 0.5 * (vals[0] + vals[2]))
        details = {"m": spec.m, "p": spec.p, "window": [y - r, y + r], "branch": "ramp"}
    return CertReport(certificate, threshold, certificate > threshold, details)


def certify_ball(spec: CounterexampleSpec, y, r: float,
                 field: ProductBumpField | None = None) -> CertReport:
    """Certificate for the product field on the ball y + r B_{ell_2^n}.

    Needs ||y||_2 <= 1 - r (ball inside the unit ball) and the window
    radius condition.  Picks the first coordinate with |y_i| < 1/sqrt(n)
    (one always exists for ||y||_2 < 1) and delegates to the line
    certificate along that axis; the axis segment lies inside the ball
    and the block norm dominates the coordinate norm, so the certificate
    transfers.
    """
    yv = np.asarray(y, dtype=np.float64).reshape(-1)
    if yv.shape != (spec.n,):
        raise ValueError("center dimension mismatch")
    norm2 = float(np.sqrt(np.sum(yv * yv)))
    if norm2 >= 1.0:
        raise ValueError("center must satisfy ||y||_2 < 1")
    if norm2 > 1.0 - r + 1e-12:
        raise ValueError("ball y + rB must sit inside the unit ball")
    rootn = math.sqrt(spec.n)
    axis = -1
    for i in range(spec.n):
        if abs(yv[i]) < 1.0 / rootn:
            axis = i
            break
    if axis < 0:
        raise ValueError("no coordinate with |y_i| < 1/sqrt(n); invalid input")
    if field is None:
        field = build_product_field(spec)
    sub = certify_window(spec, float(yv[axis]), r, field.line)
    details = dict(sub.details)
    details.update({"axis": axis, "center": yv.tolist(), "r": r})
    return CertReport(sub.certificate, sub.threshold, sub.passed, details)
