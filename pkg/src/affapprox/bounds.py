"""Log-domain evaluation of the closed-form approximability bounds,
calibration of the net-fineness constant, and delta-net generation.

All bound formulas are evaluated purely in log2-domain; there is no
linear-domain underflow path anywhere.  Magnitudes that overflow binary64
degrade gracefully to log2 = -inf ("smaller than every representable
scale"), which keeps comparisons and the calibration search correct.

Guaranteed lower bounds on the affine-approximability modulus r(eps) for
a target norm with four-point convexity parameters (p, K):

    general, n = 1 :   log2 r = (16 K / eps)^p * log2(eps)
    general, n >= 2:   log2 r = (K^p n^{20(n+p)} / eps^{2p+2n-2}) * log2(eps)
    sharp1d (n = 1):   log2 r = (8 K / eps)^p * log2(eps / 8)

Upper bounds from the explicit constructions (see counterexamples):

    interval:  log2 r = log2(4)           - (8 eps)^-p
    ball:      log2 r = log2(32/sqrt(n))  - (16 eps)^-p

Discretization: for a source of dimension n >= 2 the scale

    log2(delta) = -K^p (n/eps)^{C(n+p)} * log2(e)

makes delta-nets distortion-faithful once the constant C is large enough
that delta <= rho * eps / (64 n), where rho is the radius guaranteed
after a Lipschitz extension with constant c*n*D (c and the distortion D
are explicit inputs; nothing is hard-coded).  `calibrate_constant`
returns the minimal such C by binary search.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .logscalar import LogScalar
from .spaces import NormedSpace, norm_eval_many

LOG2E = math.log2(math.e)


def _exp2_clipped(log2_mag: float) -> float:
    """2**log2_mag as a float, overflowing to +inf instead of raising."""
    if log2_mag > 1075.0:
        return float("inf")
    return 2.0**log2_mag


def modulus_lower_bound(n: int, p: float, K: float, eps: float,
                        variant: str = "general") -> LogScalar:
    """Guaranteed lower bound on the modulus, as a LogScalar.

    eps = 1/2 itself is accepted for evaluation convenience.
    """
    if not (0.0 < eps <= 0.5):
        raise ValueError("eps must lie in (0, 1/2]")
    if p < 2.0 or K < 1.0 or n < 1:
        raise ValueError("need p >= 2, K >= 1, n >= 1")
    if variant == "general":
        if n == 1:
            expo = (16.0 * K / eps) ** p
        else:
            log2_expo = p * math.log2(K) + 20.0 * (n + p) * math.log2(n) \
                - (2.0 * p + 2.0 * n - 2.0) * math.log2(eps)
            expo = _exp2_clipped(log2_expo)
        return LogScalar.from_log2(expo * math.log2(eps))
    if variant == "sharp1d":
        if n != 1:
            raise ValueError("sharp1d is a one-dimensional bound")
        expo = (8.0 * K / eps) ** p
        return LogScalar.from_log2(expo * math.log2(eps / 8.0))
    raise ValueError(f"unknown variant {variant!r}")


def modulus_upper_bound(n: int, p: float, eps: float, variant: str = "interval") -> LogScalar:
    """Upper bound on the modulus from the explicit constructions.

    Exact when eps has the form 1/(8 m^{1/p}) (interval) or
    1/(16 m^{1/p}) (ball) for integer depth m; for other eps the formula
    is evaluated as written.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    if variant == "interval":
        return LogScalar.from_log2(2.0 - (8.0 * eps) ** (-p))
    if variant == "ball":
        if n < 1:
            raise ValueError("need n >= 1")
        return LogScalar.from_log2(math.log2(32.0 / math.sqrt(n)) - (16.0 * eps) ** (-p))
    raise ValueError(f"unknown variant {variant!r}")


def discretization_scale(n: int, p: float, K: float, eps: float, C: float) -> LogScalar:
    """Net fineness delta with log2(delta) = -K^p (n/eps)^{C(n+p)} log2(e)."""
    if n < 2:
        raise ValueError("discretization scale needs n >= 2")
    if not (0.0 < eps < 1.0):
        raise ValueError("eps must lie in (0, 1)")
    log2_mag = p * math.log2(K) + C * (n + p) * math.log2(n / eps)
    return LogScalar.from_log2(-_exp2_clipped(log2_mag) * LOG2E)


def extension_radius(n: int, p: float, K: float, eps: float, D: float,
                     c: float = 2.0) -> LogScalar:
    """Radius guaranteed for a (c n D)-Lipschitz extension, in log2-domain.

    log2(rho) = K^p n^{20(n+p)} (32 c n D / eps)^{2p+2n-2} * log2(eps).
    The extension constant c is an explicit stand-in input, default 2.
    """
    if n < 2:
        raise ValueError("needs n >= 2")
    log2_expo = p * math.log2(K) + 20.0 * (n + p) * math.log2(n) \
        + (2.0 * p + 2.0 * n - 2.0) * math.log2(32.0 * c * n * D / eps)
    expo = _exp2_clipped(log2_expo)
    return LogScalar.from_log2(expo * math.log2(eps))


def calibrate_constant(n: int, p: float, K: float, eps: float, D: float,
                       c: float = 2.0, lo: float = 1.0, hi: float = 1e3,
                       tol: float = 1e-3) -> float:
    """Minimal C in [lo, hi] with discretization_scale <= rho * eps / (64 n).

    The feasible set is upward-closed in C (larger C only shrinks delta),
    so a binary search to `tol` returns the minimal feasible value.
    Raises if even `hi` is infeasible.
    """
    if not (1.0 <= D <= n):
        raise ValueError("distortion D must lie in [1, n]")
    rho = extension_radius(n, p, K, eps, D, c)
    target = rho.log2 + math.log2(eps / (64.0 * n))

    def feasible(C: float) -> bool:
        return discretization_scale(n, p, K, eps, C).log2 <= target

    if not feasible(hi):
        raise ValueError(f"no feasible constant in [{lo}, {hi}] for these inputs")
    if feasible(lo):
        return lo
    a, b = lo, hi
    while b - a > tol:
        mid = 0.5 * (a + b)
        if feasible(mid):
            b = mid
        else:
            a = mid
    return b


def discretization_from_modulus(n: int, eps: float, r_fn, distortion: float,
                                kappa: float = 1.0) -> LogScalar:
    """Net threshold (eps/n) * r(kappa * eps / distortion), in log2-domain.

    r_fn maps an accuracy argument to a LogScalar lower bound on the
    modulus; kappa is an explicit input, not a fixed constant.
    """
    if not (0.0 < eps < 1.0):
        raise ValueError("eps must lie in (0, 1)")
    if distortion < 1.0:
        raise ValueError("distortion is >= 1")
    r_val = r_fn(kappa * eps / distortion)
    return LogScalar.from_log2(math.log2(eps / n)) * r_val


@dataclass
class NetResult:
    delta: float
    points: np.ndarray
    separation_ok: bool
    covering_checked: int
    covering_ok: bool

    def to_json(self) -> dict:
        return {
            "delta": self.delta,
            "points": self.points.tolist(),
            "separation_ok": self.separation_ok,
            "covering_checked": self.covering_checked,
            "covering_ok": self.covering_ok,
        }


def _min_dists(space: NormedSpace, batch: np.ndarray, points: np.ndarray) -> np.ndarray:
    """Approximate min X-distance from each batch row to the point set.

    Euclidean spaces go through one GEMM; callers must re-verify exactly
    near the decision boundary (the squared-distance identity loses a few
    ulps to cancellation).
    """
    if space.kind == "lq" and space.q == 2.0:
        b2 = np.sum(batch * batch, axis=1)
        best = np.full(batch.shape[0], np.inf)
        for start in range(0, points.shape[0], 256):
            chunk = points[start:start + 256]
            d2 = batch @ chunk.T
            d2 *= -2.0
            d2 += b2[:, None]
            d2 += np.sum(chunk * chunk, axis=1)[None, :]
            np.minimum(best, d2.min(axis=1), out=best)
        np.maximum(best, 0.0, out=best)
        return np.sqrt(best)
    out = np.full(batch.shape[0], np.inf)
    for start in range(0, points.shape[0], 128):
        chunk = points[start:start + 128]
        diffs = batch[:, None, :] - chunk[None, :, :]
        d = norm_eval_many(space, diffs.reshape(-1, space.dim))
        np.minimum(out, d.reshape(batch.shape[0], chunk.shape[0]).min(axis=1), out=out)
    return out


def _ball_samples(space: NormedSpace, rng: np.random.Generator, count: int) -> np.ndarray:
    """Seeded points of the unit ball, by rejection from the bounding cube."""
    n = space.dim
    out = np.empty((count, n))
    filled = 0
    while filled < count:
        batch = rng.uniform(-1.0, 1.0, size=(2 * (count - filled) + 16, n))
        keep = batch[norm_eval_many(space, batch) <= 1.0]
        take = min(keep.shape[0], count - filled)
        out[filled:filled + take] = keep[:take]
        filled += take
    return out


def delta_net(space: NormedSpace, delta: float, seed: int,
              samples: int = 10_000) -> NetResult:
    """Greedy farthest-point delta-net of the unit ball of an ell_q space.

    Farthest-point insertion over a lattice of in-ball points guarantees
    pairwise separation >= delta by construction.  The lattice is coarse,
    so covering is then driven by a seeded stream of random ball points:
    any tested point farther than delta from the net joins it (which
    preserves separation), until `samples` consecutive stream points land
    within delta.  That clean run is the reported covering verification.
    """
    if not (0.0 < delta <= 1.0):
        raise ValueError("delta must lie in (0, 1]")
    n = space.dim
    if n > 6:
        raise ValueError("net construction is limited to dimension <= 6")
    # lattice spacing delta/2 seeds the greedy phase; the sample stream
    # below closes the off-lattice gaps
    intervals = int(math.ceil(4.0 / delta))
    if intervals % 2:
        intervals += 1
    if (intervals + 1) ** n > 1_300_000:
        raise ValueError("lattice resource limit exceeded")
    axis = np.linspace(-1.0, 1.0, intervals + 1)
    mesh = np.meshgrid(*([axis] * n), indexing="ij")
    lattice = np.stack([m.reshape(-1) for m in mesh], axis=-1)
    lattice = lattice[norm_eval_many(space, lattice) <= 1.0 + 1e-12]

    # seeded ball samples joined to the candidate pool close the off-lattice
    # gaps up front, so the verification stream below converges quickly
    rng = np.random.default_rng(seed)
    extra = _ball_samples(space, rng, min(3 * samples, 50_000))

    net = [np.zeros(n)]
    active = np.vstack([lattice, extra])
    dist = norm_eval_many(space, active - net[0][None, :])
    while active.shape[0] > 0:
        i = int(np.argmax(dist))
        if dist[i] <= delta:
            break
        pt = active[i].copy()
        net.append(pt)
        np.minimum(dist, norm_eval_many(space, active - pt[None, :]), out=dist)
        # already-covered lattice points can never become the farthest again
        if active.shape[0] > 1024 and float(np.mean(dist <= delta)) > 0.5:
            keep = dist > delta
            active = active[keep]
            dist = dist[keep]

    points = np.asarray(net)
    covered = False
    for _ in range(50):
        pool = _ball_samples(space, rng, samples)
        dmin = np.full(samples, np.inf)
        for start in range(0, samples, 8192):
            stop = min(start + 8192, samples)
            dmin[start:stop] = _min_dists(space, pool[start:stop], points)
        # points clearly inside delta are covered; only near-boundary or
        # uncovered suspects get exact rechecks (and possibly join the net,
        # which preserves separation since their exact gap exceeds delta)
        additions = 0
        for b in np.nonzero(dmin > delta * (1.0 - 1e-6))[0]:
            gap = float(np.min(norm_eval_many(space, points - pool[b][None, :])))
            if gap > delta:
                points = np.vstack([points, pool[b][None, :]])
                additions += 1
        if additions == 0:
            covered = True
            break

    separation_ok = True
    for i in range(points.shape[0] - 1):
        d_i = norm_eval_many(space, points[i + 1:] - points[i][None, :])
        if float(np.min(d_i)) < delta - 1e-12:
            separation_ok = False
            break

    return NetResult(delta, points, separation_ok, samples, covered)
