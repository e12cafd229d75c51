"""One-dimensional dyadic energy functional and its refinement inequalities.

For h sampled on [a, b] at level m, the level-j energy is the mean p-th
power of the difference quotients over the 2^j dyadic subintervals:

    E_j(h) = 2^-j * sum_k || (h(t_{k+1}) - h(t_k)) / (2^-j (b-a)) ||_Y^p.

Two facts about E_j are checked numerically throughout this package:

  * refinement monotonicity: E_j >= E_{j-1} (convexity of ||.||^p);
  * the convexity gain: when the target norm satisfies the four-point
    inequality with (p, K),

        E_m >= E_0 + (1/(2K))^p * max_k ||h(t_k) - L(t_k)||^p / (b-a)^p,

    where L is the chord interpolating h between a and b.  Growth of the
    energy under refinement therefore certifies deviation from affinity.

Energies are computed by subsampling the stored level-m grid; h is never
resampled between its own grid points.  Sums run in ascending k order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels as kernels
from .grids import GridFunction1D
from .spaces import norm_eval, uc_params


@dataclass
class EnergyReport:
    """Energies E_0..E_m plus the convexity-gain bound on E_m."""

    energies: list[float]
    gain_bound: float
    max_deviation: float
    passed: bool
    tolerance: float

    def to_json(self) -> dict:
        return {
            "energies": list(self.energies),
            "gain_bound": self.gain_bound,
            "max_deviation": self.max_deviation,
            "pass": self.passed,
            "tolerance": self.tolerance,
        }


def linear_interp(h: GridFunction1D, t: float) -> np.ndarray:
    """Chord through (a, h(a)) and (b, h(b)), evaluated at any real t."""
    wb = (t - h.a) / (h.b - h.a)
    wa = (h.b - t) / (h.b - h.a)
    return wb * h.values[-1] + wa * h.values[0]


def energy(h: GridFunction1D, j: int, p: float) -> float:
    """Level-j energy E_j(h); requires 0 <= j <= m so subsampling is exact."""
    if not 0 <= j <= h.m:
        raise ValueError(f"level j={j} outside the stored resolution 0..{h.m}")
    stride = 1 << (h.m - j)
    vals = np.ascontiguousarray(h.values[::stride])
    return float(kernels.line_energy(vals, h.space.q, h.space.block_count, float(p), h.b - h.a))


def energy_profile(h: GridFunction1D, p: float) -> list[float]:
    return [energy(h, j, p) for j in range(h.m + 1)]


def chord_deviations(h: GridFunction1D) -> np.ndarray:
    """||h(t_k) - L(t_k)||_Y for every grid point t_k."""
    lines = h.values[None, :, :]
    return kernels.chord_devs(np.ascontiguousarray(lines), h.space.q, h.space.block_count)[0]


def refinement_gain_check(h: GridFunction1D, p: float | None = None, K: float | None = None,
                          tol: float = 1e-9) -> EnergyReport:
    """Check E_m against the convexity-gain lower bound.

    (p, K) default to the convexity parameters of the target space; they
    must make the four-point inequality valid for the report to be sound.
    """
    if p is None or K is None:
        p0, K0 = uc_params(h.space)
        p = p0 if p is None else p
        K = K0 if K is None else K
    energies = energy_profile(h, p)
    max_dev = float(np.max(chord_deviations(h)))
    width = h.b - h.a
    gain_bound = energies[0] + (max_dev / width) ** p / (2.0 * K) ** p
    passed = energies[-1] >= gain_bound - tol
    return EnergyReport(energies, gain_bound, max_dev, passed, tol)


def refinement_monotone(h: GridFunction1D, p: float, tol: float = 1e-9) -> bool:
    """True iff E_j >= E_{j-1} - tol for all levels (vacuous at m = 0)."""
    energies = energy_profile(h, p)
    return all(energies[j] >= energies[j - 1] - tol for j in range(1, len(energies)))


def midpoint_certificate(h: GridFunction1D, left_index: int, right_index: int) -> float:
    """Lower bound on sup-distance to every affine map over a grid window.

    For any affine A, A(mid) is the average of A(left) and A(right), so by
    the triangle inequality

        (1/2) ||h(mid) - (h(left) + h(right)) / 2||
            <= sup_{x in [left, right]} ||h(x) - A(x)||.

    Requires the midpoint to be on the grid (even index gap).
    """
    top = h.values.shape[0] - 1
    if not (0 <= left_index < right_index <= top):
        raise ValueError("window indices out of range")
    gap = right_index - left_index
    if gap % 2 != 0:
        raise ValueError("midpoint is off-grid (index gap must be even)")
    mid = left_index + gap // 2
    avg = 0.5 * (h.values[left_index] + h.values[right_index])
    return 0.5 * norm_eval(h.space, h.values[mid] - avg)
