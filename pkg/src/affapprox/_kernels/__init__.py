"""Kernel backend selection.

The hot inner loops (row norms, dyadic line energies, chord-deviation
scans, the sup-norm subgradient solver, convexity residual batches) ship
in two interchangeable implementations: numba-jitted loops in
`accelerated` and pure-numpy fallbacks in `reference`.

Selection is controlled by the AFFAPPROX_BACKEND environment variable,
read once at import:

  auto   (default) numba when importable, numpy otherwise
  numba  require the jitted backend, fail if numba is missing
  numpy  force the pure-numpy fallback

`get_backend` returns either implementation by name regardless of the
active choice, which is what the benchmark uses to compare them.
"""

from __future__ import annotations

import os

import numpy as np

_ENV = "AFFAPPROX_BACKEND"


def _choose():
    mode = os.environ.get(_ENV, "auto").strip().lower()
    if mode not in ("auto", "numba", "numpy"):
        raise ValueError(f"unrecognized {_ENV}={mode!r}; expected auto, numba or numpy")
    if mode != "numpy":
        try:
            from . import accelerated

            return accelerated, "numba"
        except ImportError:
            if mode == "numba":
                raise
    from . import reference

    return reference, "numpy"


_impl, BACKEND = _choose()

norm_rows = _impl.norm_rows
line_energy = _impl.line_energy
line_energies = _impl.line_energies
chord_devs = _impl.chord_devs
uc_residual_rows = _impl.uc_residual_rows
subgradient_fit = _impl.subgradient_fit

KERNEL_NAMES = (
    "norm_rows",
    "line_energy",
    "line_energies",
    "chord_devs",
    "uc_residual_rows",
    "subgradient_fit",
)


def get_backend(name: str):
    """Kernel module by name ("numpy" or "numba"), for benchmarks/tests."""
    if name == "numpy":
        from . import reference

        return reference
    if name == "numba":
        from . import accelerated

        return accelerated
    raise ValueError(f"unknown backend {name!r}")


def warmup() -> None:
    """Trigger JIT compilation of the active backend on tiny inputs."""
    a = np.zeros((2, 4))
    b = np.ones((3, 4))
    norm_rows(a, 2.0, 0)
    norm_rows(b, 3.0, 2)
    line_energy(np.ones((3, 2)), 2.0, 0, 2.0, 1.0)
    line_energies(np.zeros((2, 3, 2)), 2.5, 0, 2.0, 1.0)
    chord_devs(np.zeros((2, 3, 2)), 2.0, 0)
    uc_residual_rows(np.ones((2, 4)), np.zeros((2, 4)), 2.0, 0, 2.0, 1.0)
    subgradient_fit(np.ones((3, 2)), np.zeros((3, 2)), np.zeros((2, 2)), 2.0, 0, 0.1, 3, 1e-9)
