"""Pure-numpy kernels (fallback backend).

Row norms are vectorized; energy accumulations loop in ascending index
order so the documented summation order holds on every backend.

Norm convention shared by all kernels: `outer == 0` means a plain ell_q
norm on the whole row; `outer > 0` means the row splits into `outer`
consecutive blocks of equal size and the norm is the Euclidean norm of
the block-wise ell_q norms.  q must be finite here.
"""

from __future__ import annotations

import numpy as np


def _lq(x, q):
    if q == 1.0:
        return np.sum(x, axis=-1)
    if q == 2.0:
        return np.sqrt(np.sum(x * x, axis=-1))
    return np.sum(x**q, axis=-1) ** (1.0 / q)


def norm_rows(a, q, outer):
    """Norms of the rows of a 2-D array."""
    x = np.abs(np.asarray(a, dtype=np.float64))
    if outer > 0:
        inner = x.shape[-1] // outer
        blocks = x.reshape(x.shape[:-1] + (outer, inner))
        bn = _lq(blocks, q)
        return np.sqrt(np.sum(bn * bn, axis=-1))
    return _lq(x, q)


def line_energy(vals, q, outer, p, width):
    """Mean p-th power of difference quotients of one sampled line.

    vals has shape (M+1, d); the line covers an interval of length `width`
    sampled uniformly.  The accumulation runs in ascending index order.
    """
    diffs = vals[1:] - vals[:-1]
    norms = norm_rows(diffs, q, outer)
    s = 0.0
    for v in norms:
        s += float(v) ** p
    m_count = norms.shape[0]
    return s * float(m_count) ** (p - 1.0) / float(width) ** p


def line_energies(lines, q, outer, p, width):
    """line_energy applied to each line of a (L, M+1, d) stack."""
    lines = np.asarray(lines, dtype=np.float64)
    out = np.empty(lines.shape[0])
    for i in range(lines.shape[0]):
        out[i] = line_energy(lines[i], q, outer, p, width)
    return out


def chord_devs(lines, q, outer):
    """Deviation norms of sampled lines from their endpoint chords.

    lines has shape (L, S, d); entry (l, k) is the norm of
    lines[l, k] - (lines[l, 0] + (k/(S-1)) * (lines[l, S-1] - lines[l, 0])).
    """
    lines = np.asarray(lines, dtype=np.float64)
    L, S, d = lines.shape
    m_count = S - 1
    t = (np.arange(S) / m_count)[None, :, None]
    chord = lines[:, :1, :] + t * (lines[:, -1:, :] - lines[:, :1, :])
    return norm_rows((lines - chord).reshape(L * S, d), q, outer).reshape(L, S)


def uc_residual_rows(xs, ys, q, outer, p, K):
    """Four-point convexity residual per row pair (xs[i], ys[i])."""
    xs = np.asarray(xs, dtype=np.float64)
    ys = np.asarray(ys, dtype=np.float64)
    n_plus = norm_rows(xs + ys, q, outer) ** p
    n_minus = norm_rows(xs - ys, q, outer) ** p
    n_x = norm_rows(xs, q, outer) ** p
    n_y = norm_rows(ys, q, outer) ** p
    return n_plus + n_minus - 2.0 * n_x - (2.0 / float(K) ** p) * n_y


def _norm_grad(v, q, outer):
    """A subgradient of the norm at v (zero vector at v = 0)."""
    v = np.asarray(v, dtype=np.float64)
    if outer > 0:
        inner = v.shape[0] // outer
        b = v.reshape(outer, inner)
        bn = _lq(np.abs(b), q)
        total = np.sqrt(np.sum(bn * bn))
        if total == 0.0:
            return np.zeros_like(v)
        g = np.zeros_like(b)
        for j in range(outer):
            if bn[j] == 0.0:
                continue
            g[j] = np.sign(b[j]) * np.abs(b[j]) ** (q - 1.0) * bn[j] ** (2.0 - q) / total
        return g.reshape(-1)
    n = float(_lq(np.abs(v), q))
    if n == 0.0:
        return np.zeros_like(v)
    if q == 1.0:
        return np.sign(v)
    return np.sign(v) * np.abs(v) ** (q - 1.0) / n ** (q - 1.0)


def subgradient_fit(xd, yv, w0, q, outer, step0, max_iter, tol):
    """Minimize max_i ||yv[i] - xd[i] @ W|| by subgradient descent.

    xd: (N, k) design rows, yv: (N, d) targets, w0: (k, d) start.
    Steps decay as step0/sqrt(t); the best iterate (exact sup) is kept.
    Returns (w_best, sup_best, iterations, step_converged).
    """
    xd = np.ascontiguousarray(xd, dtype=np.float64)
    yv = np.ascontiguousarray(yv, dtype=np.float64)
    w = np.array(w0, dtype=np.float64, copy=True)
    r = yv - xd @ w
    norms = norm_rows(r, q, outer)
    imax = int(np.argmax(norms))
    best = float(norms[imax])
    wbest = w.copy()
    iters = 0
    converged = False
    for t in range(1, int(max_iter) + 1):
        g = _norm_grad(r[imax], q, outer)
        step = step0 / np.sqrt(t)
        dw = step * np.outer(xd[imax], g)
        w += dw
        r = yv - xd @ w
        norms = norm_rows(r, q, outer)
        imax = int(np.argmax(norms))
        sup = float(norms[imax])
        iters = t
        if sup < best:
            best = sup
            wbest = w.copy()
        if float(np.sqrt(np.sum(dw * dw))) <= tol * (1.0 + float(np.sqrt(np.sum(w * w)))):
            converged = True
            break
    return wbest, best, iters, converged
