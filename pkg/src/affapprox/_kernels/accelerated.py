"""Numba-jitted kernels (hot backend).

Twins of reference.py with identical signatures and summation order.
All loops are sequential; no parallel reductions, so results are
reproducible run to run.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def _lq_one(v, q):
    d = v.shape[0]
    if q == 1.0:
        s = 0.0
        for i in range(d):
            s += abs(v[i])
        return s
    if q == 2.0:
        s = 0.0
        for i in range(d):
            s += v[i] * v[i]
        return np.sqrt(s)
    s = 0.0
    for i in range(d):
        s += abs(v[i]) ** q
    return s ** (1.0 / q)


@njit(cache=True)
def _norm_one(v, q, outer):
    if outer > 0:
        inner = v.shape[0] // outer
        s = 0.0
        for b in range(outer):
            nb = _lq_one(v[b * inner:(b + 1) * inner], q)
            s += nb * nb
        return np.sqrt(s)
    return _lq_one(v, q)


@njit(cache=True)
def norm_rows(a, q, outer):
    n = a.shape[0]
    out = np.empty(n)
    for i in range(n):
        out[i] = _norm_one(a[i], q, outer)
    return out


@njit(cache=True)
def line_energy(vals, q, outer, p, width):
    m_count = vals.shape[0] - 1
    d = vals.shape[1]
    diff = np.empty(d)
    s = 0.0
    for k in range(m_count):
        for c in range(d):
            diff[c] = vals[k + 1, c] - vals[k, c]
        s += _norm_one(diff, q, outer) ** p
    return s * float(m_count) ** (p - 1.0) / float(width) ** p


@njit(cache=True)
def line_energies(lines, q, outer, p, width):
    out = np.empty(lines.shape[0])
    for i in range(lines.shape[0]):
        out[i] = line_energy(lines[i], q, outer, p, width)
    return out


@njit(cache=True)
def chord_devs(lines, q, outer):
    L, S, d = lines.shape
    m_count = S - 1
    out = np.empty((L, S))
    diff = np.empty(d)
    for l in range(L):
        for k in range(S):
            t = k / m_count
            for c in range(d):
                diff[c] = lines[l, k, c] - (lines[l, 0, c] + t * (lines[l, m_count, c] - lines[l, 0, c]))
            out[l, k] = _norm_one(diff, q, outer)
    return out


@njit(cache=True)
def uc_residual_rows(xs, ys, q, outer, p, K):
    n, d = xs.shape
    out = np.empty(n)
    tp = np.empty(d)
    tm = np.empty(d)
    c_k = 2.0 / K**p
    for i in range(n):
        for c in range(d):
            tp[c] = xs[i, c] + ys[i, c]
            tm[c] = xs[i, c] - ys[i, c]
        out[i] = (
            _norm_one(tp, q, outer) ** p
            + _norm_one(tm, q, outer) ** p
            - 2.0 * _norm_one(xs[i], q, outer) ** p
            - c_k * _norm_one(ys[i], q, outer) ** p
        )
    return out


@njit(cache=True)
def _norm_grad(v, q, outer, out):
    d = v.shape[0]
    for c in range(d):
        out[c] = 0.0
    if outer > 0:
        inner = d // outer
        total = _norm_one(v, q, outer)
        if total == 0.0:
            return
        for b in range(outer):
            nb = _lq_one(v[b * inner:(b + 1) * inner], q)
            if nb == 0.0:
                continue
            scale = nb ** (2.0 - q) / total
            for c in range(inner):
                x = v[b * inner + c]
                if x > 0.0:
                    out[b * inner + c] = x ** (q - 1.0) * scale
                elif x < 0.0:
                    out[b * inner + c] = -((-x) ** (q - 1.0)) * scale
        return
    n = _lq_one(v, q)
    if n == 0.0:
        return
    if q == 1.0:
        for c in range(d):
            if v[c] > 0.0:
                out[c] = 1.0
            elif v[c] < 0.0:
                out[c] = -1.0
        return
    den = n ** (q - 1.0)
    for c in range(d):
        x = v[c]
        if x > 0.0:
            out[c] = x ** (q - 1.0) / den
        elif x < 0.0:
            out[c] = -((-x) ** (q - 1.0)) / den


@njit(cache=True)
def subgradient_fit(xd, yv, w0, q, outer, step0, max_iter, tol):
    N, kdim = xd.shape
    d = yv.shape[1]
    w = w0.copy()
    wbest = w0.copy()
    r = np.empty((N, d))
    norms = np.empty(N)
    g = np.empty(d)

    for i in range(N):
        for c in range(d):
            acc = yv[i, c]
            for a in range(kdim):
                acc -= xd[i, a] * w[a, c]
            r[i, c] = acc
        norms[i] = _norm_one(r[i], q, outer)
    imax = 0
    for i in range(1, N):
        if norms[i] > norms[imax]:
            imax = i
    best = norms[imax]
    iters = 0
    converged = False

    for t in range(1, max_iter + 1):
        _norm_grad(r[imax], q, outer, g)
        step = step0 / np.sqrt(float(t))
        dwn = 0.0
        for a in range(kdim):
            xa = xd[imax, a]
            for c in range(d):
                dd = step * xa * g[c]
                w[a, c] += dd
                dwn += dd * dd
        wn = 0.0
        for a in range(kdim):
            for c in range(d):
                wn += w[a, c] * w[a, c]
        for i in range(N):
            for c in range(d):
                acc = yv[i, c]
                for a in range(kdim):
                    acc -= xd[i, a] * w[a, c]
                r[i, c] = acc
            norms[i] = _norm_one(r[i], q, outer)
        imax = 0
        for i in range(1, N):
            if norms[i] > norms[imax]:
                imax = i
        sup = norms[imax]
        iters = t
        if sup < best:
            best = sup
            for a in range(kdim):
                for c in range(d):
                    wbest[a, c] = w[a, c]
        if np.sqrt(dwn) <= tol * (1.0 + np.sqrt(wn)):
            converged = True
            break
    return wbest, best, iters, converged
