"""Independent brute-force oracles used to freeze expected values.

Everything here is a plain fine-grid computation that shares no code with
the package's analytic or refined-grid paths: left-endpoint clamped
Riemann sums, dense sign scans, and dense forward integration.

The clamped recursion s[k] = max(0, s[k-1] + c[k]) with initial state s0
has the closed form (Lindley recursion)

    s[k] = max(s0 + cum[k], cum[k] - min_{1<=j<=k} cum[j]),

which allows exact chunked evaluation on huge grids.
"""

from __future__ import annotations

import numpy as np

_CHUNK = 2_000_000


def _chunk_states(state: float, contribs: np.ndarray) -> np.ndarray:
    cum = np.cumsum(contribs)
    return np.maximum(state + cum, cum - np.minimum.accumulate(cum))


def clamped_riemann(f, a: float, b: float, step: float = 1e-6) -> float:
    """Left-endpoint clamped Riemann sum over [a, b]."""
    n = int(np.ceil((b - a) / step))
    h = (b - a) / n
    state = 0.0
    lo = 0
    while lo < n:
        hi = min(lo + _CHUNK, n)
        xs = a + np.arange(lo, hi) * h
        state = float(_chunk_states(state, f(xs) * h)[-1])
        lo = hi
    return state


def forward_threshold(f, start: float, k: float, hi: float, step: float) -> float:
    """First grid point where the clamped forward sum reaches k."""
    n = int(np.ceil((hi - start) / step))
    h = (hi - start) / n
    state = 0.0
    lo = 0
    while lo < n:
        up = min(lo + _CHUNK, n)
        xs = start + np.arange(lo, up) * h
        states = _chunk_states(state, f(xs) * h)
        hits = np.flatnonzero(states >= k)
        if hits.size:
            return float(xs[int(hits[0])] + h)
        state = float(states[-1])
        lo = up
    raise RuntimeError("threshold not reached")


def last_zero_before(f, start: float, t_stop: float, step: float) -> float:
    """Last grid point with clamped state == 0 before t_stop."""
    n = int(np.ceil((t_stop - start) / step))
    h = (t_stop - start) / n
    last = start
    state = 0.0
    lo = 0
    while lo < n:
        up = min(lo + _CHUNK, n)
        xs = start + np.arange(lo, up) * h
        states = _chunk_states(state, f(xs) * h)
        zeros = np.flatnonzero(states <= 0.0)
        if zeros.size:
            last = float(xs[int(zeros[-1])] + h)
        state = float(states[-1])
        lo = up
    return last


def dense_roots(f, lo: float, hi: float, step: float = 1e-6):
    """All sign-change roots of f by dense scan + interval bisection."""
    n = int(np.ceil((hi - lo) / step))
    roots: list[float] = []
    prev_x = lo
    prev_y = float(f(np.array([lo]))[0])
    i = 0
    while i < n:
        j = min(i + _CHUNK, n)
        xs = lo + (np.arange(i, j) + 1) * (hi - lo) / n
        ys = f(xs)
        allx = np.concatenate(([prev_x], xs))
        ally = np.concatenate(([prev_y], ys))
        for idx in np.flatnonzero(ally[:-1] * ally[1:] <= 0):
            a, b = float(allx[idx]), float(allx[idx + 1])
            fa = float(ally[idx])
            if fa == 0.0:
                roots.append(a)
                continue
            for _ in range(80):
                m = 0.5 * (a + b)
                fm = float(f(np.array([m]))[0])
                if fa * fm <= 0:
                    b = m
                else:
                    a, fa = m, fm
            roots.append(0.5 * (a + b))
        prev_x, prev_y = float(xs[-1]), float(ys[-1])
        i = j
    return sorted(roots)
