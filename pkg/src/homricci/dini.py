"""Discrete Dini-derivative and comparison utilities.

For ``phi(t) = max_x g(t, x)`` over a compact set, the upper left Dini
derivative equals the minimum of ``dg/dt`` over the maximizers at ``t``.
These helpers work on finite sample sets and time grids so the statement can
be checked by refinement.
"""

from __future__ import annotations

from typing import Callable

import numpy as np

from .flow import COMPARISON_TOL


def dini_upper_left(t, values, window: int = 1) -> np.ndarray:
    """Backward difference quotients as estimates of the upper left Dini derivative.

    Entry ``i`` is ``max_{1<=j<=window} (v_i - v_{i-j}) / (t_i - t_{i-j})``;
    entry 0 is ``nan``.
    """
    t = np.asarray(t, dtype=float)
    v = np.asarray(values, dtype=float)
    if t.ndim != 1 or t.shape != v.shape or len(t) < 2:
        raise ValueError("need at least two samples with matching times")
    dt = np.diff(t)
    if np.any(dt <= 0):
        raise ValueError("sample times must be strictly increasing")
    out = np.full(len(t), np.nan)
    for i in range(1, len(t)):
        js = range(1, min(window, i) + 1)
        out[i] = max((v[i] - v[i - j]) / (t[i] - t[i - j]) for j in js)
    return out


def sup_function(g: Callable, points, times, atol: float = 1e-12):
    """``phi(t) = max_x g(t, x)`` on a finite point set, with the argmax sets.

    ``g(t, points)`` must return one value per point.  Returns ``(phi, argmax)``
    where ``argmax[i]`` are the indices attaining the maximum at ``times[i]``
    within ``atol``.
    """
    points = np.asarray(points)
    if len(points) == 0:
        raise ValueError("empty point set")
    phi, arg = [], []
    for t in np.atleast_1d(times):
        vals = np.asarray(g(t, points), dtype=float)
        m = vals.max()
        phi.append(m)
        arg.append(np.flatnonzero(vals >= m - atol))
    return np.array(phi), arg


def argmax_min_derivative(g: Callable, dg_dt: Callable, points, t: float,
                          atol: float = 1e-12) -> float:
    """``min`` of ``dg/dt(t, x)`` over the maximizers of ``g(t, .)``."""
    _, arg = sup_function(g, points, [t], atol=atol)
    return float(np.min(np.asarray(dg_dt(t, np.asarray(points)))[arg[0]]))


def left_quotient(g: Callable, points, t: float, h: float) -> float:
    """``(phi(t) - phi(t - h)) / h`` for ``phi = max_x g(., x)``."""
    if not h > 0:
        raise ValueError("h must be positive")
    phi, _ = sup_function(g, points, [t - h, t])
    return float((phi[1] - phi[0]) / h)


def comparison_check(t, values, slope: float, tol: float = COMPARISON_TOL) -> bool:
    """``v_i <= v_0 + slope (t_i - t_0) + tol`` for every sample."""
    t = np.asarray(t, dtype=float)
    v = np.asarray(values, dtype=float)
    if len(t) < 1 or t.shape != v.shape:
        raise ValueError("need samples with matching times")
    return bool(np.all(v <= v[0] + slope * (t - t[0]) + tol))
