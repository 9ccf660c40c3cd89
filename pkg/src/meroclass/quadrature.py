"""Gauss-Legendre quadrature along straight segments in the complex plane.

The panel count is refined uniformly for the whole batch of segments, so the
result is one fixed quadrature rule applied to every endpoint. That keeps the
approximation an analytic function of the endpoints, which matters when its
values are fed to the Cauchy/DFT coefficient oracle.
"""
from __future__ import annotations

import warnings
from functools import lru_cache

import mpmath
import numpy as np

NODES = 20
ABS_TOL = 1e-12
MAX_PANELS = 4096


@lru_cache(maxsize=None)
def _panel_rule(panels: int, nodes: int = NODES):
    """Nodes/weights of a composite rule on [0, 1] with equal panels."""
    x, w = np.polynomial.legendre.leggauss(nodes)
    x = (x + 1) / 2
    w = w / 2
    edges = np.arange(panels)[:, None]
    t = ((edges + x[None, :]) / panels).reshape(-1)
    wt = np.tile(w / panels, panels)
    return t, wt


def integrate_segments(g, start, end, tol: float = ABS_TOL, max_panels: int = MAX_PANELS):
    """Approximate ``int_start^end g(t) dt`` for arrays of endpoints.

    ``g`` must accept an array of points and be vectorized. The computation is
    carried out in the dtype of ``start``/``end``: complex128, clongdouble, or
    object arrays of mpmath numbers (the rule's nodes stay double, which
    keeps it one fixed analytic rule).
    """
    start, end = np.broadcast_arrays(np.asarray(start), np.asarray(end))
    dt = np.result_type(start.dtype, end.dtype, np.complex128)
    shape = start.shape
    a = start.reshape(-1).astype(dt)
    b = end.reshape(-1).astype(dt)
    if a.size == 0:
        return np.zeros(shape, dtype=dt)
    h = b - a

    def rule(panels):
        t, w = _panel_rule(panels)
        if dt == object:
            t = np.array([mpmath.mpf(x) for x in t], dtype=object)
            w = np.array([mpmath.mpf(x) for x in w], dtype=object)
            vals = np.asarray(g(a[:, None] + h[:, None] * t[None, :]), dtype=object)
            return h * (vals @ w)
        if dt != np.complex128:
            t = t.astype(np.longdouble)
            w = w.astype(np.longdouble)
        pts = a[:, None] + h[:, None] * t[None, :]
        vals = np.asarray(g(pts), dtype=dt)
        return h * (vals @ w.astype(vals.real.dtype))

    panels = 1
    prev = rule(panels)
    while True:
        panels *= 2
        cur = rule(panels)
        err = np.max(np.abs(cur - prev))
        if err <= tol:
            return cur.reshape(shape)
        if panels >= max_panels:
            warnings.warn(
                f"quadrature did not reach tol {tol:g} (estimate {float(err):.3g}) "
                f"with {panels} panels",
                RuntimeWarning,
                stacklevel=2,
            )
            return cur.reshape(shape)
        prev = cur


def integrate_from_origin(g, z, tol: float = ABS_TOL):
    """``int_0^z g(t) dt`` along the ray, for scalar or array z."""
    z = np.asarray(z)
    out = integrate_segments(g, np.zeros_like(z), z, tol=tol)
    return out
