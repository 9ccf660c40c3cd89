"""Pure numpy implementations of the inner loops.

These mirror ``_ckernels.pyx`` one for one and are used when the compiled
extension is unavailable (or when ``MEROCLASS_PURE_PYTHON=1``).
"""
import numpy as np


def series_mul(a, b, n):
    out = np.convolve(a[: n + 1], b[: n + 1])[: n + 1]
    if out.shape[0] < n + 1:
        out = np.concatenate([out, np.zeros(n + 1 - out.shape[0], dtype=complex)])
    return out


def series_reciprocal(a, n):
    r = np.zeros(n + 1, dtype=complex)
    if a.shape[0] < n + 1:
        a = np.concatenate([a, np.zeros(n + 1 - a.shape[0], dtype=complex)])
    inv0 = 1.0 / a[0]
    r[0] = inv0
    for k in range(1, n + 1):
        # sum_{j=1..k} a_j r_{k-j}
        r[k] = -inv0 * np.dot(a[1 : k + 1], r[k - 1 :: -1])
    return r


def horner(coeffs, z):
    z = np.asarray(z, dtype=complex)
    acc = np.zeros_like(z)
    for c in coeffs[::-1]:
        acc = acc * z + c
    return acc


def winding_numbers(curve, scale, points):
    """Argument increment / 2pi of the closed polygon ``curve - w*scale``
    around 0, for each w in ``points``. Both curves repeat their first vertex;
    pass ``scale`` = ones for the plain winding of ``curve`` around w."""
    points = np.asarray(points, dtype=complex)
    out = np.empty(points.shape[0], dtype=float)
    # chunked to keep the (points x segments) temporary bounded
    step = max(1, 2_000_000 // max(curve.shape[0], 1))
    for s in range(0, points.shape[0], step):
        w = points[s : s + step, None]
        d = curve[None, :] - w * scale[None, :]
        # arg(b conj(a)) = arg(b/a) without the division
        inc = np.angle(d[:, 1:] * np.conj(d[:, :-1]))
        out[s : s + step] = inc.sum(axis=1) / (2.0 * np.pi)
    return out


def find_collision(z, w, rel_tol, min_sep):
    """First index pair (i, j) with |w_i - w_j| < rel_tol*(1+|w_i|) while
    |z_i - z_j| > min_sep, or None. Sweep over points sorted by Re w."""
    order = np.argsort(w.real, kind="stable")
    ws = w[order]
    zs = z[order]
    bound = rel_tol * (1.0 + np.abs(ws).max()) if ws.size else 0.0
    n = ws.shape[0]
    for i in range(n):
        j_end = np.searchsorted(ws.real, ws.real[i] + bound, side="right")
        if j_end <= i + 1:
            continue
        cand = slice(i + 1, j_end)
        close = np.abs(ws[cand] - ws[i]) < rel_tol * (1.0 + abs(ws[i]))
        apart = np.abs(zs[cand] - zs[i]) > min_sep
        hit = np.nonzero(close & apart)[0]
        if hit.size:
            return int(order[i]), int(order[i + 1 + hit[0]])
    return None
