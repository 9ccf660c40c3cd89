"""Numerical verdicts on sampled grids.

Grid methods can refute (with a witness that can be re-checked by direct
evaluation) but never prove; every verdict is one of ``supported``-style,
``refuted`` or ``inconclusive``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import CenterMismatch, EvaluatorFailure, RadiusTooLarge
from .functions import ClassFunction, PolynomialFunction, as_function
from .schwarz import _pair
from .series import PowerSeries, coeffs_by_cauchy_dft
from .uclass import ClassParams

DEFAULT_RADII = (0.5, 0.9, 0.99, 0.999)
CURVE_SEGMENTS = 2048
COLLISION_TOL = 1e-9
COLLISION_SEP = 1e-6
LONG_DOUBLE_EPS = float(np.finfo(np.longdouble).eps)


@dataclass(frozen=True)
class SamplingGrid:
    radii: tuple = DEFAULT_RADII
    angles_per_ring: int = 512
    seed: int = 0
    jitter: bool = True
    extra_points: tuple = ()

    def __post_init__(self):
        radii = tuple(float(r) for r in self.radii)
        if not radii or any(not 0 < r < 1 for r in radii):
            raise ValueError("radii must lie in (0, 1)")
        if any(b <= a for a, b in zip(radii, radii[1:])):
            raise ValueError("radii must be strictly increasing")
        if self.angles_per_ring < 64:
            raise ValueError("need at least 64 angles per ring")
        object.__setattr__(self, "radii", radii)
        object.__setattr__(self, "extra_points", tuple(complex(z) for z in self.extra_points))

    @property
    def outer(self) -> float:
        return self.radii[-1]

    def rings(self) -> list[np.ndarray]:
        n = self.angles_per_ring
        offsets = np.random.default_rng(self.seed).random(len(self.radii)) if self.jitter else np.zeros(len(self.radii))
        base = 2 * np.pi * np.arange(n) / n
        return [r * np.exp(1j * (base + 2 * np.pi * off / n)) for r, off in zip(self.radii, offsets)]

    def points(self) -> np.ndarray:
        return np.concatenate(self.rings() + [np.array(self.extra_points, dtype=complex)])

    def to_json(self) -> dict:
        return {
            "radii": list(self.radii),
            "angles_per_ring": self.angles_per_ring,
            "seed": self.seed,
            "jitter": self.jitter,
            "extra_points": [_pair(z) for z in self.extra_points],
        }

    @classmethod
    def from_json(cls, data: dict) -> SamplingGrid:
        extra = set(data) - {"radii", "angles_per_ring", "seed", "jitter", "extra_points"}
        if extra:
            raise ValueError(f"unknown grid keys: {sorted(extra)}")
        return cls(
            tuple(data.get("radii", DEFAULT_RADII)),
            int(data.get("angles_per_ring", 512)),
            int(data.get("seed", 0)),
            bool(data.get("jitter", True)),
            tuple(complex(*p) for p in data.get("extra_points", [])),
        )


def circle(r: float, n: int = CURVE_SEGMENTS) -> np.ndarray:
    """n-segment closed polygon on |z| = r (first vertex repeated)."""
    t = 2 * np.pi * np.arange(n + 1) / n
    z = r * np.exp(1j * t)
    z[-1] = z[0]
    return z


def _witness(z, value) -> dict:
    return {"z": _pair(complex(z)), "value": _pair(complex(value))}


# ---------------------------------------------------------------- membership
@dataclass
class MembershipReport:
    sup_estimate: float
    margin: float
    verdict: str
    grid: SamplingGrid
    ring_sups: list = field(default_factory=list)
    witness: dict | None = None

    def to_json(self) -> dict:
        return {
            "sup_estimate": self.sup_estimate,
            "margin": self.margin,
            "verdict": self.verdict,
            "ring_sups": self.ring_sups,
            "witness": self.witness,
            "grid": self.grid.to_json(),
        }


def membership(f, params: ClassParams, grid: SamplingGrid | None = None, tol: float = 1e-9) -> MembershipReport:
    """Estimate sup |U_f - mu| over the grid. ``member-supported`` when the
    estimate stays below lambda - tol; ``refuted`` with a point where
    |U_f - mu| >= lambda."""
    grid = grid or SamplingGrid()
    fn = as_function(f)
    sups = []
    best = (-1.0, 0j, 0j)
    for ring in grid.rings() + ([np.array(grid.extra_points)] if grid.extra_points else []):
        u = fn.u(ring)
        if not np.all(np.isfinite(u)):
            bad = ring[~np.isfinite(u)][0]
            raise EvaluatorFailure(f"U_f is not finite at z = {bad}")
        dev = np.abs(u - params.mu)
        i = int(np.argmax(dev))
        sups.append(float(dev[i]))
        if dev[i] > best[0]:
            best = (float(dev[i]), ring[i], u[i])
    sup = best[0]
    ring_sups = sups[: len(grid.radii)]
    if sup < params.lam - tol:
        return MembershipReport(sup, params.lam - sup, "member-supported", grid, ring_sups)
    verdict = "refuted" if sup >= params.lam else "inconclusive"
    return MembershipReport(sup, params.lam - sup, verdict, grid, ring_sups, _witness(best[1], best[2]))


# --------------------------------------------------------- local univalence
@dataclass
class LocalUnivalenceReport:
    min_abs_derivative: float
    argmin: complex
    critical_points_inside: int | None
    verdict: str
    witness: dict | None = None

    def to_json(self) -> dict:
        return {
            "min_abs_derivative": self.min_abs_derivative,
            "argmin": _pair(self.argmin),
            "critical_points_inside": self.critical_points_inside,
            "verdict": self.verdict,
            "witness": self.witness,
        }


def _newton(h, dh, starts, radius, tol=1e-13, iters=60):
    """Roots of h from several starts, kept if they converge inside radius."""
    found = []
    for z in starts:
        z = complex(z)
        for _ in range(iters):
            d = complex(dh(np.array([z]))[0])
            if d == 0 or not math.isfinite(abs(d)):
                break
            step = complex(h(np.array([z]))[0]) / d
            z -= step
            if abs(z) >= radius:
                break
            if abs(step) < tol:
                break
        if abs(z) < radius and abs(complex(h(np.array([z]))[0])) < 1e-10:
            found.append(z)
    return found


def _numeric_derivative(fun, eps=1e-6):
    def d(z):
        z = np.asarray(z, dtype=complex)
        return (fun(z + eps) - fun(z - eps)) / (2 * eps)

    return d


def local_univalence_check(f, grid: SamplingGrid | None = None, tol: float = 1e-8) -> LocalUnivalenceReport:
    """min |f'| over the grid, plus a zero count of U_f = (z/f)^2 f' inside the
    outer ring by the argument principle (exact for functions with an analytic
    quotient, e.g. every class member). Critical points found by Newton's
    method are reported as witnesses."""
    grid = grid or SamplingGrid()
    fn = as_function(f)
    pts = grid.points()
    with np.errstate(all="ignore"):
        df = np.abs(fn.df(pts))
    df = np.where(np.isfinite(df), df, np.inf)
    i = int(np.argmin(df))
    min_df, argmin = float(df[i]), complex(pts[i])

    count = None
    witness = None
    if not isinstance(fn, PolynomialFunction):
        ring = circle(grid.outer)
        u_ring = fn.u(ring)
        if np.all(np.isfinite(u_ring)):
            u_ring[-1] = u_ring[0]
            count = int(round(float(kernels.winding_numbers(u_ring, np.ones_like(u_ring), np.array([0j]))[0])))
    else:
        # f' is a polynomial: count its zeros directly
        ring = circle(grid.outer)
        d_ring = fn.df(ring)
        d_ring[-1] = d_ring[0]
        count = int(round(float(kernels.winding_numbers(d_ring, np.ones_like(d_ring), np.array([0j]))[0])))

    if count:
        target = fn.u if not isinstance(fn, PolynomialFunction) else fn.df
        with np.errstate(all="ignore"):
            mag = np.abs(target(pts))
        order = np.argsort(np.where(np.isfinite(mag), mag, np.inf))[:8]
        roots = _newton(target, _numeric_derivative(target), pts[order], grid.outer)
        if roots:
            z = roots[0]
            witness = _witness(z, fn.df(np.array([z]))[0])
    if min_df < tol and witness is None:
        witness = _witness(argmin, fn.df(np.array([argmin]))[0])
    if witness is not None:
        verdict = "refuted"
    elif count is None or count > 0:
        verdict = "inconclusive"
    else:
        verdict = "consistent"
    return LocalUnivalenceReport(min_df, argmin, count, verdict, witness)


# --------------------------------------------------------------- univalence
@dataclass
class UnivalenceReport:
    verdict: str
    checked_targets: int
    max_preimages: int
    witness: dict | None = None

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "checked_targets": self.checked_targets,
            "max_preimages": self.max_preimages,
            "witness": self.witness,
        }


def _pair_witness(fn, z1, z2) -> dict:
    v = fn.f(np.array([z1, z2]))
    return {"z1": _pair(z1), "z2": _pair(z2), "f_z1": _pair(v[0]), "f_z2": _pair(v[1])}


def univalence_grid(f, grid: SamplingGrid | None = None, targets_per_ring: int = 256) -> UnivalenceReport:
    """Necessary-condition univalence test: no two grid points share an image,
    and each sampled image value w of an inner ring has exactly one preimage
    inside the outer ring (winding number of z - w z/f(z), or of f - w for
    polynomial f)."""
    grid = grid or SamplingGrid()
    fn = as_function(f)
    pts = grid.points()
    with np.errstate(all="ignore"):
        q = fn.quotient(pts)
        vals = pts / q
    ok = np.isfinite(vals) & (np.abs(q) > 1e-8)
    hit = kernels.find_collision(pts[ok], vals[ok], COLLISION_TOL, COLLISION_SEP)
    if hit is not None:
        z1, z2 = pts[ok][hit[0]], pts[ok][hit[1]]
        return UnivalenceReport("refuted", 0, 2, _pair_witness(fn, z1, z2))

    ring = circle(grid.outer)
    polynomial = isinstance(fn, PolynomialFunction)
    if polynomial:
        a_curve, b_curve = fn.f(ring), np.ones_like(ring)
    else:
        a_curve, b_curve = ring.copy(), fn.quotient(ring)
    a_curve[-1], b_curve[-1] = a_curve[0], b_curve[0]
    if not (np.all(np.isfinite(a_curve)) and np.all(np.isfinite(b_curve))):
        return UnivalenceReport("inconclusive", 0, 0)

    rings = grid.rings()[:-1] or [grid.rings()[0] * 0.5]
    tz = np.concatenate([r[:: max(1, r.shape[0] // targets_per_ring)] for r in rings])
    with np.errstate(all="ignore"):
        tw = tz / fn.quotient(tz)
    keep = np.isfinite(tw)
    tz, tw = tz[keep], tw[keep]
    wind = kernels.winding_numbers(a_curve, b_curve, tw)
    counts = np.rint(wind).astype(int)
    bad = np.nonzero(counts != 1)[0]
    if bad.size == 0:
        return UnivalenceReport("consistent-with-univalence", int(tz.size), 1)
    j = int(bad[np.argmax(counts[bad])])
    z1, w = complex(tz[j]), complex(tw[j])
    if counts[j] < 1:
        return UnivalenceReport("inconclusive", int(tz.size), int(counts.max()), {"z": _pair(z1), "winding": int(counts[j])})
    if polynomial:
        h = lambda z: fn.f(z) - w  # noqa: E731
        dh = fn.df
    else:
        h = lambda z: z - w * fn.quotient(z)  # noqa: E731
        dh = lambda z: 1 - w * fn.dquotient(z)  # noqa: E731
    with np.errstate(all="ignore"):
        mag = np.abs(fn.f(pts) - w)
    far = np.abs(pts - z1) > 1e-3
    starts = pts[far][np.argsort(np.where(np.isfinite(mag[far]), mag[far], np.inf))[:12]]
    for z2 in _newton(h, dh, starts, grid.outer):
        if abs(z2 - z1) > COLLISION_SEP:
            return UnivalenceReport("refuted", int(tz.size), int(counts[j]), _pair_witness(fn, z1, z2))
    return UnivalenceReport("refuted", int(tz.size), int(counts[j]), {"z": _pair(z1), "winding": int(counts[j])})


# ------------------------------------------------------------- subordination
@dataclass
class SubordinationReport:
    verdict: str
    max_winding_defect: int
    radii: list
    witness: dict | None = None
    boundary_samples: int = 0
    note: str = ""

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "max_winding_defect": self.max_winding_defect,
            "radii": self.radii,
            "witness": self.witness,
            "boundary_samples": self.boundary_samples,
            "note": self.note,
        }


def _distance_to_polygon(w: np.ndarray, poly: np.ndarray) -> np.ndarray:
    a, b = poly[:-1], poly[1:]
    ab = b - a
    out = np.empty(w.shape[0])
    step = max(1, 1_000_000 // ab.shape[0])
    for s in range(0, w.shape[0], step):
        ww = w[s : s + step, None]
        t = np.real((ww - a) * np.conj(ab)) / np.maximum(np.abs(ab) ** 2, 1e-300)
        t = np.clip(t, 0, 1)
        out[s : s + step] = np.abs(ww - (a + t * ab)).min(axis=1)
    return out


def subordination_check(g, h, radii, n_curve: int = CURVE_SEGMENTS, n_targets: int = 512) -> SubordinationReport:
    """Test g(D_r) within h(D_r) on each circle |z| = r, for h univalent.

    Samples g(r e^{it}) must have winding number 1 with respect to the curve
    h(r e^{is}); samples within the polygon's chord error of the curve count
    as boundary points and pass.
    """
    radii = [float(r) for r in radii]
    g0 = complex(np.asarray(g(np.array([0j])))[0])
    h0 = complex(np.asarray(h(np.array([0j])))[0])
    if abs(g0 - h0) > 1e-9:
        raise CenterMismatch(f"g(0) = {g0} differs from h(0) = {h0}")
    max_defect = 0
    on_boundary = 0
    for r in radii:
        poly = np.asarray(h(circle(r, n_curve)), dtype=complex)
        poly[-1] = poly[0]
        ones = np.ones_like(poly)
        if not np.all(np.isfinite(poly)):
            return SubordinationReport("inconclusive", max_defect, radii, None, on_boundary, f"majorant not finite on |z| = {r}")
        if round(float(kernels.winding_numbers(poly, ones, np.array([h0]))[0])) != 1:
            return SubordinationReport("inconclusive", max_defect, radii, None, on_boundary, f"majorant curve at r = {r} does not wind once")
        mids = np.asarray(h(r * np.exp(1j * (2 * np.pi * (np.arange(n_curve) + 0.5) / n_curve))), dtype=complex)
        sagitta = np.abs(mids - (poly[:-1] + poly[1:]) / 2).max()
        band = 2 * sagitta + 1e-12 * (1 + np.abs(poly).max())
        theta = 2 * np.pi * (np.arange(n_targets) + 0.5) / n_targets
        w = np.asarray(g(r * np.exp(1j * theta)), dtype=complex)
        near = _distance_to_polygon(w, poly) <= band
        on_boundary += int(near.sum())
        wind = kernels.winding_numbers(poly, ones, w)
        counts = np.rint(wind).astype(int)
        defect = np.where(near, 0, np.abs(counts - 1))
        max_defect = max(max_defect, int(defect.max()))
        bad = np.nonzero(defect > 0)[0]
        if bad.size:
            j = int(bad[0])
            wit = {"r": r, "theta": float(theta[j]), "z": _pair(r * np.exp(1j * theta[j])), "value": _pair(w[j]), "winding": int(counts[j])}
            return SubordinationReport("refuted", max_defect, radii, wit, on_boundary)
    return SubordinationReport("supported", max_defect, radii, None, on_boundary)


# -------------------------------------------------------------------- oracle
def oracle_cross_check(obj, r: float = 0.5, N: int = 32, target: str = "quotient", precision: str = "auto") -> float:
    """Max |difference| between the series pipeline's coefficients and the
    Cauchy/DFT coefficients of the pointwise (quadrature) evaluator.

    ``target='quotient'`` compares z/f, analytic on the whole disk for class
    members; ``target='f'`` compares f itself and needs z/f zero-free on
    |z| <= r.

    Rounding noise in the samples is amplified by r**-N. ``precision='auto'``
    uses long double while that amplification keeps the noise floor below
    1e-9 and switches to mpmath (``'multi'``) beyond it.
    """
    fn = as_function(obj)
    if not 0 < r < 1:
        raise RadiusTooLarge(f"r = {r} must lie in (0, 1)")
    digits = N * math.log10(1 / r)
    if precision == "auto":
        precision = "extended" if LONG_DOUBLE_EPS * 10**digits <= 1e-9 else "multi"
    if precision not in ("extended", "multi"):
        raise ValueError("precision must be 'auto', 'extended' or 'multi'")
    dft_opts = {"extended": True} if precision == "extended" else {"dps": int(digits) + 25}
    q_series = fn.quotient_series(N)
    if target == "quotient":
        dft = coeffs_by_cauchy_dft(fn.quotient, r, N, **dft_opts)
        return float(np.max(np.abs(dft.coeffs - q_series.coeffs)))
    if target != "f":
        raise ValueError("target must be 'quotient' or 'f'")
    ring = circle(r)
    qr = fn.quotient(ring)
    qr[-1] = qr[0]
    zeros = round(float(kernels.winding_numbers(qr, np.ones_like(qr), np.array([0j]))[0]))
    if zeros or np.min(np.abs(qr)) < 1e-8:
        raise RadiusTooLarge(f"z/f vanishes within |z| <= {r}")
    from .uclass import _f_from_quotient

    f_series = _f_from_quotient(PowerSeries(q_series.coeffs, N))
    dft = coeffs_by_cauchy_dft(fn.f, r, N, **dft_opts)
    return float(np.max(np.abs(dft.coeffs - f_series.coeffs)))
