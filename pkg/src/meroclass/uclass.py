"""The classes U(lambda, mu): parameters, the representation formula, extremal
functions, sharp coefficient bounds and the (lambda, mu) region classifier.

Notation used throughout:

* ``q = z/f`` is the quotient series ``1 + b_1 z + b_2 z^2 + ...``;
* ``U_f = q - z q'`` and ``Omega = (U_f - mu)/lambda`` with coefficients c_k;
* ``a = (1 - mu)/lambda`` is the value Omega(0).
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import (
    BadNormalization,
    CoincidentPoints,
    InvalidClassParams,
    NoWitness,
    ParameterOutOfRange,
    SeriesSingularity,
)
from .quadrature import integrate_segments
from .schwarz import Constant, Monomial, SchwarzSpec, _as_complex, _pair, schwarz_from_json
from .series import DEFAULT_ORDER, PowerSeries, differentiate, integrate, mul, reciprocal

TIE_TOL = 1e-12
NORM_TOL = 1e-10


@dataclass(frozen=True)
class ClassParams:
    lam: float
    mu: complex

    def __post_init__(self):
        lam = float(self.lam)
        mu = complex(self.mu)
        if not (math.isfinite(lam) and cmath.isfinite(mu)):
            raise InvalidClassParams("lambda and mu must be finite")
        if lam <= 0:
            raise InvalidClassParams(f"lambda = {lam} must be positive")
        if abs(1 - mu) >= lam:
            raise InvalidClassParams(f"|1 - mu| = {abs(1 - mu)} must be < lambda = {lam}")
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "mu", mu)

    @property
    def a(self) -> complex:
        return (1 - self.mu) / self.lam

    @property
    def real_a(self) -> float | None:
        """a as a real number in [0, 1), or None when a is not of that form."""
        a = self.a
        if abs(a.imag) <= 1e-14 and -1e-14 <= a.real < 1:
            return max(a.real, 0.0)
        return None

    def to_json(self) -> dict:
        return {"lambda": self.lam, "mu": _pair(self.mu)}


@dataclass(frozen=True)
class ConstructionSpec:
    params: ClassParams
    c: complex
    omega: SchwarzSpec
    order: int = DEFAULT_ORDER

    def __post_init__(self):
        object.__setattr__(self, "c", complex(self.c))
        if int(self.order) != self.order or self.order < 4:
            raise ParameterOutOfRange("order must be an integer >= 4")
        if not cmath.isfinite(self.c):
            raise ParameterOutOfRange("c must be finite")

    def to_json(self) -> dict:
        return {
            "lambda": self.params.lam,
            "mu": _pair(self.params.mu),
            "c": _pair(self.c),
            "omega": self.omega.to_json(),
            "order": self.order,
        }

    @classmethod
    def from_json(cls, data: dict) -> ConstructionSpec:
        extra = set(data) - {"lambda", "mu", "c", "omega", "order"}
        if extra:
            raise ParameterOutOfRange(f"unknown keys: {sorted(extra)}")
        params = ClassParams(float(data["lambda"]), _as_complex(data["mu"]))
        return cls(
            params,
            _as_complex(data.get("c", [0.0, 0.0])),
            schwarz_from_json(data["omega"]),
            int(data.get("order", DEFAULT_ORDER)),
        )

    # pointwise pieces of the representation formula ----------------------
    def integrand(self, t):
        """(1 - |a|^2) w(t) / (1 + conj(a) t^2 w(t)) for an array t."""
        a = self.params.a
        w = self.omega.values(t)
        return (1 - abs(a) ** 2) * w / (1 + np.conj(a) * t * t * w)

    def integral(self, z, tol: float = 1e-12):
        z = np.asarray(z)
        return integrate_segments(self.integrand, np.zeros_like(z), z, tol=tol)


@dataclass(frozen=True, eq=False)
class FunctionSeries(PowerSeries):
    """Series of a normalized f that also carries the exact series of z/f.

    Recovering z/f from f by series inversion is badly conditioned whenever
    z/f has zeros well inside the disk, so constructors keep the quotient.
    """

    quotient: PowerSeries | None = None
    spec: ConstructionSpec | None = field(default=None, compare=False)


def _f_from_quotient(q: PowerSeries, spec=None) -> FunctionSeries:
    with np.errstate(over="ignore", invalid="ignore"):
        inv = kernels.series_reciprocal(q.coeffs, q.order)
    if not np.all(np.isfinite(inv)):
        raise SeriesSingularity("f has a pole too close to the origin for this order")
    return FunctionSeries(np.concatenate([[0.0], inv]), q.order, quotient=q, spec=spec)


def quotient_of(f, order: int | None = None) -> PowerSeries:
    """Series of z/f for a normalized f (a PowerSeries or a catalog function)."""
    if hasattr(f, "quotient_series"):
        return f.quotient_series(order or DEFAULT_ORDER)
    if not isinstance(f, PowerSeries):
        raise TypeError(f"cannot take the quotient of {type(f).__name__}")
    if abs(f.coeffs[0]) > NORM_TOL or f.order < 1 or abs(f.coeffs[1] - 1) > NORM_TOL:
        raise BadNormalization("f must satisfy f(0) = 0 and f'(0) = 1")
    q = getattr(f, "quotient", None)
    if q is None:
        q = reciprocal(PowerSeries(f.coeffs[1:], f.order - 1))
    return q if order is None else q.truncate(order)


def u_operator(f, order: int | None = None) -> PowerSeries:
    """Series of U_f = (z/f)^2 f' = q - z q', formed from q = z/f."""
    q = quotient_of(f, order)
    k = np.arange(q.order + 1)
    return PowerSeries(q.coeffs * (1 - k), q.order)


def induced_omega_of(f, params: ClassParams, order: int | None = None) -> PowerSeries:
    u = u_operator(f, order)
    return (u - params.mu) / params.lam


def quotient_from_spec(spec: ConstructionSpec, order: int | None = None) -> PowerSeries:
    """z/f = 1 + c z - lambda z int_0^z integrand, as a series."""
    n = spec.order if order is None else order
    a = spec.params.a
    w = spec.omega.series(n)
    den = w.shift(2) * np.conj(a) + 1.0
    g = mul(w, reciprocal(den)) * (1 - abs(a) ** 2)
    integral = integrate(g, order=n)
    out = -spec.params.lam * integral.shift(1)
    c = out.coeffs.copy()
    c[0] += 1.0
    c[1] += spec.c
    return PowerSeries(c, n)


def construct(spec: ConstructionSpec) -> FunctionSeries:
    """Series of the class member given by the representation formula."""
    return _f_from_quotient(quotient_from_spec(spec), spec)


def extremal_fk_spec(k: int, params: ClassParams, c: complex = 0, order: int = DEFAULT_ORDER) -> ConstructionSpec:
    if int(k) != k or k < 2:
        raise ParameterOutOfRange("k must be an integer >= 2")
    return ConstructionSpec(params, c, Monomial(-1.0, int(k) - 2), order)


def extremal_fk(k: int, params: ClassParams, c: complex = 0, order: int = DEFAULT_ORDER) -> FunctionSeries:
    """Member whose k-th quotient coefficient attains the sharp bound."""
    return construct(extremal_fk_spec(k, params, c, order))


def _require_real_a(params: ClassParams) -> float:
    a = params.real_a
    if a is None:
        raise ParameterOutOfRange(f"a = {params.a} must be real in [0, 1) here")
    return a


def _check_p(p: float) -> float:
    p = float(p)
    if not 0 < p <= 1:
        raise ParameterOutOfRange(f"p = {p} must lie in (0, 1]")
    return p


def _log_ratio_over_2sqrt(a: float, x: float) -> float:
    """int_0^x dt/(1 - a t^2) = atanh(sqrt(a) x)/sqrt(a), continuous at a = 0."""
    if a == 0:
        return x
    s = math.sqrt(a)
    return math.atanh(s * x) / s


def a2_bound(params: ClassParams, p: float = 1.0) -> float:
    """Sharp bound A_2 on |a_2| for members analytic in |z| < p (real a)."""
    a = _require_real_a(params)
    p = _check_p(p)
    return 1.0 / p + params.lam * (1 - a * a) * _log_ratio_over_2sqrt(a, p)


def extremal_f0_spec(params: ClassParams, p: float = 1.0, order: int = DEFAULT_ORDER) -> ConstructionSpec:
    return ConstructionSpec(params, -a2_bound(params, p), Constant(-1.0), order)


def extremal_f0(params: ClassParams, p: float = 1.0, order: int = DEFAULT_ORDER) -> FunctionSeries:
    """Extremal function for the a_2 bound; its quotient vanishes at z = p."""
    return construct(extremal_f0_spec(params, p, order))


def slit_mapping_params(lam: float) -> ClassParams:
    """U(lambda, lambda) for lambda in (1/2, 1], home of the slit mappings."""
    if not 0.5 < lam <= 1:
        raise ParameterOutOfRange("slit mappings need lambda in (1/2, 1]")
    return ClassParams(lam, lam)


def b_coefficients(f, K: int) -> np.ndarray:
    """b_1 .. b_K, the coefficients of z/f - 1."""
    q = quotient_of(f)
    if K > q.order:
        raise ParameterOutOfRange(f"K = {K} exceeds the series order {q.order}")
    return np.array(q.coeffs[1 : K + 1])


def bk_bound(k: int, params: ClassParams) -> float:
    if k < 2:
        raise ParameterOutOfRange("k must be >= 2")
    lam = params.lam
    return lam / (k - 1) * (1 - abs(1 - params.mu) ** 2 / lam**2)


def l2_bound(params: ClassParams) -> float:
    lam = params.lam
    return lam**2 * (1 - abs(1 - params.mu) ** 2 / lam**2)


def l2_weighted_sum(f, K: int) -> float:
    """sum_{k=2}^K |b_k|^2 (k-1)^2."""
    b = b_coefficients(f, K)
    k = np.arange(1, K + 1)
    # fsum is correctly rounded, so the truncated sums are monotone in K
    return math.fsum((np.abs(b[1:]) * (k[1:] - 1)) ** 2)


@dataclass(frozen=True)
class BoundReport:
    kind: str
    index: float
    bound_value: float
    achieved_value: float

    @property
    def gap(self) -> float:
        return self.bound_value - self.achieved_value

    def to_json(self) -> dict:
        key = "p" if self.kind == "a2" else "k"
        return {
            "kind": self.kind,
            key: self.index,
            "bound_value": self.bound_value,
            "achieved_value": self.achieved_value,
            "gap": self.gap,
        }


def bound_reports(params: ClassParams, kmax: int = 6, K: int = 200, p: float | None = 1.0, c: complex = 0) -> list[BoundReport]:
    """Bounds of the three coefficient theorems against their extremals."""
    rows = []
    for k in range(2, kmax + 1):
        fk = extremal_fk(k, params, c, order=max(k, 8))
        rows.append(BoundReport("bk", k, bk_bound(k, params), float(abs(b_coefficients(fk, k)[k - 1]))))
    f2 = extremal_fk(2, params, c, order=K)
    rows.append(BoundReport("l2", K, l2_bound(params), l2_weighted_sum(f2, K)))
    if p is not None and params.real_a is not None:
        f0 = extremal_f0(params, p, order=8)
        rows.append(BoundReport("a2", p, a2_bound(params, p), float(abs(f0.coeffs[2]))))
    return rows


@dataclass(frozen=True)
class RegionVerdict:
    locally_univalent_all: bool
    univalence_guaranteed: bool
    contains_non_locally_univalent: bool
    open_region: bool

    @property
    def label(self) -> str:
        if self.contains_non_locally_univalent:
            return "contains_non_locally_univalent"
        if self.univalence_guaranteed:
            return "univalence_guaranteed"
        return "open_region"

    def to_json(self) -> dict:
        return {
            "verdict": self.label,
            "locally_univalent_all": self.locally_univalent_all,
            "univalence_guaranteed": self.univalence_guaranteed,
            "contains_non_locally_univalent": self.contains_non_locally_univalent,
            "open_region": self.open_region,
        }


def classify(params: ClassParams) -> RegionVerdict:
    """Region of (lambda, mu) per the local univalence criterion |mu| >= lambda
    and the univalence conditions lambda <= 1/2 or |1 - mu| <= 1 - lambda.
    Boundary ties (to within 1e-12) go to the closed side."""
    lam, mu = params.lam, params.mu
    if not 0 < lam <= 1:
        raise InvalidClassParams(f"lambda = {lam} must lie in (0, 1]")
    local = abs(mu) >= lam - TIE_TOL
    guaranteed = lam <= 0.5 or abs(1 - mu) <= 1 - lam + TIE_TOL
    return RegionVerdict(
        locally_univalent_all=local,
        univalence_guaranteed=guaranteed and local,
        contains_non_locally_univalent=not local,
        open_region=local and not guaranteed,
    )


@dataclass(frozen=True)
class CriticalWitness:
    z: complex
    residual: float
    spec: ConstructionSpec

    def to_json(self) -> dict:
        return {"z": _pair(self.z), "abs_z": abs(self.z), "residual": self.residual, "spec": self.spec.to_json()}


def critical_point_witness(params: ClassParams, c: complex = 0) -> CriticalWitness:
    """A critical point of the w = 1 member when |mu| < lambda.

    Solves z^2 = -1/(lambda (1 - |a|^2) + conj(a)); the root lies in the disk
    exactly when the modulus of the denominator exceeds 1.
    """
    from .functions import Represented

    a = params.a
    e = params.lam * (1 - abs(a) ** 2) + np.conj(a)
    if abs(e) <= 1 + TIE_TOL:
        raise NoWitness(f"|lambda(1-|a|^2) + conj(a)| = {abs(e)} <= 1, no critical point in the disk")
    z1 = complex(np.sqrt(-1 / complex(e)))
    spec = ConstructionSpec(params, c, Constant(1.0))
    residual = float(abs(Represented(spec).df(np.array([z1]))[0]))
    return CriticalWitness(z1, residual, spec)


def difference_quotient_margin(spec: ConstructionSpec, z1, z2):
    """1 - |lambda z1 z2/(z1 - z2) int_{z2}^{z1} integrand dt|.

    Positive values certify f(z1) != f(z2). Accepts arrays of pairs.
    """
    z1 = np.asarray(z1, dtype=complex)
    z2 = np.asarray(z2, dtype=complex)
    if np.any(np.abs(z1 - z2) == 0):
        raise CoincidentPoints("z1 and z2 must differ")
    if np.any(np.abs(z1) >= 1) or np.any(np.abs(z2) >= 1) or np.any(z1 == 0) or np.any(z2 == 0):
        raise ParameterOutOfRange("points must be nonzero and inside the disk")
    integral = integrate_segments(spec.integrand, z2, z1)
    out = 1 - np.abs(spec.params.lam * z1 * z2 / (z1 - z2) * integral)
    return float(out) if out.ndim == 0 else out
