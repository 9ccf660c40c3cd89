"""Pointwise evaluators for normalized meromorphic functions.

Every function is described through its quotient ``q(z) = z/f(z)``, which is
analytic on the disk for class members even where f has poles. Derived
quantities:

    f = z/q,   f' = U/q^2,   U = q - z q'.

Evaluators accept complex128, clongdouble or object arrays of mpmath numbers
and compute in that precision.
"""
from __future__ import annotations

import mpmath
import numpy as np

from .errors import ParameterOutOfRange
from .series import DEFAULT_ORDER, PowerSeries, differentiate, evaluate, reciprocal
from .uclass import (
    ClassParams,
    ConstructionSpec,
    FunctionSeries,
    _require_real_a,
    a2_bound,
    extremal_f0_spec,
    extremal_fk_spec,
    quotient_from_spec,
    slit_mapping_params,
)


class ClassFunction:
    """Base class; subclasses define ``quotient``, ``dquotient`` and
    ``quotient_series``."""

    name = "function"

    def quotient(self, z):
        raise NotImplementedError

    def dquotient(self, z):
        raise NotImplementedError

    def quotient_series(self, order: int = DEFAULT_ORDER) -> PowerSeries:
        raise NotImplementedError

    def qdq(self, z):
        return self.quotient(z), self.dquotient(z)

    def u(self, z):
        q, dq = self.qdq(z)
        return q - z * dq

    def f(self, z):
        return z / self.quotient(z)

    def df(self, z):
        q, dq = self.qdq(z)
        return (q - z * dq) / (q * q)

    def __call__(self, z):
        return self.f(z)


class Identity(ClassFunction):
    name = "identity"

    def quotient(self, z):
        return np.ones_like(np.asarray(z))

    def dquotient(self, z):
        return np.zeros_like(np.asarray(z))

    def quotient_series(self, order=DEFAULT_ORDER):
        return PowerSeries.constant(1.0, order)


class Mobius(ClassFunction):
    """f(z) = z/(1 + c z), a member of every class."""

    name = "mobius"

    def __init__(self, c: complex):
        self.c = complex(c)

    def quotient(self, z):
        return 1 + self.c * np.asarray(z)

    def dquotient(self, z):
        return np.full_like(np.asarray(z), self.c)

    def quotient_series(self, order=DEFAULT_ORDER):
        return PowerSeries.from_coeffs([1.0, self.c], order)


class Koebe(ClassFunction):
    """f(z) = z/(1 - z)^2."""

    name = "koebe"

    def quotient(self, z):
        z = np.asarray(z)
        return (1 - z) ** 2

    def dquotient(self, z):
        return -2 * (1 - np.asarray(z))

    def quotient_series(self, order=DEFAULT_ORDER):
        return PowerSeries.from_coeffs([1.0, -2.0, 1.0], order)


class Represented(ClassFunction):
    """Member of U(lambda, mu) given by the representation formula, evaluated
    by quadrature: q(z) = 1 + c z - lambda z I(z), I(z) = int_0^z integrand."""

    name = "spec"

    def __init__(self, spec: ConstructionSpec, tol: float = 1e-12):
        self.spec = spec
        self.tol = tol

    def qdq(self, z):
        z = np.asarray(z)
        lam, c = self.spec.params.lam, self.spec.c
        integral = self.spec.integral(z, tol=self.tol)
        q = 1 + c * z - lam * z * integral
        dq = c - lam * integral - lam * z * self.spec.integrand(z)
        return q, dq

    def quotient(self, z):
        return self.qdq(z)[0]

    def dquotient(self, z):
        return self.qdq(z)[1]

    def quotient_series(self, order=DEFAULT_ORDER):
        return quotient_from_spec(self.spec, order)


class ExtremalF0(ClassFunction):
    """Closed (logarithmic) form of the a_2-extremal quotient for real a:

        q(z) = 1 - z/p + C z [L(z) - L(p)],  L(x) = log((1 + s x)/(1 - s x)),
        s = sqrt(a), C = lambda (1 - a^2)/(2 s);

    and q(z) = 1 - (1/p + lambda p) z + lambda z^2 when a = 0 (so that q(p) = 0
    and the linear coefficient is -A_2).
    """

    name = "f0"

    def __init__(self, params: ClassParams, p: float = 1.0):
        self.params = params
        self.a = _require_real_a(params)
        self.p = float(p)
        self.A2 = a2_bound(params, p)

    def _logs(self, x):
        s = np.sqrt(self.a)
        if np.asarray(x).dtype == object:
            log1p = np.frompyfunc(mpmath.log1p, 1, 1)
            return log1p(s * x) - log1p(-s * x)
        return np.log1p(s * x) - np.log1p(-s * x)

    def qdq(self, z):
        z = np.asarray(z)
        lam, a, p = self.params.lam, self.a, self.p
        if a == 0:
            q = 1 - (1 / p + lam * p) * z + lam * z * z
            dq = -(1 / p + lam * p) + 2 * lam * z
            return q, dq
        s = np.sqrt(a)
        cc = lam * (1 - a * a) / (2 * s)
        lp = float(np.log1p(s * p) - np.log1p(-s * p))
        lz = self._logs(z)
        q = 1 - z / p + cc * z * (lz - lp)
        dq = -1 / p + cc * (lz - lp) + cc * z * 2 * s / (1 - a * z * z)
        return q, dq

    def quotient(self, z):
        return self.qdq(z)[0]

    def dquotient(self, z):
        return self.qdq(z)[1]

    def quotient_series(self, order=DEFAULT_ORDER):
        return quotient_from_spec(extremal_f0_spec(self.params, self.p, order))

    def as_represented(self) -> Represented:
        return Represented(extremal_f0_spec(self.params, self.p))


class SeriesFunction(ClassFunction):
    """Evaluates a given series of z/f by Horner; trustworthy only well
    inside its radius of convergence."""

    name = "series"

    def __init__(self, quotient: PowerSeries):
        self._q = quotient
        self._dq = differentiate(quotient)

    def quotient(self, z):
        return evaluate(self._q, z)

    def dquotient(self, z):
        return evaluate(self._dq, z)

    def quotient_series(self, order=DEFAULT_ORDER):
        return self._q.truncate(order)


class PolynomialFunction(ClassFunction):
    """A normalized f given by its own (truncated) series, evaluated directly."""

    name = "polynomial"

    def __init__(self, f: PowerSeries):
        self._f = f
        self._df = differentiate(f)

    def f(self, z):
        return evaluate(self._f, z)

    def qdq(self, z):
        z = np.asarray(z)
        fv = evaluate(self._f, z)
        dfv = evaluate(self._df, z)
        return z / fv, (fv - z * dfv) / (fv * fv)

    def quotient(self, z):
        return self.qdq(z)[0]

    def dquotient(self, z):
        return self.qdq(z)[1]

    def df(self, z):
        return evaluate(self._df, z)

    def quotient_series(self, order=DEFAULT_ORDER):
        f = self._f
        return reciprocal(PowerSeries(f.coeffs[1:], f.order - 1)).truncate(order)


def as_function(obj) -> ClassFunction:
    """Coerce a catalog function, ConstructionSpec or series into an evaluator."""
    if isinstance(obj, ClassFunction):
        return obj
    if isinstance(obj, ConstructionSpec):
        return Represented(obj)
    if isinstance(obj, FunctionSeries):
        if obj.spec is not None:
            return Represented(obj.spec)
        if obj.quotient is not None:
            return SeriesFunction(obj.quotient)
    if isinstance(obj, PowerSeries):
        return PolynomialFunction(obj)
    raise TypeError(f"cannot evaluate {type(obj).__name__}")


def catalog(name: str, params: ClassParams | None = None, **kw) -> ClassFunction:
    """Named functions: identity, mobius(c), koebe, fk(k, c), f0(p), slit(p)."""
    name = name.lower()
    if name == "identity":
        return Identity()
    if name == "mobius":
        return Mobius(kw.get("c", 0.0))
    if name == "koebe":
        return Koebe()
    if params is None and name in ("fk", "f0"):
        raise ParameterOutOfRange(f"catalog entry {name!r} needs class parameters")
    if name == "fk":
        return Represented(extremal_fk_spec(int(kw.get("k", 2)), params, kw.get("c", 0.0)))
    if name == "f0":
        return ExtremalF0(params, kw.get("p", 1.0))
    if name == "slit":
        lam = params.lam if params is not None else kw["lambda"]
        return ExtremalF0(slit_mapping_params(lam), kw.get("p", 1.0))
    raise ParameterOutOfRange(f"unknown catalog function {name!r}")
