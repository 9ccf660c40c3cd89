"""Truncated complex power series.

A :class:`PowerSeries` holds the coefficients ``c_0 .. c_N`` of a Taylor
expansion at the origin. Arithmetic never claims more precision than the
weakest operand: the result order is the minimum of the operand orders.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import mpmath
import numpy as np

from . import kernels
from .errors import ConstantNotOne, EvaluatorFailure, InnerConstantNonzero, ZeroConstantTerm

DEFAULT_ORDER = 128
ZERO_TOL = 1e-13


@dataclass(frozen=True, eq=False)
class PowerSeries:
    coeffs: np.ndarray
    order: int

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex).reshape(-1)
        if self.order < 0:
            raise ValueError("order must be nonnegative")
        if c.shape[0] < self.order + 1:
            c = np.concatenate([c, np.zeros(self.order + 1 - c.shape[0], dtype=complex)])
        elif c.shape[0] > self.order + 1:
            c = c[: self.order + 1]
        if not np.all(np.isfinite(c)):
            raise ValueError("non-finite coefficient")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    # constructors -------------------------------------------------------
    @classmethod
    def from_coeffs(cls, coeffs: Sequence[complex], order: int | None = None) -> PowerSeries:
        coeffs = list(coeffs)
        return cls(np.asarray(coeffs, dtype=complex), len(coeffs) - 1 if order is None else order)

    @classmethod
    def zero(cls, order: int = DEFAULT_ORDER) -> PowerSeries:
        return cls(np.zeros(order + 1, dtype=complex), order)

    @classmethod
    def constant(cls, value: complex, order: int = DEFAULT_ORDER) -> PowerSeries:
        return cls(np.array([value], dtype=complex), order)

    @classmethod
    def monomial(cls, value: complex, power: int, order: int = DEFAULT_ORDER) -> PowerSeries:
        c = np.zeros(order + 1, dtype=complex)
        if power <= order:
            c[power] = value
        return cls(c, order)

    # conveniences -------------------------------------------------------
    def __getitem__(self, k):
        return self.coeffs[k]

    def __len__(self):
        return self.order + 1

    def __add__(self, other):
        return add(self, _lift(other, self.order))

    __radd__ = __add__

    def __neg__(self):
        return PowerSeries(-self.coeffs, self.order)

    def __sub__(self, other):
        return add(self, -_lift(other, self.order))

    def __rsub__(self, other):
        return add(_lift(other, self.order), -self)

    def __mul__(self, other):
        if isinstance(other, PowerSeries):
            return mul(self, other)
        return PowerSeries(self.coeffs * complex(other), self.order)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, PowerSeries):
            return mul(self, reciprocal(other))
        return PowerSeries(self.coeffs / complex(other), self.order)

    def __call__(self, z):
        return evaluate(self, z)

    def truncate(self, order: int) -> PowerSeries:
        return PowerSeries(self.coeffs[: order + 1], min(order, self.order))

    def shift(self, k: int) -> PowerSeries:
        """Multiply by z**k (k > 0) or drop the lowest -k terms (k < 0)."""
        if k >= 0:
            return PowerSeries(np.concatenate([np.zeros(k, dtype=complex), self.coeffs]), self.order)
        return PowerSeries(self.coeffs[-k:], self.order)

    def allclose(self, other: PowerSeries, atol: float = 1e-12) -> bool:
        n = min(self.order, other.order)
        return bool(np.all(np.abs(self.coeffs[: n + 1] - other.coeffs[: n + 1]) <= atol))

    def to_json(self) -> dict:
        return {"order": self.order, "coeffs": [[float(c.real), float(c.imag)] for c in self.coeffs]}

    @classmethod
    def from_json(cls, data: dict) -> PowerSeries:
        return cls(np.array([complex(re, im) for re, im in data["coeffs"]]), int(data["order"]))

    def __repr__(self):
        shown = ", ".join(f"{c:.6g}" for c in self.coeffs[:6])
        tail = ", ..." if self.order >= 6 else ""
        return f"PowerSeries([{shown}{tail}], order={self.order})"


def _lift(x, order):
    if isinstance(x, PowerSeries):
        return x
    return PowerSeries.constant(complex(x), order)


def add(s: PowerSeries, t: PowerSeries) -> PowerSeries:
    n = min(s.order, t.order)
    return PowerSeries(s.coeffs[: n + 1] + t.coeffs[: n + 1], n)


def mul(s: PowerSeries, t: PowerSeries) -> PowerSeries:
    n = min(s.order, t.order)
    return PowerSeries(kernels.series_mul(s.coeffs, t.coeffs, n), n)


def reciprocal(s: PowerSeries) -> PowerSeries:
    if abs(s.coeffs[0]) <= ZERO_TOL:
        raise ZeroConstantTerm(f"constant term {s.coeffs[0]!r} is zero to tolerance")
    return PowerSeries(kernels.series_reciprocal(s.coeffs, s.order), s.order)


def differentiate(s: PowerSeries) -> PowerSeries:
    """Term-wise derivative. The top coefficient is lost, so the order drops
    by one (minimum 0)."""
    n = s.order
    if n == 0:
        return PowerSeries.zero(0)
    return PowerSeries(s.coeffs[1:] * np.arange(1, n + 1), n - 1)


def integrate(s: PowerSeries, order: int | None = None) -> PowerSeries:
    """Antiderivative vanishing at 0; exact, so the order grows by one unless
    ``order`` asks for a truncation."""
    n = s.order
    c = np.concatenate([[0.0], s.coeffs / np.arange(1, n + 2)])
    out = PowerSeries(c, n + 1)
    return out if order is None else out.truncate(order)


def compose(s: PowerSeries, t: PowerSeries) -> PowerSeries:
    """s(t(z)) by Horner's scheme in the series ring; needs t(0) = 0."""
    if abs(t.coeffs[0]) > ZERO_TOL:
        raise InnerConstantNonzero("inner series must vanish at 0")
    n = min(s.order, t.order)
    t = PowerSeries(np.concatenate([[0.0], t.coeffs[1 : n + 1]]), n)
    acc = PowerSeries.constant(s.coeffs[n], n)
    for k in range(n - 1, -1, -1):
        c = mul(acc, t).coeffs.copy()
        c[0] += s.coeffs[k]
        acc = PowerSeries(c, n)
    return acc


def log_series(s: PowerSeries) -> PowerSeries:
    """Principal logarithm, pinned by log(s)(0) = 0; needs s(0) = 1."""
    if abs(s.coeffs[0] - 1.0) > ZERO_TOL:
        raise ConstantNotOne(f"constant term {s.coeffs[0]!r} is not 1")
    n = s.order
    if n == 0:
        return PowerSeries.zero(0)
    # log(s)' = s'/s, known to order n-1
    return integrate(mul(differentiate(s), reciprocal(s)), order=n)


def evaluate(s: PowerSeries, z):
    """Horner evaluation of the truncated polynomial at scalar or array z."""
    if np.isscalar(z):
        return complex(kernels.horner(s.coeffs, np.array([z], dtype=complex))[0])
    z = np.asarray(z)
    if z.dtype in (np.clongdouble, object):
        # stay in the caller's precision (long double or mpmath objects)
        acc = np.zeros_like(z)
        for c in s.coeffs[::-1]:
            acc = acc * z + complex(c)
        return acc
    return kernels.horner(s.coeffs, z.astype(complex))


def coeffs_by_cauchy_dft(
    f: Callable[[np.ndarray], np.ndarray],
    r: float,
    N: int,
    M: int | None = None,
    extended: bool = False,
    dps: int | None = None,
) -> PowerSeries:
    """Taylor coefficients of ``f`` from M samples on the circle |z| = r.

    ``f`` is called once with the whole sample array. With ``extended`` the
    sample points are long-double and the transform is carried out in long
    double, which keeps the r**-k amplification of rounding noise in check
    when r is small and N large (the evaluator should then compute in the
    dtype it is given). With ``dps`` the samples are mpmath numbers at that
    many decimal digits in an object array, and the transform is done in
    mpmath; this is the path for r**-N beyond what long double can absorb.
    """
    if M is None:
        M = 4 * (N + 1)
    if M <= 2 * N:
        raise ValueError("need M > 2N samples")
    if not 0 < r:
        raise ValueError("radius must be positive")
    if dps is not None:
        return _cauchy_dft_mp(f, r, N, M, dps)
    dt = np.clongdouble if extended else np.complex128
    j = np.arange(M)
    if extended:
        two_pi = np.longdouble(2) * np.arccos(np.longdouble(-1))
        theta = two_pi * j.astype(np.longdouble) / M
        zs = (np.longdouble(r) * (np.cos(theta) + 1j * np.sin(theta))).astype(dt)
    else:
        theta = 2 * math.pi * j / M
        zs = r * np.exp(1j * theta)
    try:
        vals = np.asarray(f(zs))
    except Exception as exc:  # noqa: BLE001
        raise EvaluatorFailure(f"evaluator raised {exc!r}") from exc
    if vals.shape != zs.shape or not np.all(np.isfinite(vals)):
        raise EvaluatorFailure("evaluator returned non-finite or misshapen samples")
    if extended:
        vals = vals.astype(dt)
        k = np.arange(N + 1)
        phase = two_pi * ((np.outer(k, j) % M).astype(np.longdouble)) / M
        kernel = np.cos(phase) - 1j * np.sin(phase)
        raw = (kernel.astype(dt) @ vals) / M
        scale = np.longdouble(r) ** (-k.astype(np.longdouble))
        out = (raw * scale).astype(np.complex128)
    else:
        raw = np.fft.fft(vals)[: N + 1] / M
        out = raw * r ** (-np.arange(N + 1, dtype=float))
    return PowerSeries(out, N)


def _cauchy_dft_mp(f, r, N, M, dps):
    with mpmath.workdps(dps):
        roots = [mpmath.expjpi(mpmath.mpf(-2 * m) / M) for m in range(M)]
        rr = mpmath.mpf(r)
        zs = np.empty(M, dtype=object)
        for j in range(M):
            zs[j] = rr * mpmath.conj(roots[j])
        try:
            vals = np.asarray(f(zs), dtype=object)
        except Exception as exc:  # noqa: BLE001
            raise EvaluatorFailure(f"evaluator raised {exc!r}") from exc
        if vals.shape != zs.shape or not all(mpmath.isfinite(v) for v in vals):
            raise EvaluatorFailure("evaluator returned non-finite or misshapen samples")
        vals = [mpmath.mpmathify(v) for v in vals]
        out = np.empty(N + 1, dtype=complex)
        for k in range(N + 1):
            acc = mpmath.fsum(vals[j] * roots[(j * k) % M] for j in range(M))
            out[k] = complex(acc / M / rr**k)
    return PowerSeries(out, N)
