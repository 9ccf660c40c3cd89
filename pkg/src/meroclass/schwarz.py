"""Unit-bounded analytic functions (the class B) and the Möbius recombination
Omega(z) = (a + z^2 w(z)) / (1 + conj(a) z^2 w(z)).

Four finite-parameter families are provided. Every variant is validated at
construction, so |w(z)| <= 1 on the disk holds by construction.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import OutsideDisk, ParameterOutOfRange
from .series import DEFAULT_ORDER, PowerSeries, mul, reciprocal

_TOL = 1e-12


def _as_complex(x) -> complex:
    if isinstance(x, (list, tuple)) and len(x) == 2:
        return complex(float(x[0]), float(x[1]))
    return complex(x)


def _pair(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


class SchwarzSpec:
    """Base for the four families. Subclasses implement ``values`` (no disk
    check, any numpy complex dtype) and ``series``."""

    kind: str = ""

    def values(self, z):
        raise NotImplementedError

    def series(self, order: int = DEFAULT_ORDER) -> PowerSeries:
        raise NotImplementedError

    def to_json(self) -> dict:
        raise NotImplementedError

    def __call__(self, z):
        return evaluate_omega(self, z)


@dataclass(frozen=True)
class Constant(SchwarzSpec):
    u: complex
    kind = "constant"

    def __post_init__(self):
        object.__setattr__(self, "u", complex(self.u))
        if abs(self.u) > 1 + _TOL:
            raise ParameterOutOfRange(f"|u| = {abs(self.u)} > 1")

    def values(self, z):
        z = np.asarray(z)
        return np.full(z.shape, self.u, dtype=np.result_type(z.dtype, np.complex128))

    def series(self, order=DEFAULT_ORDER):
        return PowerSeries.constant(self.u, order)

    def to_json(self):
        return {"kind": "constant", "u": _pair(self.u)}


@dataclass(frozen=True)
class Monomial(SchwarzSpec):
    u: complex
    m: int
    kind = "monomial"

    def __post_init__(self):
        object.__setattr__(self, "u", complex(self.u))
        if abs(self.u) > 1 + _TOL:
            raise ParameterOutOfRange(f"|u| = {abs(self.u)} > 1")
        if int(self.m) != self.m or self.m < 0:
            raise ParameterOutOfRange(f"power m = {self.m} must be a nonnegative integer")
        object.__setattr__(self, "m", int(self.m))

    def values(self, z):
        z = np.asarray(z)
        return self.u * z**self.m if self.m else Constant(self.u).values(z)

    def series(self, order=DEFAULT_ORDER):
        return PowerSeries.monomial(self.u, self.m, order)

    def to_json(self):
        return {"kind": "monomial", "u": _pair(self.u), "m": self.m}


@dataclass(frozen=True)
class BlaschkeProduct(SchwarzSpec):
    zeros: tuple = ()
    unimodular_factor: complex = 1.0
    kind = "blaschke"

    def __post_init__(self):
        zs = tuple(complex(z) for z in self.zeros)
        if any(abs(z) >= 1 for z in zs):
            raise ParameterOutOfRange("Blaschke zeros must lie in the open disk")
        fac = complex(self.unimodular_factor)
        if abs(abs(fac) - 1) > 1e-9:
            raise ParameterOutOfRange(f"|factor| = {abs(fac)} is not 1")
        object.__setattr__(self, "zeros", zs)
        object.__setattr__(self, "unimodular_factor", fac / abs(fac))

    def values(self, z):
        z = np.asarray(z)
        out = np.full(z.shape, self.unimodular_factor, dtype=np.result_type(z.dtype, np.complex128))
        for zk in self.zeros:
            out = out * (z - zk) / (1 - np.conj(zk) * z)
        return out

    def series(self, order=DEFAULT_ORDER):
        out = PowerSeries.constant(self.unimodular_factor, order)
        for zk in self.zeros:
            # (z - zk) * sum_n conj(zk)^n z^n
            geom = np.conj(zk) ** np.arange(order + 1)
            factor = mul(PowerSeries.from_coeffs([-zk, 1.0], order), PowerSeries(geom, order))
            out = mul(out, factor)
        return out

    def to_json(self):
        return {
            "kind": "blaschke",
            "zeros": [_pair(z) for z in self.zeros],
            "unimodular_factor": _pair(self.unimodular_factor),
        }


@dataclass(frozen=True)
class ConvexMix(SchwarzSpec):
    weights: tuple
    parts: tuple
    kind = "mix"

    def __post_init__(self):
        w = tuple(float(x) for x in self.weights)
        parts = tuple(self.parts)
        if len(w) != len(parts) or not parts:
            raise ParameterOutOfRange("weights and parts must have equal, nonzero length")
        if any(x < 0 for x in w) or abs(sum(w) - 1) > 1e-9:
            raise ParameterOutOfRange("weights must be nonnegative and sum to 1")
        if not all(isinstance(p, SchwarzSpec) for p in parts):
            raise ParameterOutOfRange("parts must be SchwarzSpec instances")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "parts", parts)

    def values(self, z):
        return sum(wk * p.values(z) for wk, p in zip(self.weights, self.parts))

    def series(self, order=DEFAULT_ORDER):
        out = PowerSeries.zero(order)
        for wk, p in zip(self.weights, self.parts):
            out = out + p.series(order) * wk
        return out

    def to_json(self):
        return {"kind": "mix", "weights": list(self.weights), "parts": [p.to_json() for p in self.parts]}


def schwarz_from_json(data: dict) -> SchwarzSpec:
    if not isinstance(data, dict) or "kind" not in data:
        raise ParameterOutOfRange("SchwarzSpec JSON needs a 'kind'")
    kind = data["kind"]
    allowed = {
        "constant": {"kind", "u"},
        "monomial": {"kind", "u", "m"},
        "blaschke": {"kind", "zeros", "unimodular_factor"},
        "mix": {"kind", "weights", "parts"},
    }
    if kind not in allowed:
        raise ParameterOutOfRange(f"unknown SchwarzSpec kind {kind!r}")
    extra = set(data) - allowed[kind]
    if extra:
        raise ParameterOutOfRange(f"unknown keys for {kind}: {sorted(extra)}")
    if kind == "constant":
        return Constant(_as_complex(data["u"]))
    if kind == "monomial":
        return Monomial(_as_complex(data["u"]), data["m"])
    if kind == "blaschke":
        return BlaschkeProduct(
            tuple(_as_complex(z) for z in data.get("zeros", [])),
            _as_complex(data.get("unimodular_factor", [1.0, 0.0])),
        )
    return ConvexMix(tuple(data["weights"]), tuple(schwarz_from_json(p) for p in data["parts"]))


def evaluate_omega(omega: SchwarzSpec, z):
    """Pointwise value of w at z (scalar or array) in the open disk."""
    arr = np.asarray(z)
    if np.any(np.abs(arr) >= 1):
        raise OutsideDisk("w is only defined on the open unit disk")
    out = omega.values(arr)
    return complex(out) if np.ndim(z) == 0 else out


def omega_series(omega: SchwarzSpec, order: int = DEFAULT_ORDER) -> PowerSeries:
    return omega.series(order)


@dataclass(frozen=True)
class BoundedAnalytic:
    """An analytic function bounded by 1 on the disk, with a series view."""

    evaluator: Callable
    series: Callable[[int], PowerSeries]
    description: str = field(default="", compare=False)

    def __call__(self, z):
        return self.evaluator(z)

    def schwarz_l2(self, order: int = DEFAULT_ORDER) -> float:
        return float(np.sum(np.abs(self.series(order).coeffs) ** 2))


def induced_capital_omega(omega: SchwarzSpec, a: complex, order: int = DEFAULT_ORDER) -> BoundedAnalytic:
    a = complex(a)
    if abs(a) >= 1:
        raise ParameterOutOfRange(f"|a| = {abs(a)} must be < 1")
    abar = np.conj(a)

    def evaluator(z):
        z = np.asarray(z)
        w = z * z * omega.values(z)
        out = (a + w) / (1 + abar * w)
        return complex(out) if out.ndim == 0 else out

    def series(n: int = order) -> PowerSeries:
        w = omega.series(n).shift(2)
        num = w + a
        den = w * abar + 1.0
        return mul(num, reciprocal(den))

    return BoundedAnalytic(evaluator, series, f"Mobius(a={a}) of z^2*{omega!r}")
