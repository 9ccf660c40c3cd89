"""Numerical experiments on the open questions: the maximum defining the
implicit a_2 bound, sweeps over (lambda, mu), and subordination scans.

All results are evidence or lower bounds, never proofs.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize
from scipy.stats import qmc

from .errors import MeroclassError, ParameterOutOfRange
from .functions import ExtremalF0, Represented
from .schwarz import BlaschkeProduct, Constant, ConvexMix, Monomial, SchwarzSpec, _pair
from .uclass import (
    ClassParams,
    ConstructionSpec,
    a2_bound,
    bk_bound,
    classify,
    critical_point_witness,
    l2_bound,
)
from .verify import SamplingGrid, circle, local_univalence_check, subordination_check, univalence_grid
from . import kernels

FAMILIES = ("constant", "monomial", "blaschke", "mix")
MAX_BLASCHKE_RADIUS = 0.999


# ----------------------------------------------------------------- sampling
def random_omega(rng: np.random.Generator, kind: str | None = None, depth: int = 0) -> SchwarzSpec:
    kind = kind or FAMILIES[int(rng.integers(len(FAMILIES)))]
    if depth and kind == "mix":
        kind = "constant"

    def disk_point(radius=1.0):
        return radius * math.sqrt(rng.random()) * complex(math.cos(t := 2 * math.pi * rng.random()), math.sin(t))

    if kind == "constant":
        return Constant(disk_point())
    if kind == "monomial":
        return Monomial(disk_point(), int(rng.integers(0, 7)))
    if kind == "blaschke":
        zeros = tuple(disk_point(0.95) for _ in range(int(rng.integers(1, 4))))
        t = 2 * math.pi * rng.random()
        return BlaschkeProduct(zeros, complex(math.cos(t), math.sin(t)))
    n = int(rng.integers(2, 4))
    weights = rng.dirichlet(np.ones(n))
    weights = weights / weights.sum()
    return ConvexMix(tuple(weights), tuple(random_omega(rng, None, depth + 1) for _ in range(n)))


def random_params(rng: np.random.Generator, max_abs_a: float = 0.9) -> ClassParams:
    lam = float(rng.uniform(0.1, 1.0))
    r = max_abs_a * math.sqrt(rng.random())
    t = 2 * math.pi * rng.random()
    a = r * complex(math.cos(t), math.sin(t))
    return ClassParams(lam, 1 - lam * a)


def random_spec(
    rng: np.random.Generator,
    params: ClassParams | None = None,
    order: int = 128,
    c_max: float = 3.0,
) -> ConstructionSpec:
    """Uniform family kind, parameters uniform in their admissible ranges,
    free constant c uniform in |c| <= c_max."""
    params = params or random_params(rng)
    omega = random_omega(rng)
    r = c_max * math.sqrt(rng.random())
    t = 2 * math.pi * rng.random()
    return ConstructionSpec(params, r * complex(math.cos(t), math.sin(t)), omega, order)


# ------------------------------------------------------------------ problem 2
def problem2_objective(params: ClassParams, p: float, omega: SchwarzSpec, z: complex) -> float:
    """|1 - lambda z int_0^z integrand|, with |z| = p."""
    z = complex(z)
    if abs(abs(z) - p) > 1e-9 * max(1.0, p):
        raise ParameterOutOfRange(f"|z| = {abs(z)} must equal p = {p}")
    spec = ConstructionSpec(params, 0.0, omega)
    integral = complex(spec.integral(np.array([z]))[0])
    return abs(1 - params.lam * z * integral)


@dataclass
class OptimizeConfig:
    family: str = "constant"
    degree: int = 1
    starts: int = 16
    max_iters: int = 2000
    tolerance: float = 1e-10
    seed: int = 0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ParameterOutOfRange(f"family must be one of {FAMILIES}")
        if self.starts < 1 or self.tolerance <= 0 or self.degree < 0:
            raise ParameterOutOfRange("need starts >= 1, tolerance > 0, degree >= 0")
        if self.family in ("blaschke", "mix") and self.degree < 1:
            raise ParameterOutOfRange(f"{self.family} family needs degree >= 1")

    def to_json(self) -> dict:
        return {
            "family": self.family,
            "degree": self.degree,
            "starts": self.starts,
            "max_iters": self.max_iters,
            "tolerance": self.tolerance,
            "seed": self.seed,
        }


def _unit(t):
    return complex(math.cos(t), math.sin(t))


class _Family:
    """Maps a real parameter vector (last entry: angle of z) to (omega, z).
    Out-of-range values are projected back into admissible ranges."""

    def __init__(self, family: str, degree: int):
        self.family = family
        self.degree = degree
        if family in ("constant", "monomial"):
            self.dim = 2
        elif family == "blaschke":
            self.dim = 2 * degree + 1
        else:
            self.dim = 3 * degree
        self.dim += 1

    def box(self):
        lo, hi = [], []
        if self.family in ("constant", "monomial"):
            lo, hi = [0, 0], [1, 2 * math.pi]
        elif self.family == "blaschke":
            for _ in range(self.degree):
                lo += [0, 0]
                hi += [MAX_BLASCHKE_RADIUS, 2 * math.pi]
            lo.append(0)
            hi.append(2 * math.pi)
        else:
            lo = [0] * self.degree + [0, 0] * self.degree
            hi = [1] * self.degree + [1, 2 * math.pi] * self.degree
        return np.array(lo + [0.0]), np.array(hi + [2 * math.pi])

    def decode(self, x) -> SchwarzSpec:
        x = np.asarray(x, dtype=float)
        if self.family == "constant":
            return Constant(min(max(x[0], 0), 1) * _unit(x[1]))
        if self.family == "monomial":
            return Monomial(min(max(x[0], 0), 1) * _unit(x[1]), self.degree)
        if self.family == "blaschke":
            zeros = tuple(
                min(max(x[2 * j], 0), MAX_BLASCHKE_RADIUS) * _unit(x[2 * j + 1]) for j in range(self.degree)
            )
            return BlaschkeProduct(zeros, _unit(x[2 * self.degree]))
        d = self.degree
        w = np.clip(x[:d], 0, None)
        w = w / w.sum() if w.sum() > 0 else np.full(d, 1 / d)
        parts = tuple(
            Monomial(min(max(x[d + 2 * j], 0), 1) * _unit(x[d + 2 * j + 1]), j) for j in range(d)
        )
        return ConvexMix(tuple(w), parts)

    def encode_constant(self, u: complex, phi: float):
        """Parameter vector representing the constant u (families that
        contain constants)."""
        if self.family == "constant":
            return np.array([abs(u), np.angle(u), phi])
        if self.family == "mix":
            x = np.zeros(self.dim)
            x[0] = 1.0
            x[self.degree] = abs(u)
            x[self.degree + 1] = np.angle(u)
            x[-1] = phi
            return x
        if self.family == "monomial" and self.degree == 0:
            return np.array([abs(u), np.angle(u), phi])
        return None


def rotate_omega(omega: SchwarzSpec, phi: float) -> SchwarzSpec:
    """w'(s) = e^{2i phi} w(e^{i phi} s). The objective satisfies
    objective(w, p e^{i phi}) = objective(w', p), so maximizers can be
    reported with z on the positive axis."""
    e = _unit(phi)
    if isinstance(omega, Constant):
        return Constant(omega.u * e**2)
    if isinstance(omega, Monomial):
        return Monomial(omega.u * e ** (2 + omega.m), omega.m)
    if isinstance(omega, BlaschkeProduct):
        zeros = tuple(zk / e for zk in omega.zeros)
        return BlaschkeProduct(zeros, omega.unimodular_factor * e ** (2 + len(zeros)))
    if isinstance(omega, ConvexMix):
        return ConvexMix(omega.weights, tuple(rotate_omega(part, phi) for part in omega.parts))
    raise TypeError(f"cannot rotate {type(omega).__name__}")


@dataclass
class MaxReport:
    best_value: float
    argmax_omega: SchwarzSpec
    argmax_z: complex
    history: list = field(default_factory=list)
    p: float = 1.0
    config: OptimizeConfig | None = None

    @property
    def a2_lower_bound(self) -> float:
        return self.best_value / self.p

    def to_json(self) -> dict:
        return {
            "best_value": self.best_value,
            "a2_lower_bound": self.a2_lower_bound,
            "argmax_omega": self.argmax_omega.to_json(),
            "argmax_z": _pair(self.argmax_z),
            "p": self.p,
            "history": self.history,
            "config": self.config.to_json() if self.config else None,
            "label": "numerical lower bound on the maximum",
        }


def problem2_maximize(params: ClassParams, p: float, config: OptimizeConfig | None = None) -> MaxReport:
    """Multistart Nelder-Mead search for the maximum of the objective over a
    finite-dimensional family of w and the angle of z on |z| = p. Starts come
    from a seeded scrambled Sobol sequence; families containing constants are
    also started from the best constant, so richer families never lose."""
    config = config or OptimizeConfig()
    p = float(p)
    if not 0 < p <= 1:
        raise ParameterOutOfRange("p must lie in (0, 1]")
    fam = _Family(config.family, config.degree)
    lo, hi = fam.box()

    def value(x):
        return problem2_objective(params, p, fam.decode(x), p * _unit(x[-1]))

    sampler = qmc.Sobol(d=fam.dim, scramble=True, seed=config.seed)
    m = 2 ** math.ceil(math.log2(max(config.starts, 1)))
    inits = list(qmc.scale(sampler.random(m), lo, hi)[: config.starts])
    if fam.encode_constant(0, 0) is not None and config.family != "constant":
        sub = problem2_maximize(params, p, OptimizeConfig("constant", 0, config.starts, config.max_iters, config.tolerance, config.seed))
        inits.append(fam.encode_constant(sub.argmax_omega.u, float(np.angle(sub.argmax_z))))

    history = []
    best = (-math.inf, None)
    for x0 in inits:
        res = minimize(
            lambda x: -value(x),
            x0,
            method="Nelder-Mead",
            options={"maxiter": config.max_iters, "xatol": 1e-9, "fatol": config.tolerance, "adaptive": fam.dim > 3},
        )
        v = value(res.x)
        history.append(v)
        if v > best[0]:
            best = (v, res.x)
    x = best[1]
    omega = rotate_omega(fam.decode(x), float(x[-1]))
    return MaxReport(float(best[0]), omega, complex(p), history, p, config)


# -------------------------------------------------------------------- sweeps
@dataclass
class SweepOptions:
    p: float = 1.0
    mc_samples: int = 4
    seed: int = 0
    optimize: OptimizeConfig | None = field(default_factory=lambda: OptimizeConfig(starts=4))
    grid: SamplingGrid = field(default_factory=lambda: SamplingGrid(angles_per_ring=128))
    quantities: tuple = ("classify", "bk_bound", "l2_bound", "a2_bound", "problem2", "univalence_mc")
    jobs: int = 1


def _mc_specs(params: ClassParams, n: int, seed: int):
    """omega = 1 (with c = 0) first, then seeded random members."""
    specs = [ConstructionSpec(params, 0.0, Constant(1.0))] if n >= 1 else []
    rng = np.random.default_rng(seed)
    while len(specs) < n:
        specs.append(random_spec(rng, params))
    return specs


def sweep_row(params: ClassParams, options: SweepOptions, index: int = 0) -> dict:
    row = {"lambda": params.lam, "mu": params.mu, "a": params.a}
    q = set(options.quantities)
    try:
        verdict = classify(params)
        if "classify" in q:
            row["verdict"] = verdict.label
        if "bk_bound" in q:
            row["bk_bound_2"] = bk_bound(2, params)
        if "l2_bound" in q:
            row["l2_bound"] = l2_bound(params)
        if "a2_bound" in q:
            row["a2_bound"] = a2_bound(params, options.p) if params.real_a is not None else None
        if "problem2" in q and options.optimize is not None:
            rep = problem2_maximize(params, options.p, options.optimize)
            row["problem2_lower_bound"] = rep.a2_lower_bound
        if "univalence_mc" in q:
            grid = options.grid
            if verdict.contains_non_locally_univalent:
                z1 = critical_point_witness(params).z
                if abs(z1) >= grid.outer:
                    grid = SamplingGrid(grid.radii + ((1 + abs(z1)) / 2,), grid.angles_per_ring, grid.seed, grid.jitter, grid.extra_points)
            local = univ = 0
            for spec in _mc_specs(params, options.mc_samples, options.seed + index):
                fn = Represented(spec)
                if local_univalence_check(fn, grid).verdict == "refuted":
                    local += 1
                if univalence_grid(fn, grid).verdict == "refuted":
                    univ += 1
            row["mc_samples"] = options.mc_samples
            row["local_univalence_refutations"] = local
            row["univalence_refutations"] = univ
        row["error"] = ""
    except MeroclassError as exc:
        row["error"] = f"{type(exc).__name__}: {exc}"
    return row


def _row_task(args):
    return sweep_row(*args)


def sweep(param_grid, options: SweepOptions | None = None) -> list[dict]:
    """One row per (lambda, mu); per-row errors are recorded, not raised.
    Rows come back in input order whatever the number of jobs."""
    options = options or SweepOptions()
    tasks = [(p, options, i) for i, p in enumerate(param_grid)]
    if options.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=options.jobs) as pool:
            return list(pool.map(_row_task, tasks))
    return [_row_task(t) for t in tasks]


# ------------------------------------------------------------- subordination
def _zero_free(spec: ConstructionSpec, r: float = 0.999) -> bool:
    """z/f has no zeros in |z| <= r, i.e. f is analytic there."""
    fn = Represented(spec)
    ring = circle(r, 1024)
    q = fn.quotient(ring)
    q[-1] = q[0]
    if np.min(np.abs(q)) < 1e-8:
        return False
    return round(float(kernels.winding_numbers(q, np.ones_like(q), np.array([0j]))[0])) == 0


def _injective_on(h, r: float, n_targets: int = 256) -> bool:
    ring = circle(r)
    curve = np.asarray(h(ring), dtype=complex)
    curve[-1] = curve[0]
    inner = []
    for s in (0.25, 0.5, 0.75, 0.95):
        t = 2 * np.pi * (np.arange(n_targets // 4) + 0.5) / (n_targets // 4)
        inner.append(s * r * np.exp(1j * t))
    w = np.asarray(h(np.concatenate(inner)), dtype=complex)
    wind = kernels.winding_numbers(curve, np.ones_like(curve), w)
    return bool(np.all(np.rint(wind) == 1))


def subordination_scan(
    param_grid, n_samples: int = 8, radii=(0.5, 0.9, 0.99), seed: int = 0, c_max: float = 1.0
) -> list[dict]:
    """For each (lambda, mu) with real a in (0, 1): test z/f < z/f0 for f0
    itself and for seeded random members analytic in the disk. Rows carry
    counts of supported / refuted / inconclusive reports (evidence only).

    Only members whose z/f is zero-free on the disk qualify; free constants
    are drawn from |c| <= c_max (most draws with |c| near 3 have a pole)."""
    rows = []
    for i, params in enumerate(param_grid):
        row = {"lambda": params.lam, "mu": params.mu, "a": params.a, "label": "conjecture scan (numerical evidence)"}
        a = params.real_a
        if a is None or a <= 0:
            row["error"] = (
                "requires real a = (1 - mu)/lambda in (0, 1); "
                "the case a = 0 (mu = 1) is already settled in the literature"
            )
            rows.append(row)
            continue
        h = ExtremalF0(params, 1.0).quotient
        reports = []
        try:
            if not all(_injective_on(h, r) for r in radii):
                row["error"] = "majorant z/f0 failed the injectivity check"
                rows.append(row)
                continue
            reports.append(("f0", subordination_check(h, h, radii)))
            rng = np.random.default_rng(seed + i)
            attempts = 0
            while len(reports) < n_samples + 1 and attempts < 20 * max(n_samples, 1):
                attempts += 1
                spec = random_spec(rng, params, c_max=c_max)
                if not _zero_free(spec):
                    continue
                g = Represented(spec).quotient
                reports.append((spec, subordination_check(g, h, radii)))
        except MeroclassError as exc:
            row["error"] = f"{type(exc).__name__}: {exc}"
        counts = {"supported": 0, "refuted": 0, "inconclusive": 0}
        for _, rep in reports:
            counts[rep.verdict] += 1
        row.update(counts)
        row["samples"] = len(reports)
        row.setdefault("error", "")
        row["refutations"] = [
            {"spec": s.to_json() if isinstance(s, ConstructionSpec) else s, "witness": rep.witness}
            for s, rep in reports
            if rep.verdict == "refuted"
        ]
        rows.append(row)
    return rows
