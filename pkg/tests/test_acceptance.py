"""Acceptance criteria, one test per criterion.

Run with ``pytest tests/test_acceptance.py``; the terminal summary lists a
PASS/FAIL line for each criterion. Expected values are either closed forms
evaluated here or come from evaluation paths independent of the one under
test (quadrature vs. series, Schwarz-module series vs. quotient series,
Cauchy/DFT vs. recurrences).
"""
import math
import time

import numpy as np
import pytest

from meroclass.errors import NoWitness
from meroclass.explore import OptimizeConfig, problem2_maximize
from meroclass.functions import ExtremalF0, Identity, Koebe, Mobius, Represented, catalog
from meroclass.schwarz import induced_capital_omega
from meroclass.series import evaluate
from meroclass.uclass import (
    ClassParams,
    a2_bound,
    b_coefficients,
    classify,
    construct,
    critical_point_witness,
    extremal_f0,
    extremal_f0_spec,
    extremal_fk,
    extremal_fk_spec,
    induced_omega_of,
    l2_bound,
    l2_weighted_sum,
    quotient_from_spec,
)
from meroclass.verify import SamplingGrid, membership, oracle_cross_check


@pytest.mark.criterion(1, "b_k of f_k attains lambda/(k-1)(1-|a|^2)")
def test_criterion_01_bk_sharpness():
    p = ClassParams(1.0, 1.0)
    for k in range(2, 9):
        b = b_coefficients(extremal_fk(k, p, order=128), 128)
        assert abs(abs(b[k - 1]) - 1.0 / (k - 1)) <= 1e-9
    b3 = b_coefficients(extremal_fk(3, ClassParams(0.6, 0.8), order=128), 3)[2]
    assert abs(abs(b3) - 0.26666666666666666) <= 1e-9


@pytest.mark.criterion(2, "weighted l2 sum of f_2 reaches 0.32 at K=200")
def test_criterion_02_l2_sharpness():
    p = ClassParams(0.6, 0.8)
    a = (1 - 0.8) / 0.6
    independent = 0.6**2 * (1 - a * a)
    assert abs(l2_bound(p) - independent) <= 1e-15
    s = l2_weighted_sum(extremal_fk(2, p, order=200), 200)
    assert abs(s - 0.32) <= 1e-6
    assert abs(s - independent) <= 1e-6


@pytest.mark.criterion(3, "critical-point witness exactly when |mu| < lambda")
def test_criterion_03_witness():
    w = critical_point_witness(ClassParams(0.9, 0.5))
    a = 5 / 9
    z1 = 1 / math.sqrt(0.9 * (1 - a * a) + a)
    assert abs(abs(w.z) - z1) <= 1e-14
    assert abs(abs(w.z) - 0.9215) <= 1e-4
    assert w.residual <= 1e-8

    lams = np.linspace(0.05, 1.0, 20)
    found = {"witness": 0, "none": 0}
    for lam in lams:
        for j in range(20):
            # spiral through the admissible disk |a| < 1
            a = (0.02 + 0.95 * j / 19) * np.exp(2j * np.pi * (0.137 + 0.61803398875 * j))
            params = ClassParams(float(lam), 1 - lam * a)
            if abs(params.mu) >= lam:
                with pytest.raises(NoWitness):
                    critical_point_witness(params)
                found["none"] += 1
            else:
                wit = critical_point_witness(params)
                assert abs(wit.z) < 1 and wit.residual <= 1e-8
                found["witness"] += 1
    assert found["none"] > 100 and found["witness"] > 20


@pytest.mark.criterion(4, "A_2 bound and the extremal f_0")
def test_criterion_04_a2():
    assert a2_bound(ClassParams(1, 1), 1.0) == 2.0
    for lam, mu, p in [(0.8, 0.9, 0.7), (1.0, 1.0, 0.5), (0.6, 0.9, 1.0)]:
        params = ClassParams(lam, mu)
        bound = a2_bound(params, p)
        f0 = extremal_f0(params, p)
        assert abs(abs(f0.coeffs[2]) - bound) <= 1e-9
        # the quotient vanishes at z = p: closed form, quadrature and series
        g = ExtremalF0(params, p)
        for value in (
            g.quotient(np.array([p]))[0],
            g.as_represented().quotient(np.array([p]))[0],
            evaluate(quotient_from_spec(extremal_f0_spec(params, p, 400)), p),
        ):
            assert abs(value) <= 1e-10


@pytest.mark.criterion(5, "random constructions satisfy the defining inequality")
def test_criterion_05_membership(random_specs):
    grid = SamplingGrid((0.5, 0.9, 0.99, 0.999))
    for spec in random_specs:
        rep = membership(spec, spec.params, grid)
        assert rep.verdict == "member-supported"
        assert rep.sup_estimate < spec.params.lam - 1e-6
        a = spec.params.a
        c = induced_omega_of(construct(spec), spec.params).coeffs
        assert abs(c[0] - a) <= 1e-10 and abs(c[1]) <= 1e-10
        assert np.all(np.abs(c[1:]) <= 1 - abs(a) ** 2 + 1e-9)
        assert np.sum(np.abs(c) ** 2) <= 1 + 1e-9


@pytest.mark.criterion(6, "b_k (1 - k) = lambda c_k for k = 2..32")
def test_criterion_06_identity(random_specs):
    k = np.arange(2, 33)
    for spec in random_specs:
        b = b_coefficients(construct(spec), 32)
        # c_k from the Moebius recombination in the Schwarz module
        c = induced_capital_omega(spec.omega, spec.params.a, 32).series().coeffs
        assert np.abs(b[1:] * (1 - k) - spec.params.lam * c[2:]).max() <= 1e-10


def _catalog():
    out = [Identity(), Mobius(0.5), Mobius(-0.9 + 0.3j), Koebe()]
    for params in (ClassParams(1, 1), ClassParams(0.8, 0.9 + 0.1j)):
        out += [Represented(extremal_fk_spec(k, params, c)) for k in range(2, 6) for c in (0, 0.5 - 0.5j)]
    for lam, mu, p in [(0.8, 0.9, 0.7), (1.0, 1.0, 0.5), (0.6, 0.9, 1.0)]:
        out.append(ExtremalF0(ClassParams(lam, mu), p))
    out.append(catalog("slit", ClassParams(0.75, 0.75), p=0.5))
    return out


@pytest.mark.criterion(7, "series pipeline agrees with the Cauchy/DFT oracle")
def test_criterion_07_oracle(random_specs):
    for fn in _catalog():
        assert oracle_cross_check(fn, r=0.5, N=32) <= 1e-8
    for spec in random_specs:
        assert oracle_cross_check(spec, r=0.5, N=32) <= 1e-8


def _theorem_label(lam, mu):
    local = abs(mu) >= lam
    guaranteed = lam <= 0.5 or abs(1 - mu) <= 1 - lam
    if not local:
        return "contains_non_locally_univalent"
    return "univalence_guaranteed" if guaranteed else "open_region"


def _region_grid():
    """1000 (lambda, mu, expected) triples with exact boundary cases."""
    cells = []
    for lam in np.round(np.linspace(0.1, 1.0, 10), 12):
        row = []
        if lam > 0.5:
            # |1 - mu| = 1 - lambda: guaranteed (closed side)
            for t in np.linspace(0, 2 * np.pi, 20, endpoint=False):
                row.append((lam, 1 - (1 - lam) * np.exp(1j * t), "univalence_guaranteed"))
            # |mu| = lambda: locally univalent; open unless mu = lambda
            phimax = math.acos(1 / (2 * lam))
            for t in np.linspace(-phimax, phimax, 22)[1:-1]:
                row.append((lam, lam * np.exp(1j * t), None))
        if lam == 1.0:
            row = row[:1] + row[20:]  # the |1 - mu| = 0 circle is the single point mu = 1
        n_rho = 8
        n_rest = 100 - len(row)
        n_theta = math.ceil(n_rest / n_rho)
        for i in range(n_rest):
            rho = 0.05 + 0.9 * (i % n_rho) / (n_rho - 1)
            theta = 2 * np.pi * (i // n_rho + 0.5) / n_theta
            row.append((lam, 1 - lam * rho * np.exp(1j * theta), None))
        cells += row
    out = []
    for lam, mu, expected in cells:
        if expected is None:
            if abs(abs(mu) - lam) <= 1e-12:
                expected = "univalence_guaranteed" if abs(abs(1 - mu) - (1 - lam)) <= 1e-12 else "open_region"
            else:
                expected = _theorem_label(lam, mu)
        out.append((float(lam), complex(mu), expected))
    return out


@pytest.mark.criterion(8, "classify matches the region theorems on 1000 points")
def test_criterion_08_classify():
    cells = _region_grid()
    assert len(cells) == 1000
    labels = {"univalence_guaranteed": 0, "contains_non_locally_univalent": 0, "open_region": 0}
    for lam, mu, expected in cells:
        params = ClassParams(lam, mu)
        v = classify(params)
        assert v.label == expected, (lam, mu)
        labels[expected] += 1
        if v.contains_non_locally_univalent:
            w = critical_point_witness(params)
            assert abs(w.z) < 1 and w.residual <= 1e-8
        else:
            with pytest.raises(NoWitness):
                critical_point_witness(params)
    assert min(labels.values()) >= 50


@pytest.mark.criterion(9, "problem-2 optimizer reproduces the known maxima")
def test_criterion_09_optimizer():
    t0 = time.perf_counter()
    rep = problem2_maximize(ClassParams(1.0, 1.0), 1.0, OptimizeConfig("constant", starts=16))
    assert abs(rep.best_value - 2.0) <= 1e-6
    for lam, mu, p in [(0.8, 0.9, 0.7), (0.6, 0.9, 1.0), (1.0, 0.3, 0.8), (0.5, 1.0, 0.4)]:
        params = ClassParams(lam, mu)
        rep = problem2_maximize(params, p, OptimizeConfig("constant", starts=16))
        assert rep.a2_lower_bound >= a2_bound(params, p) - 1e-6
        assert abs(rep.argmax_omega.u - (-1)) <= 1e-3
    assert time.perf_counter() - t0 <= 60


@pytest.mark.criterion(10, "Koebe profile |U - 1| = |z|^2 and refutation at lambda = 0.5")
def test_criterion_10_koebe():
    koebe_closed = Koebe()
    # Koebe as f_2 of U(1, 1) with c = -2, evaluated by quadrature
    koebe_quad = Represented(extremal_fk_spec(2, ClassParams(1, 1), -2.0))
    for r in (0.5, 0.9, 0.99):
        z = r * np.exp(2j * np.pi * (np.arange(720) + 0.25) / 720)
        for fn in (koebe_closed, koebe_quad):
            assert np.abs(np.abs(fn.u(z) - 1) - r * r).max() <= 1e-10
    rep = membership(koebe_closed, ClassParams(0.5, 1.0), SamplingGrid((0.5, 0.9, 0.99)))
    assert rep.verdict == "refuted"
    z = complex(*rep.witness["z"])
    assert abs(z) < 1
    assert abs(koebe_closed.u(np.array([z]))[0] - 1) >= 0.5
    assert abs(abs(z) ** 2 - abs(complex(*rep.witness["value"]) - 1)) <= 1e-10


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q"]))
