import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from meroclass.errors import CenterMismatch, RadiusTooLarge
from meroclass.explore import random_omega
from meroclass.functions import Identity, Koebe, Mobius, PolynomialFunction, Represented, catalog
from meroclass.schwarz import Constant
from meroclass.series import PowerSeries
from meroclass.uclass import ClassParams, ConstructionSpec, classify, critical_point_witness, extremal_fk_spec
from meroclass.verify import (
    SamplingGrid,
    local_univalence_check,
    membership,
    oracle_cross_check,
    subordination_check,
    univalence_grid,
)


def test_grid_validation_and_json():
    g = SamplingGrid((0.5, 0.9), 128, seed=4, extra_points=(0.3j,))
    assert SamplingGrid.from_json(g.to_json()) == g
    assert g.points().shape == (257,)
    assert np.allclose(np.abs(g.rings()[1]), 0.9)
    for bad in [dict(radii=(0.9, 0.5)), dict(radii=(0.5, 1.0)), dict(radii=(0.5,), angles_per_ring=32)]:
        with pytest.raises(ValueError):
            SamplingGrid(**bad)
    with pytest.raises(ValueError):
        SamplingGrid.from_json({"radii": [0.5], "bogus": 1})


def test_grid_jitter_is_seeded():
    a, b, c = SamplingGrid(seed=1), SamplingGrid(seed=1), SamplingGrid(seed=2)
    assert np.array_equal(a.points(), b.points())
    assert not np.array_equal(a.points(), c.points())


# ------------------------------------------------------------ membership
def test_membership_examples():
    rep = membership(Identity(), ClassParams(0.5, 1))
    assert rep.sup_estimate == 0 and rep.verdict == "member-supported"
    grid = SamplingGrid((0.5, 0.9, 0.99))
    rep = membership(Koebe(), ClassParams(1, 1), grid)
    assert abs(rep.sup_estimate - 0.9801) <= 1e-9
    rep = membership(Koebe(), ClassParams(0.5, 1), grid)
    assert rep.verdict == "refuted"
    z = complex(*rep.witness["z"])
    assert abs(abs(z) - 0.99) < 1e-12
    assert abs(Koebe().u(np.array([z]))[0] - 1) >= 0.5


def test_membership_monotone_in_outer_radius(random_specs):
    radii = (0.3, 0.5, 0.7, 0.9, 0.99)
    for spec in random_specs[:20]:
        sups = [membership(spec, spec.params, SamplingGrid(radii[:k], 256)).sup_estimate for k in range(1, 6)]
        assert np.all(np.diff(sups) >= 0)
        rep = membership(spec, spec.params, SamplingGrid(radii, 1024))
        # maximum principle, up to the sampling error of each ring
        assert np.all(np.diff(rep.ring_sups) >= -1e-3)


def test_membership_refutes_outside_class():
    # the omega = 1 member of U(0.8, 0.9) is not in U(0.3, 0.9)
    spec = ConstructionSpec(ClassParams(0.8, 0.9), 0.5, Constant(1))
    rep = membership(spec, ClassParams(0.3, 0.9))
    assert rep.verdict == "refuted"
    z = complex(*rep.witness["z"])
    assert abs(Represented(spec).u(np.array([z]))[0] - 0.9) >= 0.3


# ------------------------------------------------------ local univalence
def test_local_univalence_examples():
    rep = local_univalence_check(Identity())
    assert rep.min_abs_derivative == pytest.approx(1) and rep.verdict == "consistent"
    params = ClassParams(0.9, 0.5)
    w = critical_point_witness(params)
    grid = SamplingGrid(extra_points=(w.z,))
    rep = local_univalence_check(Represented(w.spec), grid)
    assert rep.min_abs_derivative <= 1e-8
    assert rep.verdict == "refuted" and rep.critical_points_inside == 2
    wz = complex(*rep.witness["z"])
    assert abs(Represented(w.spec).df(np.array([wz]))[0]) <= 1e-8
    rep = local_univalence_check(Mobius(0.5), SamplingGrid((0.99,), 2048))
    assert rep.min_abs_derivative == pytest.approx(1 / 1.495**2, abs=1e-4)


def test_local_univalence_polynomial():
    f = PolynomialFunction(PowerSeries.from_coeffs([0, 1, 2]))
    rep = local_univalence_check(f, SamplingGrid((0.5, 0.9)))
    assert rep.verdict == "refuted"
    assert abs(complex(*rep.witness["z"]) + 0.25) < 1e-10


# ------------------------------------------------------------- univalence
def test_univalence_examples():
    assert univalence_grid(Identity()).verdict == "consistent-with-univalence"
    assert univalence_grid(Koebe(), SamplingGrid((0.5, 0.9, 0.99))).verdict == "consistent-with-univalence"
    f = PolynomialFunction(PowerSeries.from_coeffs([0, 1, 2]))
    rep = univalence_grid(f, SamplingGrid((0.2, 0.3, 0.5)))
    assert rep.verdict == "refuted"
    wit = rep.witness
    z1, z2 = complex(*wit["z1"]), complex(*wit["z2"])
    assert abs(z1 - z2) > 1e-6
    v = f.f(np.array([z1, z2]))
    assert abs(v[0] - v[1]) <= 1e-9 * (1 + abs(v[0]))


def test_univalence_refutes_non_locally_univalent_member():
    w = critical_point_witness(ClassParams(0.9, 0.5))
    rep = univalence_grid(Represented(w.spec))
    assert rep.verdict == "refuted"
    fn = Represented(w.spec)
    z1, z2 = complex(*rep.witness["z1"]), complex(*rep.witness["z2"])
    v = fn.f(np.array([z1, z2]))
    assert abs(z1 - z2) > 1e-6 and abs(v[0] - v[1]) <= 1e-8 * (1 + abs(v[0]))


@settings(max_examples=25, deadline=None)
@given(st.floats(0, 0.999), st.floats(0, 2 * np.pi))
def test_mobius_never_refuted(r, t):
    rep = univalence_grid(Mobius(r * np.exp(1j * t)), SamplingGrid(angles_per_ring=256))
    assert rep.verdict == "consistent-with-univalence"


def test_guaranteed_region_passes_checks():
    rng = np.random.default_rng(11)
    for lam, mu in [(0.4, 1.2), (0.9, 0.95 + 0.02j), (0.3, 0.8 - 0.1j)]:
        params = ClassParams(lam, mu)
        assert classify(params).univalence_guaranteed
        for _ in range(3):
            spec = ConstructionSpec(params, 0.0, random_omega(rng))
            grid = SamplingGrid((0.5, 0.9, 0.99), 256)
            assert univalence_grid(spec, grid).verdict == "consistent-with-univalence"
            assert local_univalence_check(spec, grid).verdict == "consistent"


# ---------------------------------------------------------- subordination
def h_convex(z):
    return z + 0.4 * np.asarray(z) ** 2


def test_subordination_examples():
    radii = (0.5, 0.9, 0.99)
    assert subordination_check(h_convex, h_convex, radii).verdict == "supported"
    assert subordination_check(lambda z: h_convex(np.asarray(z) ** 2), h_convex, radii).verdict == "supported"
    rep = subordination_check(lambda z: 2 * h_convex(z), h_convex, radii)
    assert rep.verdict == "refuted" and rep.witness["r"] == 0.5
    # the witness value lies outside the image curve of h on that circle
    from meroclass import kernels
    from meroclass.verify import circle

    poly = h_convex(circle(rep.witness["r"]))
    w = complex(*rep.witness["value"])
    assert round(float(kernels.winding_numbers(poly, np.ones_like(poly), np.array([w]))[0])) == 0
    with pytest.raises(CenterMismatch):
        subordination_check(lambda z: h_convex(z) + 1e-6, h_convex, radii)


def test_subordination_random_schwarz_factors():
    rng = np.random.default_rng(5)
    for _ in range(50):
        alpha = 0.5 * np.sqrt(rng.random()) * np.exp(2j * np.pi * rng.random())
        b = 0.9 * rng.random() * np.exp(2j * np.pi * rng.random())
        if rng.random() < 0.5:
            h = lambda z, al=alpha: z + al * np.asarray(z) ** 2  # noqa: E731
        else:
            h = lambda z, bb=b: np.asarray(z) / (1 - bb * np.asarray(z))  # noqa: E731
        om = random_omega(rng)
        g = lambda z, hh=h, o=om: hh(np.asarray(z) * o.values(np.asarray(z)))  # noqa: E731
        rep = subordination_check(g, h, (0.5, 0.9, 0.99), n_targets=256)
        assert rep.verdict == "supported", rep.to_json()


# ----------------------------------------------------------------- oracle
def test_oracle_examples():
    spec = ConstructionSpec(ClassParams(0.8, 0.9), 0.7 - 0.2j, Constant(0))
    assert oracle_cross_check(spec, r=0.9) <= 1e-12
    assert oracle_cross_check(extremal_fk_spec(4, ClassParams(0.8, 0.9)), r=0.6) <= 1e-8
    with pytest.raises(RadiusTooLarge):
        oracle_cross_check(Koebe(), r=1.0)
    with pytest.raises(RadiusTooLarge):
        # z/f_0 vanishes at p = 0.4
        oracle_cross_check(catalog("f0", ClassParams(0.8, 0.9), p=0.4), r=0.5, target="f")
    assert oracle_cross_check(catalog("f0", ClassParams(0.8, 0.9), p=0.7), r=0.5, target="f") <= 1e-8


CATALOG = [("identity", {}), ("mobius", {"c": 0.7 - 0.3j}), ("koebe", {}), ("fk", {"k": 3, "c": 0.5}), ("f0", {"p": 0.7}), ("slit", {"p": 0.6})]


@pytest.mark.parametrize("name, kw", CATALOG)
@pytest.mark.parametrize("r, N", [(0.6, 64), (0.3, 64), (0.5, 32), (0.2, 8)])
def test_oracle_catalog(name, kw, r, N):
    params = ClassParams(0.8, 0.9)
    assert oracle_cross_check(catalog(name, params, **kw), r=r, N=N) <= 1e-8


def test_oracle_precision_paths_agree():
    spec = extremal_fk_spec(3, ClassParams(0.7, 0.8 + 0.2j), 0.4)
    a = oracle_cross_check(spec, 0.6, 24, precision="extended")
    b = oracle_cross_check(spec, 0.6, 24, precision="multi")
    assert a <= 1e-10 and b <= 1e-14
