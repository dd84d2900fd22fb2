import math

import numpy as np
import pytest

from _gen import random_data, random_points
from qhkit import (
    INFINITY,
    CircleMeasure,
    DataTriple,
    DiskData,
    DomainError,
    cauchy_transform,
    cayley,
    dirac,
    eval_data,
    from_disk,
    identity_check,
    inverse_cayley,
    lebesgue_tilde,
    to_disk,
)
from qhkit.disk import angle_of, chart_point


def _disk_points(rng, n):
    r = np.sqrt(rng.uniform(0, 0.999, n))
    return r * np.exp(2j * math.pi * rng.uniform(size=n))


def test_cayley_special_points():
    assert cayley(INFINITY) == -1j
    assert inverse_cayley(INFINITY) == 1
    assert cayley(0) == pytest.approx(1j)
    with pytest.raises(DomainError):
        cayley(1)
    with pytest.raises(DomainError):
        inverse_cayley(-1j)


def test_mobius_round_trip(rng):
    zeta = _disk_points(rng, 1000)
    xi = cayley(zeta)
    assert np.all(xi.imag > 0)
    assert np.allclose(inverse_cayley(xi), zeta, atol=1e-12)
    w = random_points(rng, 1000)
    assert np.allclose(cayley(inverse_cayley(w)), w, rtol=1e-12)
    t = rng.normal(0, 10, 1000)
    assert np.max(np.abs(np.abs(inverse_cayley(t)) - 1)) < 1e-14


def test_angle_chart_inverse(rng):
    s = rng.uniform(0.01, 2 * math.pi - 0.01, 50)
    assert np.allclose(angle_of(chart_point(s)), s)
    with pytest.raises(DomainError):
        chart_point(0.0)


def test_cauchy_transform_examples():
    sigma = CircleMeasure.from_sigma_atoms([(-1, 1)])
    assert cauchy_transform(sigma, 0.5) == pytest.approx(2 / 3)
    assert cauchy_transform(sigma, INFINITY) == 0
    assert cauchy_transform(sigma, 0) == pytest.approx(1)
    with pytest.raises(DomainError):
        cauchy_transform(sigma, 1j)


def test_cauchy_exact_vs_quadrature(rng):
    for _ in range(4):
        E = to_disk(random_data(rng))
        tau = _disk_points(rng, 10) * 0.9
        a = cauchy_transform(E.sigma, tau)
        b = cauchy_transform(E.sigma, tau, method="quadrature")
        assert np.allclose(a, b, atol=1e-8)


def test_to_disk_examples(ex54):
    E = to_disk(DataTriple(0, 1))
    assert E.c == pytest.approx(-1j) and E.sigma.atom_at_1 == 2 and E.sigma.chart.is_empty
    E = to_disk(DataTriple(3 - 1j))
    assert E.c == 3 - 1j and E.sigma.is_zero()
    E = to_disk(DataTriple(0, 0, dirac(0, math.pi)))
    assert E.c == pytest.approx(eval_data(DataTriple(0, 0, dirac(0, math.pi)), -1j))
    ((s, w),) = E.sigma.atoms
    assert s == pytest.approx(math.pi) and w == pytest.approx(-2)
    assert abs(to_disk(ex54).c) < 1e-12


def test_from_disk_examples():
    D = from_disk(DiskData(2 + 1j, CircleMeasure()))
    assert (D.a, D.b) == (2 + 1j, 0) and D.measure.is_empty
    D = from_disk(DiskData(-1j, CircleMeasure(2)))
    assert D.a == pytest.approx(0) and D.b == pytest.approx(1) and D.measure.is_empty


def test_round_trips(rng):
    for _ in range(10):
        D = random_data(rng)
        back = from_disk(to_disk(D))
        assert abs(back.a - D.a) <= 1e-8 and abs(back.b - D.b) <= 1e-8
        # compare measures through test integrals
        zs = random_points(rng, 20)
        assert np.allclose(back.measure.stieltjes(zs), D.measure.stieltjes(zs), atol=1e-8)
        E = to_disk(D)
        E2 = to_disk(from_disk(E))
        assert abs(E2.c - E.c) <= 1e-8 and abs(E2.sigma.atom_at_1 - E.sigma.atom_at_1) <= 1e-8


def test_c_is_value_at_minus_i(rng):
    for _ in range(10):
        D = random_data(rng)
        assert to_disk(D).c == pytest.approx(eval_data(D, -1j), abs=1e-10)


def test_identity_fixtures(ex54, lam):
    for D in (lam, ex54, DataTriple(0, 1)):
        assert identity_check(D).residual <= 1e-8
    assert identity_check(DataTriple(1)).residual <= 1e-15
    assert identity_check(lam, method="quadrature").residual <= 1e-8


def test_sigma_mass_is_transform_at_zero(lam):
    E = to_disk(lam)
    assert E.sigma.sigma_mass() == pytest.approx(cauchy_transform(E.sigma, 0))
