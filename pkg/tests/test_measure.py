import math

import numpy as np
import pytest

from _gen import random_density
from qhkit import (
    Atom,
    ComplexMeasure,
    Density,
    QuadratureConfig,
    QuadratureError,
    ValidationError,
    conjugate_measure,
    dirac,
    lebesgue_tilde,
    linear_combine,
    mass,
    real_imag_parts,
    total_variation,
)
from qhkit.measure import integrate_kernel

EX54 = ComplexMeasure((), (Density.rational((1,), (-1, 2j, 1)),))


def test_total_variation_examples():
    assert total_variation(dirac(0, math.pi)) == pytest.approx(math.pi, rel=1e-12)
    assert total_variation(lebesgue_tilde()) == pytest.approx(math.pi, rel=1e-9)
    assert total_variation(EX54) == pytest.approx(math.pi, rel=1e-9)


def test_mass_examples():
    assert mass(dirac(0, math.pi)) == pytest.approx(math.pi)
    assert abs(mass(EX54)) < 1e-12
    assert mass(lebesgue_tilde()) == pytest.approx(math.pi, rel=1e-12)


def test_integrate_kernel_examples():
    kt = lambda z: (lambda t: (1 + t * z) / (t - z))
    assert integrate_kernel(dirac(0, math.pi), kt(1j)) == pytest.approx(math.pi * 1j)
    assert integrate_kernel(lebesgue_tilde(), kt(1j)) == pytest.approx(math.pi * 1j, abs=1e-9)
    z = -2j
    assert abs(integrate_kernel(EX54, lambda t: (t - 1j) / (t - z))) < 1e-9


def test_linear_combine_examples():
    assert linear_combine(1, dirac(0), -1, dirac(0)).is_empty
    nu = linear_combine(1j, lebesgue_tilde(), 0, ComplexMeasure())
    assert nu.density(np.array([2.0]))[0] == pytest.approx(1j / 5)
    two = ComplexMeasure((Atom(0, 1), Atom(1, 1)))
    out = linear_combine(1, two, 1, dirac(1))
    assert [(a.t, a.w) for a in out.atoms] == [(0, 1), (1, 2)]


def test_conjugate_and_parts():
    assert conjugate_measure(dirac(0, 1j)).atoms[0].w == -1j
    c = conjugate_measure(EX54)
    t = np.linspace(-3, 3, 7)
    assert np.allclose(c.density(t), 1 / (t - 1j) ** 2)
    real = ComplexMeasure((Atom(0.5, -2.0),), (Density.rational((1,), (1, 0, 1)),))
    assert conjugate_measure(real) == real

    re, im = real_imag_parts(lebesgue_tilde(1j))
    assert re.is_empty and np.allclose(im.density(t), 1 / (1 + t * t))
    re, im = real_imag_parts(dirac(0, 1 + 1j))
    assert re.atoms[0].w == 1 and im.atoms[0].w == 1
    re, im = real_imag_parts(EX54)
    assert np.allclose(re.density(t), (t * t - 1) / (1 + t * t) ** 2)
    assert np.allclose(im.density(t), -2 * t / (1 + t * t) ** 2)


def test_validation_errors():
    with pytest.raises(ValidationError):
        Density.rational((1, 1), (1, 0, 1))  # degree gap 1: infinite mass
    with pytest.raises(ValidationError):
        Density.rational((1,), (-1, 0, 1))  # real poles
    with pytest.raises(ValidationError):
        Density.bump(1, 1, (1,))
    with pytest.raises(ValidationError):
        ComplexMeasure((Atom(0, 1), Atom(0, 2)))
    with pytest.raises(ValidationError):
        Atom(math.nan, 1)
    with pytest.raises(ValueError):
        QuadratureConfig(abs_tol=0)


def test_zero_weight_atoms_dropped():
    assert ComplexMeasure((Atom(0, 0),)).is_empty


def test_bump_and_trig_mass():
    b = ComplexMeasure((), (Density.bump(-1, 2, (1, 1j)),))
    assert b.mass() == pytest.approx(3 + 1j * 1.5)
    s = ComplexMeasure((), (Density.trigonometric("sin", 1, (1,), (1, 0, 1)),))
    assert abs(s.mass()) < 1e-12
    c = ComplexMeasure((), (Density.trigonometric("cos", 1, (1,), (1, 0, 1)),))
    assert c.mass() == pytest.approx(math.pi / math.e, rel=1e-8)


def _residue_mass(num, den):
    """Oracle: 2 pi i times the residues of num/den in the upper half-plane (simple poles)."""
    r = np.roots(den[::-1])
    dp = np.polyder(np.asarray(den[::-1], dtype=complex))
    return 2j * math.pi * sum(np.polyval(num[::-1], p) / np.polyval(dp, p) for p in r if p.imag > 0)


def test_quadrature_matches_residues(rng):
    for _ in range(30):
        d = random_density(rng)
        num = list(d.num.coeffs)
        den = list(d.den.coeffs)
        oracle = _residue_mass(num, den)
        nu = ComplexMeasure((), (d,))
        quad = integrate_kernel(nu, lambda t: np.ones_like(t, dtype=complex))
        assert abs(quad - oracle) <= 1e-9 * max(1, abs(oracle))
        assert abs(nu.mass() - oracle) <= 1e-9 * max(1, abs(oracle))


def test_stieltjes_matches_quadrature(rng):
    z = np.array([0.3 + 0.7j, -2 - 0.2j, 4 + 3j])
    for _ in range(10):
        nu = ComplexMeasure((Atom(0.5, 1 - 1j),), (random_density(rng), Density.bump(-1, 1, (1, 2))))
        quad = integrate_kernel(nu, lambda t: 1 / (t[:, None] - z[None, :]))
        assert np.allclose(nu.stieltjes(z), quad, atol=1e-9)


def test_quadrature_budget_error():
    nu = ComplexMeasure((), (Density.trigonometric("sin", 40, (1,), (1e-4, 0, 1)),))
    cfg = QuadratureConfig(abs_tol=1e-14, rel_tol=1e-14, max_subdivisions=2)
    with pytest.raises(QuadratureError) as ei:
        integrate_kernel(nu, lambda t: np.abs(t).astype(complex), cfg)
    assert ei.value.estimate is not None
