import math

import numpy as np
import pytest

from _gen import random_data
from qhkit import (
    Builtin,
    ComplexMeasure,
    Custom,
    DataTriple,
    FromData,
    LimitDivergence,
    RecoveryError,
    SamplingGrid,
    dirac,
    eval_data,
    extract_a,
    extract_b,
    extract_b_via_mass,
    integrate,
    lebesgue_tilde,

    recover_atom,
    recover_data,
    recover_density,
)
from qhkit.core import Density
from qhkit.recover import higher_order_vanishing, recover

SIN = ComplexMeasure((), (Density.trigonometric("sin", 1, (1,), (1, 0, 1)),))


def test_extract_a():
    assert extract_a(FromData(DataTriple(1 + 1j, 5, lebesgue_tilde()))) == pytest.approx(1 + 1j)
    assert abs(extract_a("const-i-sym")) < 1e-15
    assert extract_a("exp-sym") == pytest.approx(math.exp(-1))


def test_extract_b():
    assert extract_b(FromData(DataTriple(0, 2 + 1j))) == pytest.approx(2 + 1j)
    assert abs(extract_b(FromData(DataTriple(0, 0, dirac(0, math.pi))))) < 1e-9
    assert abs(extract_b("const-i-sym")) < 1e-9


def test_extract_b_diverges_for_gauss():
    with pytest.raises(LimitDivergence):
        extract_b("gauss")


def test_extract_b_via_mass():
    assert extract_b_via_mass(FromData(DataTriple(0, 1)), ComplexMeasure()) == pytest.approx(1)
    assert abs(extract_b_via_mass("const-i-sym", lebesgue_tilde())) < 1e-15
    assert abs(extract_b_via_mass("exp-sym", SIN)) < 1e-12


def test_recover_density(ex54):
    for x in (-3.0, 0.0, 0.7):
        assert recover_density("const-i-sym", x).value == pytest.approx(1 / (1 + x * x), abs=1e-9)
    assert recover_density(FromData(ex54), 0.0).value == pytest.approx(-1, abs=1e-8)
    x = math.pi / 2
    assert recover_density("exp-sym", x).value == pytest.approx(1 / (1 + x * x), abs=1e-8)


def test_recover_density_flags_atom():
    res = recover_density(FromData(DataTriple(0, 0, dirac(0.0, 1.0))), np.array([0.0, 1.0]))
    assert not res.converged[0] and res.converged[1]


def test_recover_atom(ex54):
    assert recover_atom(FromData(DataTriple(0, 0, dirac(0, math.pi))), 0) == pytest.approx(math.pi, rel=1e-9)
    assert recover_atom(FromData(DataTriple(0, 0, dirac(2.0, 1 - 1j))), 2.0) == pytest.approx(1 - 1j, rel=1e-9)
    for t0 in (-1.0, 0.0, 2.5):
        assert recover_atom(FromData(ex54), t0) == 0
    assert recover_atom(Custom(lambda z: 1 + 2 * z), 3.0) == 0


def test_recover_atom_side_mismatch():
    # -1/z above, 0 below: the one-sided limits differ at 0
    f = Custom(lambda z: np.where(z.imag > 0, -1 / z, 0))
    with pytest.raises(Exception) as ei:
        recover_atom(f, 0.0)
    assert "differ" in str(ei.value)


def test_higher_order_vanishing():
    assert abs(higher_order_vanishing(Custom(lambda z: -1 / z), 0, 2)) < 1e-9
    assert higher_order_vanishing("recip-sq", 0, 2) == pytest.approx(1)
    assert abs(higher_order_vanishing(Custom(lambda z: 1 + 2 * z), 0, 2)) < 1e-9


def test_recover_data_examples():
    D = DataTriple(1, 2, dirac(0, math.pi))
    R = recover_data(FromData(D), SamplingGrid(atoms=(0.0,)))
    assert abs(R.a - 1) < 1e-6 and abs(R.b - 2) < 1e-6
    assert len(R.measure.atoms) == 1 and abs(R.measure.atoms[0].w - math.pi) < 1e-6
    assert np.max(np.abs(R.measure.density(np.linspace(-19, 19, 77)))) < 1e-6

    R = recover_data("const-i-sym")
    x = np.linspace(-20, 19.9, 400)
    assert abs(R.a) < 1e-6 and abs(R.b) < 1e-6
    assert np.max(np.abs(R.measure.density(x) - 1 / (1 + x * x))) < 1e-6

    R = recover_data(FromData(DataTriple()))
    assert R.a == 0 and R.b == 0 and R.measure.is_empty


def test_recover_exp_sym():
    R = recover("exp-sym")
    x = np.linspace(-19, 19, 200)
    assert R.data.a == pytest.approx(math.exp(-1), abs=1e-9)
    assert np.max(np.abs(R.data.measure.density(x) - np.sin(x) / (1 + x * x))) < 1e-4


def test_recovery_error_carries_map():
    # missing candidate atom: the reconstruction cannot reproduce the function
    f = FromData(DataTriple(0, 0, dirac(0.3, 1.0)))
    with pytest.raises(RecoveryError) as ei:
        recover(f, SamplingGrid(lo=-5, hi=5, step=0.1, tail="none"))
    assert ei.value.residual > 1e-3 and ei.value.residual_map


def test_real_data_gives_real_density(rng):
    for _ in range(5):
        D = random_data(rng, real=True)
        x = np.linspace(-4, 4, 9) + 0.123
        res = recover_density(FromData(D), x)
        assert np.max(np.abs(np.imag(res.value))) < 1e-8


def test_stieltjes_pairing(rng):
    """``int g(x) jump(x+iy) dx -> int g(t) (1+t^2) dnu(t)`` with ``g = 1/(1+x^2)``."""
    for _ in range(3):
        D = random_data(rng, max_atoms=0)
        f = FromData(D)
        direct = D.measure.mass()
        vals = []
        for y in (1e-2, 5e-3, 2.5e-3):
            g = lambda x, y=y: (f(x + 1j * y) - f(x - 1j * y)) / 2j / (1 + x * x)
            vals.append(integrate(g, -math.inf, math.inf)[0])
        # two Richardson steps in y (errors O(y) and O(y^2))
        lim = (8 * vals[2] - 6 * vals[1] + vals[0]) / 3
        assert abs(lim - direct) < 1e-5


def test_recover_atom_sides_agree_on_fixtures():
    for D in (DataTriple(0, 0, dirac(0, math.pi)), DataTriple(1j, 0, dirac(-1.5, 2 + 1j))):
        t = D.measure.atoms[0].t
        assert recover_atom(FromData(D), t) == pytest.approx(D.measure.atoms[0].w, rel=1e-8)
