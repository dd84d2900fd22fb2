"""Hypothesis-driven invariants across modules."""

import math

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from _gen import random_data, random_pair, random_points
from qhkit import (
    conjugate_fn,
    conjugate_measure,
    cayley,
    decompose,
    eval_data,
    from_disk,
    inverse_cayley,
    linear_combine,
    to_disk,
    total_variation,
)
from qhkit.measure import integrate_kernel

seeds = st.integers(min_value=0, max_value=2**32 - 1)
scalars = st.complex_numbers(max_magnitude=5, allow_nan=False, allow_infinity=False)
upper_points = st.builds(
    complex,
    st.floats(-20, 20, allow_nan=False),
    st.floats(1e-3, 20, allow_nan=False),
)

SETTINGS = settings(max_examples=40, deadline=None)


@SETTINGS
@given(seeds, upper_points)
def test_conjugate_symmetry(seed, z):
    D = random_data(np.random.default_rng(seed))
    for w in (z, z.conjugate()):
        lhs = np.conj(eval_data(D, w))
        rhs = eval_data(conjugate_fn(D), np.conj(w))
        assert abs(lhs - rhs) <= 1e-9 * max(1.0, abs(lhs))


@SETTINGS
@given(seeds, scalars)
def test_total_variation_homogeneous(seed, alpha):
    nu = random_data(np.random.default_rng(seed)).measure
    tv = total_variation(nu)
    tva = total_variation(nu.scaled(alpha))
    assert abs(tva - abs(alpha) * tv) <= 1e-7 * max(1.0, abs(alpha) * tv)


@SETTINGS
@given(seeds, scalars, scalars)
def test_mass_and_kernel_linear(seed, al, be):
    rng = np.random.default_rng(seed)
    n1, n2 = random_data(rng).measure, random_data(rng).measure
    comb = linear_combine(al, n1, be, n2)
    assert abs(comb.mass() - (al * n1.mass() + be * n2.mass())) <= 1e-9 * (1 + abs(al) + abs(be))
    z = complex(rng.normal(), 1 + rng.random())
    f = lambda t: (1 + t * z) / (t - z)
    lhs = integrate_kernel(comb, f)
    rhs = al * integrate_kernel(n1, f) + be * integrate_kernel(n2, f)
    assert abs(lhs - rhs) <= 1e-7 * (1 + abs(lhs))


@SETTINGS
@given(seeds)
def test_conjugate_measure_involution(seed):
    nu = random_data(np.random.default_rng(seed)).measure
    assert conjugate_measure(conjugate_measure(nu)) == nu


@SETTINGS
@given(seeds)
def test_decomposition_reconstructs(seed):
    rng = np.random.default_rng(seed)
    pair = random_pair(rng)
    d = decompose(pair)
    z = random_points(rng, 100)
    want = pair(z)
    assert np.max(np.abs(d(z) - want) / np.maximum(1, np.abs(want))) <= 1e-10
    assert decompose(d.reconstruct()).allclose(d)


@SETTINGS
@given(seeds)
def test_disk_round_trip(seed):
    rng = np.random.default_rng(seed)
    D = random_data(rng)
    back = from_disk(to_disk(D))
    assert abs(back.a - D.a) <= 1e-8 and abs(back.b - D.b) <= 1e-8
    x = np.linspace(-5, 5, 11) + 0.01
    assert np.allclose(back.measure.density(x), D.measure.density(x), atol=1e-8)


@SETTINGS
@given(st.floats(0, 0.999), st.floats(0, 2 * math.pi))
def test_mobius_round_trip(r, th):
    zeta = r * complex(math.cos(th), math.sin(th))
    xi = cayley(zeta)
    assert xi.imag > 0
    assert abs(inverse_cayley(xi) - zeta) <= 1e-9
