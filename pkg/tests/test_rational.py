import math

import numpy as np
import pytest

from _gen import random_pair, random_points
from qhkit import (
    ClassificationError,
    DataTriple,
    RationalFn,
    RationalPair,
    classify_both_halves,
    classify_lower_zero_upper,
    classify_pair,
    classify_upper_zero_lower,
    decompose,
    eval_data,
    is_ordinary_herglotz,
    parse_rational,
    rational_to_data,
)

EX54 = "(2i*z - 2 + 4)/(z + i)"


def test_classify_upper_zero_lower():
    assert classify_upper_zero_lower(EX54).verdict == "accepted"
    assert classify_upper_zero_lower("1/(z - i)").verdict == "rejected"
    r = classify_upper_zero_lower("1/z")
    assert r.verdict == "rejected" and "real pole" in r.reason


def test_classify_lower_zero_upper():
    assert classify_lower_zero_upper("1/(z - i)").verdict == "accepted"
    assert classify_lower_zero_upper("1/(z + i)").verdict == "rejected"


def test_classify_both_halves():
    r = classify_both_halves("1/z^2")
    assert r.verdict == "rejected" and "double real zero" in r.reason
    assert classify_both_halves("-1/z").verdict == "accepted"
    assert classify_both_halves("z^3/(z^2 - 1)").verdict == "accepted"
    assert classify_both_halves("z^3/(z+1)").verdict == "rejected"


def test_near_real_pole_inconclusive():
    r = classify_both_halves(RationalFn(parse_rational("1").num, parse_rational("z - 1e-7i").num))
    assert r.verdict == "inconclusive" and r.roots


def test_classify_pair():
    assert classify_pair(RationalPair.same("-1/z")).verdict == "accepted"
    r = classify_pair(RationalPair("1/z", "0"))
    assert r.verdict == "rejected"
    r = classify_pair(RationalPair("1/(z - 1)", "1/((z - 1i)*(z-3i))"))
    assert r.verdict == "rejected" and "only in the upper" in r.reason
    r = classify_pair(RationalPair("z", "2z"))
    assert r.verdict == "rejected" and "unequal" in r.reason
    r = classify_pair(RationalPair("1/z", "2/z"))
    assert r.verdict == "rejected" and "residues" in r.reason


def test_decompose_examples():
    d = decompose(RationalPair.same("-1/z"))
    assert d.b == 0 and d.common.allclose(parse_rational("-1/z"))
    assert d.upper_part.is_zero and d.lower_part.is_zero and d.a1 == 0 and d.a2 == 0

    d = decompose(RationalPair(EX54, "0"))
    assert abs(d.b) < 1e-15 and d.common.is_zero
    assert d.a1 == pytest.approx(2j) and d.upper_part.allclose(parse_rational("4/(z+i)"))
    assert d.a2 == 0 and d.lower_part.is_zero

    pair = RationalPair("z + 1/z + 1/(z+i)", "z + 1/z")
    d = decompose(pair)
    assert d.b == pytest.approx(1) and d.common.allclose(parse_rational("1/z"))
    assert d.upper_part.allclose(parse_rational("1/(z+i)")) and d.lower_part.is_zero
    z = random_points(np.random.default_rng(1), 50)
    assert np.allclose(d(z), pair(z), rtol=1e-12)


def test_decompose_errors():
    with pytest.raises(ClassificationError):
        decompose(RationalPair.same("1/z^2"))
    with pytest.raises(ClassificationError):
        decompose(RationalPair("1/(z-i)", "0"))
    with pytest.raises(ClassificationError):
        decompose(RationalPair.same("z^3"))


def test_reconstruction_and_uniqueness(rng):
    for _ in range(25):
        pair = random_pair(rng)
        d = decompose(pair)
        for half in ("upper", "lower"):
            z = random_points(rng, 100, half=half)
            want = pair(z)
            assert np.max(np.abs(d(z) - want) / np.maximum(1, np.abs(want))) <= 1e-10
        assert decompose(d.reconstruct()).allclose(d)


def test_rational_to_data_examples(ex54):
    D = rational_to_data(RationalPair.same("-1/z"))
    assert D.a == 0 and D.b == 0 and not D.measure.densities
    (atom,) = D.measure.atoms
    assert atom.t == 0 and atom.w == pytest.approx(math.pi)

    D = rational_to_data(RationalPair(EX54, "0"))
    t = np.linspace(-5, 5, 21)
    assert abs(D.a) < 1e-12 and abs(D.b) < 1e-12
    assert np.allclose(D.measure.density(t), 1 / (t + 1j) ** 2, atol=1e-12)

    D = rational_to_data(RationalPair.same("z"))
    assert (D.a, D.b) == (0, 1) and D.measure.is_empty


def test_rational_to_data_eval(rng):
    for _ in range(10):
        pair = random_pair(rng)
        D = rational_to_data(pair)
        z = random_points(rng, 40, ymin=0.1)
        want = pair(z)
        assert np.max(np.abs(eval_data(D, z) - want) / np.maximum(1, np.abs(want))) <= 1e-6


def test_herglotz_consistency(rng):
    """Real coefficients, non-positive residues at real poles and ``b >= 0`` give ordinary Herglotz data."""
    checked = 0
    for _ in range(200):
        b = abs(rng.normal())
        ts = sorted(rng.choice(np.arange(-6, 7), size=int(rng.integers(1, 4)), replace=False) * 0.5)
        text = f"{b}*z + {rng.normal()}" + "".join(f" - {abs(rng.normal()):.6f}/(z - ({t}))" for t in ts)
        R = parse_rational(text)
        if not classify_both_halves(R).accepted:
            continue
        D = rational_to_data(RationalPair.same(R))
        assert is_ordinary_herglotz(D)
        checked += 1
        if checked >= 20:
            break
    assert checked >= 20
