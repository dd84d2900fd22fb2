import math

import numpy as np
import pytest

from _gen import random_data, random_points
from qhkit import (
    ConditionReport,
    Custom,
    DataTriple,
    FromData,
    LimitDivergence,
    check_growth,
    check_real_symmetry,
    check_regularity,
    check_signed_zero_props,
    check_zero_lower,
    eval_data,
    hardy_lower_bound,
    is_quasi_herglotz,
    lebesgue_tilde,
    quasi_parts,
    regularity_integral,
)

SQRT_BOUND = math.sqrt(math.pi) * math.gamma(0.25) / math.gamma(0.75)


def test_growth():
    assert check_growth("lin-split").verdict == "satisfied"
    g = check_growth("gauss")
    assert g.verdict == "violated"
    assert abs(g.witness.real) < 1e-9 * abs(g.witness)  # on the imaginary axis
    assert check_growth(Custom(lambda z: np.ones_like(z))).verdict == "satisfied"


def test_regularity_integral():
    # 4 ln r/(r^2 - 1) at r = 1/2 is 3.696785 (not 3.69627)
    assert regularity_integral("recip-split", 0.5) == pytest.approx(16 * math.log(2) / 3, abs=1e-6)
    assert regularity_integral("const-i-sym", 0.3) == pytest.approx(2 * math.pi, rel=1e-7)
    with pytest.raises(LimitDivergence) as ei:
        regularity_integral("lin-split", 0.5)
    Ts = [T for T, _ in ei.value.trace]
    assert Ts == sorted(Ts) and len(Ts) >= 2


def test_check_regularity():
    assert check_regularity("recip-split").verdict == "violated"
    assert check_regularity("gauss").verdict == "satisfied"
    r = check_regularity("sqrt-up")
    assert r.verdict == "satisfied"
    assert r.details["sup_estimate"] <= SQRT_BOUND


def test_membership_verdicts():
    r = is_quasi_herglotz("recip-sq")
    assert r.verdict == "violated" and "regularity" in r.witness
    assert is_quasi_herglotz("exp-sym").verdict == "satisfied"
    for name in ("lin-split", "recip-split"):
        assert is_quasi_herglotz(name).verdict == "violated"
    g = is_quasi_herglotz("gauss")
    assert g.verdict == "violated" and "growth" in g.witness


def test_membership_sound_on_random_data(rng):
    for _ in range(5):
        D = random_data(rng)
        assert is_quasi_herglotz(FromData(D)).verdict == "satisfied"


def test_real_symmetry():
    assert check_real_symmetry("exp-sym").verdict == "satisfied"
    assert check_real_symmetry("const-i-sym").verdict == "satisfied"
    r = check_real_symmetry(Custom(lambda z: np.full_like(z, 1j)))
    assert r.verdict == "violated" and r.witness is not None


def test_zero_lower(ex54):
    assert check_zero_lower(ex54).verdict == "satisfied"
    q1 = DataTriple(-0.5j, 0, lebesgue_tilde(0.5))
    assert check_zero_lower(q1, half="upper").verdict == "satisfied"
    assert check_zero_lower(q1).verdict == "violated"
    assert check_zero_lower(DataTriple(0, 1)).verdict == "violated"


def test_zero_lower_implies_zero(ex54, rng):
    for D, half in ((ex54, "lower"), (DataTriple(-0.5j, 0, lebesgue_tilde(0.5)), "upper")):
        assert check_zero_lower(D, half=half).ok
        z = random_points(rng, 100, half=half)
        assert np.max(np.abs(eval_data(D, z))) <= 10 * 1e-8


def test_qre_qim_relation(ex54, rng):
    re, im = quasi_parts(ex54)
    z = random_points(rng, 50, half="lower")
    assert np.allclose(eval_data(re, z), -1j * eval_data(im, z), atol=1e-10)


def test_signed_zero_props(ex54):
    r = check_signed_zero_props(ex54)
    assert r.verdict == "satisfied" and r.details["a"] is True
    q1 = DataTriple(-0.5j, 0, lebesgue_tilde(0.5))
    r = check_signed_zero_props(q1)
    assert r.verdict == "satisfied" and r.details["c"] is True
    assert check_signed_zero_props(DataTriple(), half="lower").verdict == "satisfied"


def test_hardy_lower_bound():
    for y, val, bound in hardy_lower_bound("sqrt-up"):
        assert val >= bound * (1 - 1e-9)


def test_report_requires_witness():
    with pytest.raises(ValueError):
        ConditionReport("growth", "violated")
