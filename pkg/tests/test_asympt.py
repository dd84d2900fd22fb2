import math

import numpy as np
import pytest

from _gen import random_data
from qhkit import (
    Custom,
    DataTriple,
    DomainError,
    FromData,
    LimitDivergence,
    dirac,
    expand_at_infinity,
    expand_at_point,
    recover_atom,
    sum_rule_check,
    sum_rule_integral,
)
from qhkit.asympt import tan_mi_closed_form

RECIP = Custom(lambda z: -1 / z, singularities=(0.0,))


def test_expand_at_infinity_examples():
    e = expand_at_infinity(RECIP, 1)
    assert e.complete and e[1] == 0 and e[0] == 0 and e[-1] == pytest.approx(-1)
    e = expand_at_infinity("tan-mi", 0)
    assert e[1] == 0 and abs(e[0]) < 1e-9
    e = expand_at_infinity(Custom(lambda z: z + 3 + 2 / z), 1)
    assert (e[1], e[0], e[-1]) == (pytest.approx(1), pytest.approx(3), pytest.approx(2))


def test_expand_at_infinity_first_stage_divergence():
    with pytest.raises(LimitDivergence):
        expand_at_infinity("gauss", 0)


def test_expand_at_point_examples():
    e = expand_at_point(RECIP, 0, 0)
    assert e[-1] == pytest.approx(-1) and e[0] == 0
    e = expand_at_point(Custom(lambda z: 1 + 2 * z), 1, 1)
    assert e[-1] == 0 and e[0] == pytest.approx(3) and e[1] == pytest.approx(2)
    e = expand_at_point("exp-sym", 0, 1)
    assert abs(e[-1]) < 1e-9 and e[0] == pytest.approx(1) and e[1] == pytest.approx(1j, abs=1e-7)


def test_expansion_b_matches_data(rng):
    for _ in range(5):
        D = random_data(rng)
        e = expand_at_infinity(FromData(D), -1)
        assert abs(e[1] - D.b) <= 1e-8


def test_point_coefficient_matches_atom():
    for t0, w in ((0.0, math.pi), (1.5, 2 - 1j)):
        f = FromData(DataTriple(0.3, 0, dirac(t0, w)))
        a = expand_at_point(f, t0, -1)[-1]
        assert a == pytest.approx(-(1 + t0 * t0) * w / math.pi, rel=1e-8)
        assert recover_atom(f, t0) == pytest.approx(w, rel=1e-8)


def test_sum_rule_integral_examples():
    # Im(-1/(x+iy)) = y/(x^2+y^2) integrates to 2(atan(1/(eps y)) - atan(eps/y))
    for y in (1e-2, 1e-3, 1e-4):
        exact = 2 * (math.atan(1 / (0.1 * y)) - math.atan(0.1 / y))
        assert sum_rule_integral(RECIP, 0, 0.1, y) == pytest.approx(exact, abs=1e-9)
    assert sum_rule_integral(Custom(lambda z: np.zeros_like(z)), 0, 0.2, 0.01) == 0
    with pytest.raises(DomainError):
        sum_rule_integral(RECIP, 0, 1.5, 0.1)
    with pytest.raises(DomainError):
        sum_rule_integral(RECIP, 0, 0.1, 1e-6)


@pytest.mark.parametrize("eps", [0.2, 0.1, 0.05, 0.02])
@pytest.mark.parametrize("y", [0.05, 0.01])
def test_tan_integral_matches_branch_corrected_form(eps, y):
    assert sum_rule_integral("tan-mi", 0, eps, y) == pytest.approx(tan_mi_closed_form(eps, y, True), abs=1e-6)


def test_sum_rule_check_holds():
    r = sum_rule_check(RECIP, 0)
    assert r.verdict == "identity-holds" and r.predicted == 0
    shifted = Custom(lambda z: -1 / (z - 1), singularities=(1.0,))
    assert sum_rule_check(shifted, 0).verdict == "identity-holds"


def test_sum_rule_check_tan():
    r = sum_rule_check("tan-mi", 0)
    assert r.predicted == 0
    assert r.verdict in ("inconclusive", "diverges")
    assert len(r.inner) == 4 and r.table
