import math

import numpy as np
import pytest

from qhkit import LimitDivergence, LimitSchedule, QuadratureConfig, QuadratureError, extrapolate, integrate


def test_integrate_smooth_and_infinite():
    v, err = integrate(lambda x: np.exp(-x * x).astype(complex), -math.inf, math.inf)
    assert v == pytest.approx(math.sqrt(math.pi), rel=1e-12)
    v, _ = integrate(lambda x: 1 / (1 + x * x), 0, math.inf)
    assert v == pytest.approx(math.pi / 2, rel=1e-12)


def test_integrate_vector_and_breakpoints():
    def f(x):
        return np.stack([np.abs(x - 0.3), np.sqrt(np.abs(x))], axis=1)

    v, _ = integrate(f, -1, 1, points=[0.0, 0.3])
    assert v[0] == pytest.approx((1.3**2 + 0.7**2) / 2, rel=1e-12)
    assert v[1] == pytest.approx(4 / 3, rel=1e-9)


def test_integrate_nonfinite_raises():
    with pytest.raises(QuadratureError):
        integrate(lambda x: 1 / x, -1, 1, points=[0.0])


def test_extrapolate_smooth_limit():
    res = extrapolate(lambda y: np.sin(y) / y + 3 * y)
    assert res.converged and res.value == pytest.approx(1.0, abs=1e-9)


def test_extrapolate_vector():
    res = extrapolate(lambda y: np.stack([1 + y, 2 - y**2], axis=1))
    assert np.all(res.converged) and np.allclose(res.value, [1, 2])


def test_extrapolate_divergent():
    res = extrapolate(lambda y: 1 / y)
    assert not res.converged
    with pytest.raises(LimitDivergence):
        res.raise_if_diverged()


def test_extrapolate_log_divergence():
    res = extrapolate(lambda y: np.log(y))
    assert not res.converged


def test_schedule_validation():
    with pytest.raises(ValueError):
        LimitSchedule(start=2)
    with pytest.raises(ValueError):
        LimitSchedule(ratio=1)
    assert len(LimitSchedule(steps=7).points()) == 7
