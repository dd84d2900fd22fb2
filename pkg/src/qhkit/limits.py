"""Numerical limits along geometric schedules (Richardson extrapolation)."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import LimitDivergence

__all__ = ["LimitSchedule", "LimitResult", "extrapolate", "DEFAULT_SCHEDULE"]


@dataclass(frozen=True)
class LimitSchedule:
    """Geometric refinement ``y_k = start * ratio**k`` for ``k < steps``.

    ``extrapolation_order`` is the number of integer-power error terms
    (``y``, ``y**2``, ...) eliminated by the Richardson table.
    """

    start: float = 0.5
    ratio: float = 0.5
    steps: int = 20
    extrapolation_order: int = 2
    abs_tol: float = 1e-9
    rel_tol: float = 1e-8

    def __post_init__(self):
        if not 0 < self.start <= 1:
            raise ValueError("schedule start must lie in (0, 1]")
        if not 0 < self.ratio < 1:
            raise ValueError("schedule ratio must lie in (0, 1)")
        if self.steps < 3:
            raise ValueError("schedule needs at least 3 steps")
        if self.extrapolation_order < 0:
            raise ValueError("extrapolation order must be >= 0")

    def points(self) -> np.ndarray:
        return self.start * self.ratio ** np.arange(self.steps)


DEFAULT_SCHEDULE = LimitSchedule()


@dataclass
class LimitResult:
    value: complex | np.ndarray
    error: float | np.ndarray
    converged: bool | np.ndarray
    trace: list = field(default_factory=list)

    def raise_if_diverged(self, what: str = "limit"):
        if not np.all(self.converged):
            raise LimitDivergence(
                f"{what} did not converge (error estimate {np.max(self.error):.3e})", self.trace
            )
        return self


def _richardson(vals: np.ndarray, ratio: float, order: int) -> np.ndarray:
    """Column ``order`` of the Richardson table; rows before ``order`` are NaN."""
    table = vals.astype(complex).copy()
    n = len(vals)
    for j in range(1, order + 1):
        new = np.full_like(table, np.nan)
        f = ratio**j
        new[j:] = (table[j:] - f * table[j - 1 : n - 1]) / (1 - f)
        table = new
    return table


def extrapolate(g: Callable[[np.ndarray], np.ndarray], sched: LimitSchedule = DEFAULT_SCHEDULE) -> LimitResult:
    """Limit of ``g(y)`` as ``y -> 0+`` along the schedule.

    ``g`` is called once with the whole array of ``y`` values and may return
    shape ``(steps,)`` or ``(steps, m)`` for ``m`` independent limits.  The
    returned extrapolant is the one whose two neighbouring differences are
    smallest, which guards against both the pre-asymptotic start of the
    schedule and rounding noise at its end.
    """
    y = sched.points()
    with np.errstate(all="ignore"):
        raw = np.asarray(g(y), dtype=complex)
    scalar = raw.ndim == 1
    vals = raw[:, None] if scalar else raw
    order = min(sched.extrapolation_order, len(y) - 3)
    with np.errstate(all="ignore"):
        ext = _richardson(vals, sched.ratio, order)
        diff = np.abs(np.diff(ext, axis=0))
    diff = np.where(np.isfinite(diff), diff, np.inf)
    # pair of consecutive differences around candidate k: max(d[k-1], d[k])
    pair = np.maximum(diff[:-1], diff[1:])
    pair[: max(order - 1, 0)] = np.inf
    best = np.argmin(pair, axis=0)
    cols = np.arange(vals.shape[1])
    value = ext[best + 1, cols]
    err = pair[best, cols]
    tol = sched.abs_tol + sched.rel_tol * np.abs(value)
    conv = np.isfinite(value) & (err <= tol)
    trace = [(float(yk), raw[k].tolist() if not scalar else complex(raw[k]),
              ext[k].tolist() if not scalar else complex(ext[k, 0])) for k, yk in enumerate(y)]
    if scalar:
        return LimitResult(complex(value[0]), float(err[0]), bool(conv[0]), trace)
    return LimitResult(value, err, conv, trace)
