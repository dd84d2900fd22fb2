"""Asymptotic expansions along vertical rays and sum-rule integrals."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import as_boundary_fn
from .disk import INFINITY
from .errors import DomainError, LimitDivergence
from .limits import DEFAULT_SCHEDULE, LimitSchedule, extrapolate
from .quadrature import DEFAULT_CONFIG, QuadratureConfig, integrate

__all__ = [
    "Expansion",
    "expand_at_infinity",
    "expand_at_point",
    "sum_rule_integral",
    "SumRuleReport",
    "sum_rule_check",
    "tan_mi_closed_form",
    "Y_MIN",
    "HOLDS",
    "DIVERGES",
    "INCONCLUSIVE",
]

Y_MIN = 1e-4

HOLDS = "identity-holds"
DIVERGES = "diverges"
INCONCLUSIVE = "inconclusive"


@dataclass
class Expansion:
    """Coefficients keyed by their index: ``a_{-1}, a_0, ...`` at a real point,
    ``b_1, b_0, b_{-1}, ...`` at infinity.

    ``order`` is the highest order reached (``M`` or ``K``); it is below
    ``requested`` when a later stage failed to converge.
    """

    anchor: object
    coefficients: dict[int, complex]
    errors: dict[int, float]
    requested: int
    order: int
    half: str = "upper"
    traces: dict[int, list] = field(default_factory=dict, repr=False)

    @property
    def complete(self) -> bool:
        return self.order == self.requested

    def __getitem__(self, k: int) -> complex:
        return self.coefficients[k]

    def get(self, k: int, default=None):
        return self.coefficients.get(k, default)


def _snap(c: complex, tol: float) -> complex:
    # parts below the absolute tolerance are extrapolation noise; keeping them
    # would feed a spurious c z**m term into every later stage
    re = 0.0 if abs(c.real) <= tol else c.real
    im = 0.0 if abs(c.imag) <= tol else c.imag
    return complex(re, im)


def _sign(half: str) -> int:
    if half not in ("upper", "lower"):
        raise ValueError("half must be 'upper' or 'lower'")
    return 1 if half == "upper" else -1


def expand_at_infinity(f, K: int, sched: LimitSchedule = DEFAULT_SCHEDULE, half: str = "upper") -> Expansion:
    """``f(z) = b_1 z + b_0 + b_{-1}/z + ... + b_{-K}/z^K + o(z^-K)`` along ``z = +-iR``.

    Each coefficient is the extrapolated limit of the remainder after
    subtracting the ones already found.  A stage that does not converge ends
    the expansion there.

    Raises:
        LimitDivergence: if even ``b_1 = lim f(z)/z`` does not exist.
    """
    if K < -1:
        raise ValueError("K must be >= -1")
    f = as_boundary_fn(f)
    sg = _sign(half)
    coeffs: dict[int, complex] = {}
    errs: dict[int, float] = {}
    traces: dict[int, list] = {}
    order = None
    for idx in range(1, -K - 1, -1):

        def g(y, idx=idx):
            z = sg * 1j / y
            rem = f(z)
            for m, c in coeffs.items():
                rem = rem - c * z**m
            return rem * z ** (-idx)

        res = extrapolate(g, sched)
        traces[idx] = res.trace
        if not res.converged:
            if idx == 1:
                raise LimitDivergence("lim f(z)/z does not exist along the imaginary axis", res.trace)
            break
        coeffs[idx] = _snap(res.value, sched.abs_tol)
        errs[idx] = res.error
        order = -idx
    return Expansion(INFINITY, coeffs, errs, K, order, half, traces)


def expand_at_point(f, t0: float, M: int, sched: LimitSchedule = DEFAULT_SCHEDULE, half: str = "upper") -> Expansion:
    """``f(z) = a_{-1}/(z-t0) + a_0 + a_1 (z-t0) + ... + a_M (z-t0)^M + o(...)`` along ``z = t0 +- iy``.

    Raises:
        LimitDivergence: if ``a_{-1} = lim (z - t0) f(z)`` does not exist.
    """
    if M < -1:
        raise ValueError("M must be >= -1")
    f = as_boundary_fn(f)
    sg = _sign(half)
    t0 = float(t0)
    coeffs: dict[int, complex] = {}
    errs: dict[int, float] = {}
    traces: dict[int, list] = {}
    order = None
    for idx in range(-1, M + 1):

        def g(y, idx=idx):
            h = sg * 1j * y
            rem = f(t0 + h)
            for m, c in coeffs.items():
                rem = rem - c * h**m
            return rem * h ** (-idx)

        res = extrapolate(g, sched)
        traces[idx] = res.trace
        if not res.converged:
            if idx == -1:
                raise LimitDivergence(f"lim (z - {t0:g}) f(z) does not exist along the vertical ray", res.trace)
            break
        coeffs[idx] = _snap(res.value, sched.abs_tol)
        errs[idx] = res.error
        order = idx
    return Expansion(t0, coeffs, errs, M, order, half, traces)


# --------------------------------------------------------------------------
# sum rules


def _sum_rule_points(f, lo: float, hi: float, y: float) -> list[float]:
    pts = set()
    for s in f.real_singularities(lo, hi):
        for d in (0.0, y, -y, 10 * y, -10 * y):
            if lo < s + d < hi:
                pts.add(s + d)
    return sorted(pts)


def sum_rule_integral(f, k: int, eps: float, y: float, cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """``int_{eps < |x| < 1/eps} x**k Im f(x + iy) dx``.

    The range is split at the real singularities the function reports (and at
    ``+-y``, ``+-10y`` around them) so that the peaks of width ``y`` are resolved.
    """
    if not 0 < eps < 1:
        raise DomainError("eps must lie in (0, 1)")
    if not y >= Y_MIN:
        raise DomainError(f"y must be at least {Y_MIN:g}")
    f = as_boundary_fn(f)
    k = int(k)

    def g(x):
        return (x**k * np.imag(f(x + 1j * y))).astype(complex)

    total = 0.0
    for lo, hi in ((-1 / eps, -eps), (eps, 1 / eps)):
        v, _ = integrate(g, lo, hi, cfg, _sum_rule_points(f, lo, hi, y))
        total += v.real
    return float(total)


def tan_mi_closed_form(eps: float, y: float, branch_corrected: bool = False) -> float:
    """Closed form of the ``tan z - i`` integral for ``k = 0``.

    Without the correction this is the formula obtained by evaluating the
    antiderivative ``arctan(tan(x) tanh(y))`` at the endpoints only.  That
    antiderivative jumps by ``pi`` at every pole ``(m + 1/2) pi``; the corrected
    form adds ``2 n pi`` for the ``n`` poles inside ``(eps, 1/eps)``.
    """
    th = math.tanh(y)
    val = 2 * (math.atan(math.tan(1 / eps) * th) - math.atan(math.tan(eps) * th) + eps - 1 / eps)
    if branch_corrected:
        n = sum(1 for m in range(int(1 / eps / math.pi) + 2) if eps < (m + 0.5) * math.pi < 1 / eps)
        val += 2 * n * math.pi
    return val


@dataclass
class SumRuleReport:
    """Iterated limit (``y -> 0+`` first, then ``eps -> 0+``) against the expansion side.

    ``table`` rows are ``(eps, y, integral)``; ``inner`` holds one
    ``(eps, limit, error, converged)`` per ``eps``.  The integral side is
    compared after division by ``pi``.
    """

    k: int
    verdict: str
    predicted: complex | None
    limit_estimate: float | None
    table: list[tuple[float, float, float]]
    inner: list[tuple[float, float, float, bool]]
    reason: str = ""


DEFAULT_EPS = (0.2, 0.1, 0.05, 0.02)
DEFAULT_Y = LimitSchedule(start=0.05, ratio=0.5, steps=9, extrapolation_order=3, abs_tol=1e-6, rel_tol=1e-6)


def sum_rule_check(
    f,
    k: int = 0,
    eps_schedule=DEFAULT_EPS,
    y_schedule: LimitSchedule = DEFAULT_Y,
    expansions: tuple | None = None,
    cfg: QuadratureConfig = DEFAULT_CONFIG,
    tol: float = 1e-6,
    sched: LimitSchedule = DEFAULT_SCHEDULE,
) -> SumRuleReport:
    """Compare ``(1/pi) lim_eps lim_y int x**k Im f`` with ``a_{-k-1} - b_{-k-1}``.

    ``expansions`` may supply ``(at_zero, at_infinity)``; otherwise they are
    computed.  ``a_{-k-1}`` is taken as zero for ``k >= 1``.

    Verdicts: identity-holds when the inner limits settle within ``tol`` of the
    prediction; diverges when they move monotonically without shrinking
    increments; inconclusive otherwise.
    """
    f = as_boundary_fn(f)
    eps_schedule = sorted(eps_schedule, reverse=True)
    if y_schedule.points()[-1] < Y_MIN * (1 - 1e-12):
        raise DomainError(f"y schedule goes below {Y_MIN:g}")
    predicted = None
    reason = ""
    try:
        if expansions is None:
            at0 = expand_at_point(f, 0.0, -1, sched)
            atinf = expand_at_infinity(f, k + 1, sched)
        else:
            at0, atinf = expansions
        a = at0.get(-k - 1, 0j) if k == 0 else 0j
        b = atinf.get(-k - 1)
        if a is not None and b is not None:
            predicted = complex(a - b)
        else:
            reason = "expansion side not available to the needed order"
    except LimitDivergence as exc:
        reason = f"expansion side: {exc}"

    table: list[tuple[float, float, float]] = []
    inner = []
    for eps in eps_schedule:

        def g(ys, eps=eps):
            vals = np.array([sum_rule_integral(f, k, eps, float(y), cfg) for y in ys])
            table.extend((eps, float(y), float(v)) for y, v in zip(ys, vals))
            return vals

        res = extrapolate(g, y_schedule)
        inner.append((eps, float(res.value.real), float(res.error), bool(res.converged)))

    # eps values whose inner limit could not be resolved above Y_MIN are kept
    # in the report but left out of the verdict
    limits = np.array([r[1] for r in inner if r[3]]) / math.pi
    verdict = INCONCLUSIVE
    estimate = float(limits[-1]) if len(limits) else None
    if len(limits) >= 2 and predicted is not None and abs(predicted.imag) <= tol:
        if np.all(np.abs(limits[-2:] - predicted.real) <= tol * max(1.0, abs(predicted))):
            verdict = HOLDS
    if verdict != HOLDS and len(limits) >= 3:
        d = np.diff(limits)
        mono = np.all(d > 0) or np.all(d < 0)
        if mono and np.all(np.abs(d[1:]) >= 0.5 * np.abs(d[:-1])):
            verdict = DIVERGES
            reason = reason or "inner limits move monotonically without settling"
    if verdict == INCONCLUSIVE and not reason:
        reason = "inner limits neither settle on the prediction nor run off monotonically"
    return SumRuleReport(k, verdict, predicted, estimate, table, inner, reason)
