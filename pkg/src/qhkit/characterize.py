"""Numerical verdicts for the analytic characterization of quasi-Herglotz functions.

A function on the complement of the real line is quasi-Herglotz exactly when
it obeys the growth bound ``|q(z)| <= M (1 + |z|**2)/|Im z|`` and the
regularity bound ``sup_{0<r<1} int |q(t+ir) - q(t-ir)| dt/(1+t**2) < inf``.
Neither supremum can be decided from finitely many samples, so every check
returns ``satisfied``, ``violated`` or ``inconclusive`` together with the
numbers it was based on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import BoundaryFn, DataTriple, as_boundary_fn, eval_data
from .errors import LimitDivergence, QuadratureError
from .measure import ComplexMeasure, QuadratureConfig, lebesgue_tilde, linear_combine, total_variation
from .quadrature import DEFAULT_CONFIG, integrate

__all__ = [
    "ConditionReport",
    "GrowthGrid",
    "check_growth",
    "regularity_integral",
    "regularity_trace",
    "check_regularity",
    "is_quasi_herglotz",
    "check_real_symmetry",
    "check_zero_lower",
    "check_signed_zero_props",
    "hardy_lower_bound",
    "SATISFIED",
    "VIOLATED",
    "INCONCLUSIVE",
]

SATISFIED = "satisfied"
VIOLATED = "violated"
INCONCLUSIVE = "inconclusive"


@dataclass
class ConditionReport:
    """Outcome of a numerical check; ``witness`` is set whenever violated."""

    condition: str
    verdict: str
    witness: object = None
    trace: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.verdict not in (SATISFIED, VIOLATED, INCONCLUSIVE):
            raise ValueError(f"unknown verdict {self.verdict!r}")
        if self.verdict == VIOLATED and self.witness is None:
            raise ValueError("a violated report needs a witness")

    @property
    def ok(self) -> bool:
        return self.verdict == SATISFIED


# --------------------------------------------------------------------------
# growth


@dataclass(frozen=True)
class GrowthGrid:
    """``angles`` equally spaced directions (those on the real axis are skipped)
    times ``radii`` log-spaced moduli in ``[r_min, r_max]``.

    A run of ``window`` consecutive local exponents
    ``d log M / d log r >= grow_exponent`` counts as unbounded growth, which
    for a radius doubling is the ratio test ``M(2r)/M(r) >= 2``.
    """

    angles: int = 16
    radii: int = 24
    r_min: float = 1e-3
    r_max: float = 1e3
    window: int = 5
    grow_exponent: float = 0.999
    flat_exponent: float = 0.05

    def directions(self) -> np.ndarray:
        th = 2 * np.pi * np.arange(self.angles) / self.angles
        th = th[np.abs(np.sin(th)) > 1e-12]
        return np.exp(1j * th)

    def moduli(self) -> np.ndarray:
        return np.geomspace(self.r_min, self.r_max, self.radii)


def _exponent_runs(alpha: np.ndarray, thresh: float, window: int) -> int | None:
    run = 0
    for k, a in enumerate(alpha):
        run = run + 1 if a >= thresh else 0
        if run >= window:
            return k
    return None


def check_growth(f, grid: GrowthGrid = GrowthGrid()) -> ConditionReport:
    """Estimate ``M(r) = max |q(z)| |Im z|/(1 + |z|**2)`` over ``|z| = r``."""
    f = as_boundary_fn(f)
    dirs = grid.directions()
    rad = grid.moduli()
    z = rad[:, None] * dirs[None, :]
    with np.errstate(all="ignore"):
        v = np.abs(np.asarray(f(z), dtype=complex))
    Mz = v * np.abs(z.imag) / (1 + np.abs(z) ** 2)
    bad = ~np.isfinite(Mz)
    if bad.any():
        i, j = np.argwhere(bad)[0]
        w = complex(z[i, j])
        trace = [(float(r), float(m)) for r, m in zip(rad[: i], np.max(Mz[:i], axis=1))] if i else []
        return ConditionReport("growth", VIOLATED, w, trace, {"reason": "overflow"})
    M = np.max(Mz, axis=1)
    arg = np.argmax(Mz, axis=1)
    trace = [(float(r), float(m)) for r, m in zip(rad, M)]
    logM = np.log(np.maximum(M, 1e-300))
    dlogr = np.diff(np.log(rad))
    alpha = np.diff(logM) / dlogr
    # outward runs are looked for where r >= 1, inward runs where r <= 1:
    # a bounded function has M ~ r near 0, which is not growth
    split = int(np.searchsorted(rad, 1.0))
    out_alpha = alpha[max(split - 1, 0):]
    in_alpha = -alpha[: max(split, 1)][::-1]
    details = {"M_max": float(np.max(M)), "exponents": alpha.tolist()}
    k_out = _exponent_runs(out_alpha, grid.grow_exponent, grid.window)
    if k_out is not None:
        idx = max(split - 1, 0) + k_out + 1
        return ConditionReport("growth", VIOLATED, complex(z[idx, arg[idx]]), trace, details)
    k_in = _exponent_runs(in_alpha, grid.grow_exponent, grid.window)
    if k_in is not None:
        idx = max(split, 1) - 1 - k_in
        return ConditionReport("growth", VIOLATED, complex(z[idx, arg[idx]]), trace, details)
    w = grid.window
    if np.all(out_alpha[-w:] <= grid.flat_exponent) and np.all(in_alpha[-w:] <= grid.flat_exponent):
        return ConditionReport("growth", SATISFIED, None, trace, details)
    return ConditionReport("growth", INCONCLUSIVE, None, trace, details)


# --------------------------------------------------------------------------
# regularity


SHELLS = (10.0, 1e2, 1e3, 1e4)


def _breakpoints(f: BoundaryFn, r: float, T: float) -> list[float]:
    geo = [r * 4.0**k for k in range(40) if r * 4.0**k < T]
    pts = {0.0, r, -r, 1.0, -1.0}
    pts.update(geo)
    pts.update(-g for g in geo)
    sing = f.real_singularities(-T, T)
    sing = sorted(sing, key=abs)[:200]
    for s in sing:
        pts.add(s)
        for k in range(12):
            d = r * 4.0**k
            if d > 4:
                break
            pts.update((s - d, s + d))
    return sorted(p for p in pts if -T < p < T)


def _segment_integral(g, a: float, b: float, pts, cfg: QuadratureConfig) -> float:
    inner = [p for p in pts if a < p < b]
    v, _ = integrate(g, a, b, cfg, inner)
    return float(np.real(v))


@dataclass
class RegularityResult:
    r: float
    value: float
    divergent: bool
    trace: list


def regularity_trace(f, r: float, cfg: QuadratureConfig = DEFAULT_CONFIG, shells=SHELLS) -> RegularityResult:
    """Truncated integrals ``int_{-T}^{T} |q(t+ir) - q(t-ir)| dt/(1+t**2)`` for
    each ``T`` in ``shells`` and the extrapolation ``T -> inf``.

    The tail is extrapolated geometrically from the last two shell
    increments; a ratio of increments ``>= 0.5`` is read as divergence.
    """
    f = as_boundary_fn(f)
    if not 0 < r:
        raise ValueError("r must be positive")

    def g(t):
        return np.abs(f(t + 1j * r) - f(t - 1j * r)) / (1 + t * t)

    value, divergent, trace = _shell_integral(g, _breakpoints(f, r, shells[-1]), cfg, shells)
    return RegularityResult(r, value, divergent, trace)


def _shell_integral(g, pts, cfg: QuadratureConfig, shells=SHELLS):
    """``int_R g`` from nested shells ``[-T, T]`` with a geometric tail.

    Returns ``(value, divergent, trace)``; the ratio of the last two shell
    increments must stay below 0.5 for the tail to count as convergent.
    """
    total = _segment_integral(g, -shells[0], shells[0], pts, cfg)
    trace = [(shells[0], total)]
    incs = []
    prev = shells[0]
    for T in shells[1:]:
        inc = _segment_integral(g, prev, T, pts, cfg) + _segment_integral(g, -T, -prev, pts, cfg)
        total += inc
        incs.append(inc)
        trace.append((T, total))
        prev = T
    tiny = 1e-12 * max(1.0, abs(total))
    if incs[-1] <= tiny:
        return total, False, trace
    rho = incs[-1] / incs[-2] if incs[-2] > tiny else 1.0
    if rho >= 0.5:
        return math.inf, True, trace
    return total + incs[-1] * rho / (1 - rho), False, trace


def regularity_integral(f, r: float, cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """``int_R |q(t+ir) - q(t-ir)| dt/(1+t**2)`` at fixed ``r``.

    Raises:
        LimitDivergence: the truncated integrals keep growing with ``T``; the
            exception trace holds the ``(T, value)`` sequence.
    """
    res = regularity_trace(f, r, cfg)
    if res.divergent:
        raise LimitDivergence(f"regularity integral diverges at r={r:g} (truncation sweep)", res.trace)
    return res.value


DEFAULT_R_SCHEDULE = tuple(2.0**-k for k in range(1, 13))


def check_regularity(
    f, r_schedule=DEFAULT_R_SCHEDULE, cfg: QuadratureConfig = DEFAULT_CONFIG, window: int = 5
) -> ConditionReport:
    """Bounded-ness of the regularity integral as ``r -> 0+``.

    Satisfied when the increments between successive ``r`` shrink
    geometrically (ratio ``<= 0.9``) or are negligible over the last
    ``window`` steps; violated when they stay positive with ratio ``>= 0.95``
    (at least logarithmic growth) or the integral diverges in ``T``.
    """
    f = as_boundary_fn(f)
    vals = []
    trace = []
    for r in r_schedule:
        try:
            res = regularity_trace(f, r, cfg)
        except QuadratureError as exc:
            return ConditionReport("regularity", INCONCLUSIVE, None, trace, {"error": str(exc), "r": r})
        if res.divergent:
            return ConditionReport(
                "regularity", VIOLATED, {"r": r, "T_sequence": res.trace}, trace, {"reason": "divergent in T"}
            )
        vals.append(res.value)
        trace.append((r, res.value))
    v = np.array(vals)
    inc = np.diff(v)
    scale = max(1.0, float(np.max(np.abs(v))))
    details = {"sup_estimate": float(np.max(v))}
    last = inc[-window:]
    if np.all(np.abs(last) <= 1e-9 * scale):
        return ConditionReport("regularity", SATISFIED, None, trace, details)
    ratios = np.abs(last[1:]) / np.maximum(np.abs(last[:-1]), 1e-300)
    if np.all(last > 0) and np.all(ratios >= 0.95):
        return ConditionReport("regularity", VIOLATED, {"r": float(r_schedule[-1]), "value": float(v[-1])}, trace, details)
    small = np.abs(last[1:]) <= 1e-9 * scale
    if np.all((ratios <= 0.9) | small):
        # bounded: add the geometric remainder of the increments to the sup
        rho = float(np.max(ratios[~small])) if np.any(~small) else 0.0
        tail = float(np.abs(last[-1])) * rho / (1 - rho) if rho < 1 else 0.0
        details["sup_estimate"] = float(max(np.max(v), v[-1] + tail if inc[-1] > 0 else np.max(v)))
        return ConditionReport("regularity", SATISFIED, None, trace, details)
    return ConditionReport("regularity", INCONCLUSIVE, None, trace, details)


def is_quasi_herglotz(
    f, grid: GrowthGrid = GrowthGrid(), r_schedule=DEFAULT_R_SCHEDULE, cfg: QuadratureConfig = DEFAULT_CONFIG
) -> ConditionReport:
    """Both conditions together; the first violation found is the witness."""
    f = as_boundary_fn(f, cfg)
    g = check_growth(f, grid)
    r = check_regularity(f, r_schedule, cfg)
    trace = [("growth", g.verdict), ("regularity", r.verdict)]
    details = {"growth": g, "regularity": r}
    if r.verdict == VIOLATED:
        return ConditionReport("membership", VIOLATED, {"regularity": r.witness}, trace, details)
    if g.verdict == VIOLATED:
        return ConditionReport("membership", VIOLATED, {"growth": g.witness}, trace, details)
    if g.verdict == SATISFIED and r.verdict == SATISFIED:
        return ConditionReport("membership", SATISFIED, None, trace, details)
    return ConditionReport("membership", INCONCLUSIVE, None, trace, details)


def hardy_lower_bound(f, ys=(1.0, 4.0, 16.0), cfg: QuadratureConfig = DEFAULT_CONFIG) -> list[tuple[float, float, float]]:
    """``(y, int |q(x+iy)| dx/(1+x**2), pi sqrt(y))`` for each ``y``."""
    f = as_boundary_fn(f)
    out = []
    for y in ys:

        def g(x, y=y):
            return np.abs(f(x + 1j * y)) / (1 + x * x)

        pts = _breakpoints(f, y, SHELLS[-1])
        v, _, _ = _shell_integral(g, pts, cfg)
        out.append((float(y), float(v), math.pi * math.sqrt(y)))
    return out


# --------------------------------------------------------------------------
# symmetry and zero-in-one-half-plane


def _default_grid(n: int = 100, seed: int = 7) -> np.ndarray:
    rng = np.random.default_rng(seed)
    x = rng.uniform(-10, 10, n)
    y = rng.uniform(0.05, 5, n)
    return x + 1j * y


def check_real_symmetry(f, grid=None, tol: float = 1e-9) -> ConditionReport:
    """``q(z) = conj(q(conj z))`` on ``grid`` (upper half-plane points)."""
    f = as_boundary_fn(f)
    z = np.asarray(_default_grid() if grid is None else grid, dtype=complex)
    z = np.where(z.imag < 0, z.conj(), z)
    up = f(z)
    lo = f(z.conj())
    err = np.abs(up - np.conj(lo)) / np.maximum(1.0, np.abs(up))
    k = int(np.argmax(err))
    trace = [("max_error", float(err[k]))]
    if err[k] <= tol:
        return ConditionReport("real-symmetry", SATISFIED, None, trace)
    return ConditionReport("real-symmetry", VIOLATED, complex(z[k]), trace)


def zero_transform(nu: ComplexMeasure, z, shift: complex) -> np.ndarray:
    """``int (t + shift)/(t - z) dnu(t) = nu(R) + (z + shift) S(z)``."""
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    return nu.mass() + (z + shift) * nu.stieltjes(z)


def check_zero_lower(
    D: DataTriple,
    grid=None,
    cfg: QuadratureConfig = DEFAULT_CONFIG,
    half: str = "lower",
    tol: float = 1e-8,
    b_tol: float = 0.0,
) -> ConditionReport:
    """Is the function of ``D`` identically zero in one half-plane?

    For the lower half-plane the conditions are ``b = 0``,
    ``a = (i/pi) nu(R)`` and ``int (t - i)/(t - z) dnu(t) = 0`` for ``z`` in
    the lower half-plane.  The upper variant uses ``a = -(i/pi) nu(R)`` and
    ``int (t + i)/(t - z) dnu(t) = 0`` for ``z`` in the upper half-plane.
    ``b`` is compared exactly unless ``b_tol`` is given.
    """
    if half not in ("lower", "upper"):
        raise ValueError("half must be 'lower' or 'upper'")
    sgn = 1 if half == "lower" else -1
    name = "zero-lower" if half == "lower" else "zero-upper"
    z = np.asarray(_default_grid() if grid is None else grid, dtype=complex)
    z = np.where(sgn * z.imag > 0, z.conj(), z)
    nu = D.measure
    m = nu.mass()
    trace = [("b", abs(D.b))]
    if abs(D.b) > b_tol:
        return ConditionReport(name, VIOLATED, {"b": D.b}, trace)
    a_target = sgn * 1j / math.pi * m
    a_err = abs(D.a - a_target)
    trace.append(("a_residual", a_err))
    if a_err > tol * max(1.0, abs(D.a)):
        return ConditionReport(name, VIOLATED, {"a": D.a, "expected": a_target}, trace)
    tr = np.abs(zero_transform(nu, z, -sgn * 1j))
    k = int(np.argmax(tr)) if tr.size else 0
    trace.append(("transform_max", float(tr[k]) if tr.size else 0.0))
    if tr.size and tr[k] > tol * max(1.0, total_scale(nu)):
        return ConditionReport(name, VIOLATED, complex(z[k]), trace)
    return ConditionReport(name, SATISFIED, None, trace)


def total_scale(nu: ComplexMeasure) -> float:
    """A cheap size of ``nu`` for relative tolerances (not the total variation)."""
    s = sum(abs(a.w) for a in nu.atoms)
    for d in nu.densities:
        s += d.num.norm() / max(d.den.norm(), 1e-300)
    return float(s)


def check_signed_zero_props(
    D: DataTriple, half: str | None = None, tol: float = 1e-8, cfg: QuadratureConfig = DEFAULT_CONFIG
) -> ConditionReport:
    """Consistency properties of data that vanish on one half-plane.

    (a) ``a = 0`` iff ``nu(R) = 0``; (b) a real nonzero ``nu`` forces
    ``a != 0``; (c) a real ``nu`` forces ``Re a = 0`` and ``nu = s Im(a) lambda~``
    with ``s = +1`` for the lower half-plane and ``s = -1`` for the upper one.
    ``half=None`` picks whichever half-plane passes :func:`check_zero_lower`.
    """
    if half is None:
        for h in ("lower", "upper"):
            if check_zero_lower(D, half=h, tol=tol, cfg=cfg).ok:
                half = h
                break
        else:
            return ConditionReport("signed-zero", INCONCLUSIVE, None, [], {"reason": "data does not vanish on a half-plane"})
    sgn = 1 if half == "lower" else -1
    nu = D.measure
    m = nu.mass()
    a_zero = abs(D.a) <= tol
    m_zero = abs(m) <= tol * max(1.0, total_scale(nu))
    trace = [("half", half), ("a", D.a), ("mass", m)]
    details: dict = {"half": half}
    details["a"] = a_zero == m_zero
    real_nu = all(a.w.imag == 0 for a in nu.atoms) and all(
        all(abs(c.imag) <= 1e-14 * max(d.num.norm(), 1e-300) for c in d.num.coeffs)
        and all(abs(c.imag) <= 1e-14 * max(d.den.norm(), 1e-300) for c in d.den.coeffs)
        for d in nu.densities
    )
    details["real_measure"] = real_nu
    if real_nu and not nu.is_empty:
        details["b"] = not a_zero
        target = lebesgue_tilde(sgn * D.a.imag)
        diff = linear_combine(1, nu, -1, target)
        dev = 0.0 if diff.is_empty else total_variation(diff, cfg)
        details["c"] = abs(D.a.real) <= tol and dev <= tol * max(1.0, abs(D.a))
        details["c_deviation"] = dev
    else:
        details["b"] = True
        details["c"] = True if nu.is_empty else None
    failed = [k for k in ("a", "b", "c") if details.get(k) is False]
    if failed:
        return ConditionReport("signed-zero", VIOLATED, {"failed": failed}, trace, details)
    return ConditionReport("signed-zero", SATISFIED, None, trace, details)
