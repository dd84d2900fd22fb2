"""Recovering the data triple of a quasi-Herglotz function from its values.

``a`` and ``b`` come from point and limit formulas, the density of ``nu`` from
the boundary jump ``(q(x+iy) - q(x-iy)) / (2i (1 + x**2))`` as ``y -> 0+``,
and point masses from ``lim (t0 - z) q(z)``.  All limits are taken along the
vertical ray with Richardson extrapolation (:mod:`qhkit.limits`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import CubicSpline

from .core import BoundaryFn, DataTriple, as_boundary_fn, eval_data
from .errors import BoundaryLimitError, RecoveryError, ValidationError
from .limits import DEFAULT_SCHEDULE, LimitResult, LimitSchedule, extrapolate
from .measure import Atom, ComplexMeasure, Density, QuadratureConfig
from .poly import Polynomial
from .quadrature import DEFAULT_CONFIG

__all__ = [
    "LimitSchedule",
    "extract_a",
    "extract_b",
    "extract_b_via_mass",
    "recover_density",
    "recover_atom",
    "higher_order_vanishing",
    "SamplingGrid",
    "Recovery",
    "recover",
    "recover_data",
]


def extract_a(f) -> complex:
    """``(q(i) + q(-i)) / 2``."""
    f = as_boundary_fn(f)
    v = f(np.array([1j, -1j]))
    return complex(0.5 * (v[0] + v[1]))


def extract_b_limit(f, sched: LimitSchedule = DEFAULT_SCHEDULE) -> LimitResult:
    """Limit of ``q(iR)/(iR)`` as ``R -> inf`` with ``R = 1/y``."""
    f = as_boundary_fn(f)
    return extrapolate(lambda y: f(1j / y) * y / 1j, sched)


def extract_b(f, sched: LimitSchedule = DEFAULT_SCHEDULE) -> complex:
    """``b = lim q(z)/z`` along the imaginary axis.

    Raises:
        LimitDivergence: the extrapolants do not settle within tolerance.
    """
    return extract_b_limit(f, sched).raise_if_diverged("q(iR)/(iR) as R -> inf").value


def extract_b_via_mass(f, nu: ComplexMeasure, cfg: QuadratureConfig = DEFAULT_CONFIG) -> complex:
    """``b = (q(i) - q(-i))/(2i) - nu(R)/pi`` for a known measure ``nu``."""
    f = as_boundary_fn(f)
    v = f(np.array([1j, -1j]))
    return complex((v[0] - v[1]) / 2j - nu.mass() / math.pi)


def recover_density(f, x, sched: LimitSchedule = DEFAULT_SCHEDULE) -> LimitResult:
    """Density of ``nu`` at the real point(s) ``x`` from the boundary jump.

    Returns a :class:`LimitResult`; entries with ``converged`` false mark
    points where the limit did not settle (an atom, a jump of the density, or
    a function that is not quasi-Herglotz).  ``x`` may be an array.
    """
    f = as_boundary_fn(f)
    xa = np.atleast_1d(np.asarray(x, dtype=float))
    w = 2j * (1 + xa * xa)

    def g(y):
        zu = xa[None, :] + 1j * y[:, None]
        jump = f(zu) - f(zu.conj())
        return jump / w[None, :]

    res = extrapolate(g, sched)
    if np.ndim(x) == 0:
        return LimitResult(complex(res.value[0]), float(res.error[0]), bool(res.converged[0]), res.trace)
    return res


def _vertical_limit(f: BoundaryFn, t0: float, m: int, sign: int, sched: LimitSchedule) -> LimitResult:
    # (t0 - z)^m q(z) along z = t0 + sign*i*y
    return extrapolate(lambda y: (-sign * 1j * y) ** m * f(t0 + sign * 1j * y), sched)


def recover_atom(f, t0: float, sched: LimitSchedule = DEFAULT_SCHEDULE, tol: float | None = None) -> complex:
    """Point mass ``nu({t0})`` from ``lim (t0 - z) q(z)``.

    The limit equals ``(1 + t0**2) nu({t0}) / pi`` for the representation
    with the ``1/pi`` prefactor.  Both vertical approaches are computed and
    must agree.

    Raises:
        LimitDivergence: a one-sided limit does not settle.
        BoundaryLimitError: the two one-sided limits differ.
    """
    f = as_boundary_fn(f)
    t0 = float(t0)
    up = _vertical_limit(f, t0, 1, 1, sched).raise_if_diverged(f"upper limit at t={t0:g}")
    lo = _vertical_limit(f, t0, 1, -1, sched).raise_if_diverged(f"lower limit at t={t0:g}")
    if tol is None:
        tol = 10 * (sched.abs_tol + sched.rel_tol * max(abs(up.value), abs(lo.value)))
    if abs(up.value - lo.value) > tol:
        raise BoundaryLimitError(
            f"upper and lower limits of (t0 - z) q(z) differ at t0={t0:g}: {up.value:.6g} vs {lo.value:.6g}",
            t0,
            up.value,
            lo.value,
        )
    val = 0.5 * (up.value + lo.value)
    w = math.pi / (1 + t0 * t0) * val
    if abs(w) <= tol * math.pi / (1 + t0 * t0):
        return 0j
    return complex(w)


def higher_order_vanishing(f, t0: float, m: int, sched: LimitSchedule = DEFAULT_SCHEDULE) -> complex:
    """``lim (t0 - z)^m q(z)`` from above; zero for quasi-Herglotz ``q`` when ``m >= 2``."""
    if m < 2:
        raise ValueError("m must be at least 2")
    f = as_boundary_fn(f)
    return _vertical_limit(f, float(t0), m, 1, sched).raise_if_diverged(f"(t0 - z)^{m} q(z)").value


# --------------------------------------------------------------------------
# full recovery


TAIL_MODELS = ("auto", "asymptotic", "inverse-square", "none")


@dataclass(frozen=True)
class SamplingGrid:
    """Where and how to sample the density.

    ``tail`` selects the model for ``|t|`` beyond the window:

    * ``"none"``: density is zero outside ``[lo, hi]``;
    * ``"inverse-square"``: ``rho(edge) (1 + edge**2)/(1 + t**2)``;
    * ``"asymptotic"``: least-squares fit of ``sum_k (A_k + B_k t)/(t**2 + a_k**2)``
      (eight fixed scales ``a_k`` proportional to the edge) to density samples
      out to ``1000 * edge``;
    * ``"auto"``: asymptotic if that fit is good, else none.
    """

    lo: float = -20.0
    hi: float = 20.0
    step: float = 0.05
    atoms: tuple[float, ...] = ()
    tail: str = "auto"
    validation_tol: float = 1e-3

    def __post_init__(self):
        if not (math.isfinite(self.lo) and math.isfinite(self.hi) and self.lo < self.hi):
            raise ValidationError("sampling window needs finite lo < hi")
        if not self.step > 0:
            raise ValidationError("sampling step must be positive")
        if (self.hi - self.lo) / self.step > 200_000:
            raise ValidationError("sampling grid too fine")
        if self.tail not in TAIL_MODELS:
            raise ValidationError(f"tail model must be one of {TAIL_MODELS}")
        object.__setattr__(self, "atoms", tuple(float(t) for t in self.atoms))

    def nodes(self) -> np.ndarray:
        n = int(round((self.hi - self.lo) / self.step))
        return np.linspace(self.lo, self.hi, n + 1)


@dataclass
class Recovery:
    data: DataTriple
    residual: float
    residual_map: list = field(default_factory=list)
    flagged: list = field(default_factory=list)
    tail: str = "none"
    b_error: float = 0.0


def _spline_pieces(x: np.ndarray, rho: np.ndarray) -> list[Density]:
    sp = CubicSpline(x, rho)
    out = []
    for k in range(len(x) - 1):
        c = sp.c[:, k]
        local = Polynomial((c[3], c[2], c[1], c[0]))
        glob = local.shift(-x[k])
        if not glob.is_zero:
            out.append(Density.bump(x[k], x[k + 1], glob.coeffs))
    return out


_INV_SQ = (1.0, 0.0, 1.0)
_TAIL_SCALES = (0.1, 0.2, 0.35, 0.6, 1.0, 2.0, 4.0, 8.0)


def _tail_pieces(f: BoundaryFn, edge: float, rho_edge: complex, side: int, model: str, sched) -> tuple[list[Density], str]:
    lo, hi = (edge, math.inf) if side > 0 else (-math.inf, edge)
    if model == "none":
        return [], "none"
    if model == "inverse-square":
        c = rho_edge * (1 + edge * edge)
        return [Density.piece((c,), _INV_SQ, lo, hi)], "inverse-square"
    # least-squares fit on a geometric ray beyond the edge by
    # sum_k (A_k + B_k t)/(t^2 + a_k^2) with sum_k B_k = 0 (so rho = O(t^-2));
    # distinct simple poles keep both the root finder and the transforms tame
    e = max(abs(edge), 1.0)
    scales = e * np.array(_TAIL_SCALES)
    t = side * e * np.geomspace(1.0, 1e3, 40)
    t[0] = edge
    res = recover_density(f, t, sched)
    rho = np.asarray(res.value)
    cols = []
    for a in scales:
        cols.append(t * t / (t * t + a * a))
    for a in scales[:-1]:
        # B_k t/(t^2 + a_k^2) - B_k t/(t^2 + a_last^2)
        cols.append(t * t * (t / (t * t + a * a) - t / (t * t + scales[-1] ** 2)) * e / 1.0)
    A = np.stack(cols, axis=1).astype(complex)
    rhs = rho * t * t
    coef, *_ = np.linalg.lstsq(A, rhs, rcond=None)
    fit = A @ coef
    scale = max(float(np.max(np.abs(rhs))), 1e-300)
    misfit = float(np.max(np.abs(fit - rhs))) / scale
    good = bool(np.all(res.converged)) and misfit <= 1e-4
    if not good:
        if model == "asymptotic":
            raise RecoveryError(
                f"asymptotic tail fit failed beyond t={edge:g} (relative misfit {misfit:.2e})", misfit
            )
        return [], "none"
    n = len(scales)
    Acoef = coef[:n]
    Bcoef = np.concatenate([coef[n:] * e, [-np.sum(coef[n:] * e)]])
    factors = [Polynomial((a * a, 0, 1)) for a in scales]
    den = Polynomial((1,))
    for fac in factors:
        den = den * fac
    num = Polynomial(())
    for k in range(n):
        rest = Polynomial((1,))
        for j, fac in enumerate(factors):
            if j != k:
                rest = rest * fac
        num = num + Polynomial((Acoef[k], Bcoef[k])) * rest
    # the t^(2n-1) coefficient is sum_k B_k = 0 up to rounding
    return [Density.piece(num.coeffs[: 2 * n - 1], den.coeffs, lo, hi)], "asymptotic"


def _atom_kernel_sum(atoms, z: np.ndarray) -> np.ndarray:
    out = np.zeros_like(z)
    for a in atoms:
        out = out + a.w * (1 + a.t * z) / (a.t - z)
    return out / math.pi


def recover(
    f,
    grid: SamplingGrid = SamplingGrid(),
    sched: LimitSchedule = DEFAULT_SCHEDULE,
    cfg: QuadratureConfig = DEFAULT_CONFIG,
) -> Recovery:
    """Recover ``(a, b, nu)`` and validate it against ``f``.

    Raises:
        LimitDivergence: ``b`` or an atom limit does not converge.
        RecoveryError: the reconstruction misses ``f`` on the validation grid
            by more than ``grid.validation_tol``; the exception carries the
            residual map and the recovered data.
    """
    f = as_boundary_fn(f, cfg)
    a = extract_a(f)
    bres = extract_b_limit(f, sched).raise_if_diverged("q(iR)/(iR) as R -> inf")
    b = bres.value
    atoms = []
    for t0 in grid.atoms:
        w = recover_atom(f, t0, sched)
        if w != 0:
            atoms.append(Atom(t0, w))

    def residual_fn(z):
        return f(z) - a - b * z - _atom_kernel_sum(atoms, z)

    from .core import Custom

    g = Custom(residual_fn)
    x = grid.nodes()
    res = recover_density(g, x, sched)
    rho = np.asarray(res.value)
    ok = np.asarray(res.converged) & np.isfinite(rho)
    flagged = [float(v) for v in x[~ok]]
    if ok.sum() < 4:
        raise RecoveryError("too few density samples converged", math.inf, [(v, math.inf) for v in flagged])
    xs, rs = x[ok], rho[ok]
    dens: list[Density] = []
    if np.max(np.abs(rs)) > 10 * sched.abs_tol:
        dens += _spline_pieces(xs, rs)
    tails = []
    for edge, r_edge, side in ((xs[-1], rs[-1], 1), (xs[0], rs[0], -1)):
        if not dens and grid.tail != "asymptotic":
            continue
        pieces, used = _tail_pieces(g, float(edge), complex(r_edge), side, grid.tail, sched)
        dens += pieces
        tails.append(used)
    data = DataTriple(a, b, ComplexMeasure(tuple(atoms), tuple(dens)))

    # validation off the sampling nodes, in both half-planes, away from the
    # window edges where a truncated tail leaves a logarithmic trace
    mids = 0.5 * (x[:-1] + x[1:])
    margin = 0.05 * (grid.hi - grid.lo)
    inner = mids[(mids > grid.lo + margin) & (mids < grid.hi - margin)]
    if len(inner) >= 4:
        mids = inner
    if len(mids) > 64:
        mids = mids[np.linspace(0, len(mids) - 1, 64).round().astype(int)]
    zv = np.concatenate([mids + 1j * y for y in (0.5, 2.0, -0.5, -2.0)])
    fv = f(zv)
    qv = np.asarray(eval_data(data, zv, cfg), dtype=complex)
    # the kernel carries a factor 1 + z**2, so errors in nu are compared on that scale
    err = np.abs(fv - qv) / (np.maximum(1.0, np.abs(fv)) * (1 + np.abs(zv) ** 2))
    residual = float(np.max(err))
    rmap = [(complex(z), float(e)) for z, e in zip(zv, err)]
    tail_used = "/".join(sorted(set(tails))) if tails else "none"
    out = Recovery(data, residual, rmap, flagged, tail_used, float(bres.error))
    if not residual <= grid.validation_tol:
        raise RecoveryError(
            f"recovered data misses the function by {residual:.3e} (threshold {grid.validation_tol:.1e})",
            residual,
            rmap,
            data,
        )
    return out


def recover_data(
    f,
    grid: SamplingGrid = SamplingGrid(),
    sched: LimitSchedule = DEFAULT_SCHEDULE,
    cfg: QuadratureConfig = DEFAULT_CONFIG,
) -> DataTriple:
    """:func:`recover` returning only the data triple."""
    return recover(f, grid, sched, cfg).data
