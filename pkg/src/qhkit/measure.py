"""Finite complex Borel measures on the real line.

A :class:`ComplexMeasure` is a finite list of point masses plus closed-form
density components.  Every density component is a :class:`Density`

* ``rational``: ``N(t)/D(t)`` on an interval (the whole line by default),
* ``trig``: ``sin(w t) N(t)/D(t)`` or ``cos(w t) N(t)/D(t)`` on the line,
* ``bump``: a polynomial on a bounded interval.

Besides numeric integration against arbitrary integrands, every component
has an exact Stieltjes transform ``S(s) = int rho(t)/(t - s) dt`` built from
partial fractions, logarithms and residues.  The representation integral of
a quasi-Herglotz function is ``z * mass + (1 + z**2) * S(z)``, so this is the
work-horse of evaluation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import QuadratureError, ValidationError
from .poly import Polynomial, partial_fractions, poly_gcd
from .quadrature import DEFAULT_CONFIG, QuadratureConfig, fourier_tail, gauss_legendre, integrate

__all__ = [
    "Atom",
    "Density",
    "ComplexMeasure",
    "QuadratureConfig",
    "total_variation",
    "mass",
    "integrate_kernel",
    "linear_combine",
    "conjugate_measure",
    "real_imag_parts",
    "lebesgue_tilde",
    "dirac",
    "REAL_ROOT_TOL",
]

REAL_ROOT_TOL = 1e-9
ATOM_MERGE_TOL = 1e-12
_ONE = Polynomial((1,))


def _finite_complex(w) -> complex:
    w = complex(w)
    if not (math.isfinite(w.real) and math.isfinite(w.imag)):
        raise ValidationError("complex scalars must be finite")
    return w


def _is_real_root(r: complex) -> bool:
    return abs(r.imag) <= REAL_ROOT_TOL * (1 + abs(r))


def same_location(t1: float, t2: float) -> bool:
    return abs(t1 - t2) <= ATOM_MERGE_TOL * max(1.0, abs(t1))


@dataclass(frozen=True)
class Atom:
    """Point mass ``w * delta_t``."""

    t: float
    w: complex

    def __post_init__(self):
        t = float(self.t)
        if not math.isfinite(t):
            raise ValidationError("atom location must be finite")
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "w", _finite_complex(self.w))


# --------------------------------------------------------------------------
# density components


def _log_reg(x_end: float, s: np.ndarray) -> np.ndarray:
    """``Log(x_end - s)`` with the divergent ``log|x_end|`` dropped at infinite ends.

    For ``x_end = +inf`` the regularised value is 0; for ``x_end = -inf`` it is
    the limiting argument ``-i pi sign(Im s)`` (``+i pi`` when ``s`` is real).
    The dropped constants cancel whenever the combination being integrated
    decays like ``t**-2``.
    """
    if x_end == math.inf:
        return np.zeros_like(s)
    if x_end == -math.inf:
        return np.where(s.imag > 0, -1j * np.pi, 1j * np.pi)
    return np.log(x_end - s)


def _power_int(lo: float, hi: float, s: np.ndarray, j: int) -> np.ndarray:
    """``int_lo^hi (t - s)**(-j) dt`` (regularised for j = 1 at infinite ends)."""
    if j == 1:
        return _log_reg(hi, s) - _log_reg(lo, s)
    out = np.zeros_like(s)
    if math.isfinite(hi):
        out = out + (hi - s) ** (1 - j) / (1 - j)
    if math.isfinite(lo):
        out = out - (lo - s) ** (1 - j) / (1 - j)
    return out


def _exp_power_int(sigma: float, s: np.ndarray, j: int) -> np.ndarray:
    """``int_R exp(i sigma t) (t - s)**(-j) dt`` by residues (Jordan's lemma)."""
    out = np.zeros_like(s)
    inside = s.imag > 0 if sigma > 0 else s.imag < 0
    if not inside.any():
        return out
    sign = 1 if sigma > 0 else -1
    ss = s[inside]
    out[inside] = sign * 2j * np.pi * (1j * sigma) ** (j - 1) * np.exp(1j * sigma * ss) / math.factorial(j - 1)
    return out


@dataclass(frozen=True)
class Density:
    """One absolutely continuous component of a measure.

    ``trig`` is ``None``, ``"sin"`` or ``"cos"``; with a trig factor the
    density is ``trig(omega * t) * num(t) / den(t)`` on the whole line.
    Without it, the density is ``num(t)/den(t)`` restricted to ``[lo, hi]``.
    """

    num: Polynomial
    den: Polynomial = _ONE
    lo: float = -math.inf
    hi: float = math.inf
    trig: str | None = None
    omega: float = 0.0

    def __post_init__(self):
        num = self.num if isinstance(self.num, Polynomial) else Polynomial(self.num)
        den = self.den if isinstance(self.den, Polynomial) else Polynomial(self.den)
        if den.is_zero:
            raise ValidationError("density denominator is the zero polynomial")
        # normalise the denominator to be monic
        lead = den.lead
        num, den = num / lead, den / lead
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)
        object.__setattr__(self, "lo", float(self.lo))
        object.__setattr__(self, "hi", float(self.hi))
        omega = float(self.omega)
        if self.trig is not None and omega < 0:
            omega = -omega
            if self.trig == "sin":
                num = -num
        if self.trig == "cos" and omega == 0:
            object.__setattr__(self, "trig", None)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "omega", omega)
        self._validate()

    # constructors -----------------------------------------------------------
    @classmethod
    def rational(cls, num, den) -> "Density":
        return cls(Polynomial(num), Polynomial(den))

    @classmethod
    def trigonometric(cls, phase: str, omega: float, num, den) -> "Density":
        if phase not in ("sin", "cos"):
            raise ValidationError(f"trig phase must be 'sin' or 'cos', got {phase!r}")
        return cls(Polynomial(num), Polynomial(den), trig=phase, omega=omega)

    @classmethod
    def bump(cls, lo: float, hi: float, coeffs) -> "Density":
        return cls(Polynomial(coeffs), _ONE, lo, hi)

    @classmethod
    def piece(cls, num, den, lo: float, hi: float) -> "Density":
        return cls(Polynomial(num), Polynomial(den), lo, hi)

    # validation ---------------------------------------------------------------
    def _validate(self):
        lo, hi = self.lo, self.hi
        if math.isnan(lo) or math.isnan(hi) or not lo < hi:
            raise ValidationError(f"density support needs lo < hi, got [{lo}, {hi}]")
        if self.trig is not None:
            if self.trig not in ("sin", "cos"):
                raise ValidationError(f"unknown trig phase {self.trig!r}")
            if not math.isfinite(self.omega):
                raise ValidationError("trig frequency must be finite")
            if math.isfinite(lo) or math.isfinite(hi):
                raise ValidationError("trig densities live on the whole line")
        infinite = not (math.isfinite(lo) and math.isfinite(hi))
        if infinite and not self.num.is_zero and self.num.degree > self.den.degree - 2:
            raise ValidationError(
                "density on an unbounded interval needs deg(num) <= deg(den) - 2 (finite measure)"
            )
        if self.den.degree >= 1:
            for r, _m in self.den.roots():
                if _is_real_root(r) and lo - 1e-12 <= r.real <= hi + 1e-12:
                    raise ValidationError(f"density denominator vanishes on the support at t={r.real:g}")

    # descriptive --------------------------------------------------------------
    @property
    def kind(self) -> str:
        if self.trig is not None:
            return "trig"
        if self.den.degree == 0 and math.isfinite(self.lo) and math.isfinite(self.hi):
            return "bump"
        return "rational"

    @property
    def is_zero(self) -> bool:
        if self.num.is_zero:
            return True
        return self.trig == "sin" and self.omega == 0

    def key(self):
        """Components with equal keys can be merged by adding numerators."""
        return (self.den.coeffs, self.lo, self.hi, self.trig, self.omega)

    def scaled(self, c: complex) -> "Density":
        return replace(self, num=self.num * c)

    def conj(self) -> "Density":
        return replace(self, num=self.num.conj(), den=self.den.conj())

    def breakpoints(self) -> list[float]:
        return [x for x in (self.lo, self.hi) if math.isfinite(x)]

    def pole_scale(self) -> float:
        if self.den.degree < 1:
            return 1.0
        return 1.0 + max(abs(r) for r, _ in self.den.roots())

    def reduced(self, tol: float = 1e-10) -> "Density":
        """Cancel approximate common factors of numerator and denominator."""
        if self.den.degree < 1 or self.num.is_zero:
            return self
        g = poly_gcd(self.num, self.den, tol)
        if g.degree < 1:
            return self
        return replace(self, num=self.num // g, den=self.den // g)

    # pointwise ------------------------------------------------------------------
    def __call__(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        with np.errstate(all="ignore"):
            val = self.num(t) / self.den(t)
        if self.trig == "sin":
            val = val * np.sin(self.omega * t)
        elif self.trig == "cos":
            val = val * np.cos(self.omega * t)
        # half-open so that abutting pieces do not double count shared nodes
        inside = (t >= self.lo) & ((t < self.hi) | (self.hi == math.inf))
        out = np.where(inside, val, 0)
        return out if np.ndim(out) else complex(out)

    # exact transforms -----------------------------------------------------------
    @cached_property
    def _pf(self):
        return partial_fractions(self.num, self.den)

    @cached_property
    def _roots(self) -> np.ndarray:
        return np.array([r for r, _ in self._pf.terms], dtype=complex)

    def _poly_mass(self, p: Polynomial) -> complex:
        if p.is_zero:
            return 0j
        P = p.antiderivative()
        return complex(P(self.hi) - P(self.lo))

    def _poly_stieltjes(self, p: Polynomial, s: np.ndarray) -> np.ndarray:
        """``int_lo^hi p(t)/(t - s) dt`` on a bounded interval."""
        if p.is_zero:
            return np.zeros_like(s)
        c = 0.5 * (self.lo + self.hi)
        h = 0.5 * (self.hi - self.lo)
        pl = p.shift(c)
        w = s - c
        x = w / h
        rho = np.abs(x + np.sqrt(x - 1) * np.sqrt(x + 1))
        rho = np.maximum(rho, 1 / np.maximum(rho, 1e-300))
        far = rho >= 3.0
        out = np.empty_like(s)
        if far.any():
            u, wt = gauss_legendre(24)
            wf = w[far]
            vals = pl(h * u)  # (24,)
            out[far] = np.sum(wt[None, :] * vals[None, :] / (h * u[None, :] - wf[:, None]), axis=1) * h
        near = ~far
        if near.any():
            wn = w[near]
            coeffs = pl.coeffs
            n = len(coeffs) - 1
            # synthetic division p(u) = q(u)(u - w) + p(w), vectorised in w
            q = np.zeros((n, len(wn)), dtype=complex)
            acc = np.full(len(wn), coeffs[-1], dtype=complex)
            for k in range(n - 1, -1, -1):
                q[k] = acc
                acc = coeffs[k] + wn * acc
            pw = acc
            integral_q = np.zeros(len(wn), dtype=complex)
            for k in range(n):
                integral_q += q[k] * (h ** (k + 1) - (-h) ** (k + 1)) / (k + 1)
            out[near] = integral_q + pw * (np.log(h - wn) - np.log(-h - wn))
        return out

    def _proper_terms(self):
        return self._pf.terms

    def _rational_mass(self) -> complex:
        total = self._poly_mass(self._pf.poly)
        for r, cs in self._proper_terms():
            rr = np.array([r])
            for k, ck in enumerate(cs, start=1):
                total += ck * complex(_power_int(self.lo, self.hi, rr, k)[0])
        return total

    def _rational_stieltjes(self, s: np.ndarray) -> np.ndarray:
        out = self._poly_stieltjes(self._pf.poly, s)
        if not self._pf.terms:
            return out
        proper = np.zeros_like(s)
        for r, cs in self._proper_terms():
            rr = np.array([r])
            F = [complex(_power_int(self.lo, self.hi, rr, j)[0]) for j in range(1, len(cs) + 1)]
            inv = 1.0 / (s - r)
            for k, ck in enumerate(cs, start=1):
                proper += ck * inv**k * _power_int(self.lo, self.hi, s, 1)
                for j in range(1, k + 1):
                    proper -= ck * inv ** (k - j + 1) * F[j - 1]
        return out + proper

    def _exp_parts(self):
        """Decompose a trig density as ``sum coef * exp(i sigma t) * R(t)``."""
        w = self.omega
        if self.trig == "sin":
            return [(w, 1 / 2j), (-w, -1 / 2j)]
        return [(w, 0.5), (-w, 0.5)]

    def _trig_mass(self) -> complex:
        total = 0j
        for sigma, coef in self._exp_parts():
            for r, cs in self._proper_terms():
                rr = np.array([r])
                for k, ck in enumerate(cs, start=1):
                    total += coef * ck * complex(_exp_power_int(sigma, rr, k)[0])
        return total

    def _trig_stieltjes(self, s: np.ndarray) -> np.ndarray:
        out = np.zeros_like(s)
        Rs = self._pf(s) if s.size else s
        for sigma, coef in self._exp_parts():
            part = Rs * _exp_power_int(sigma, s, 1)
            for r, cs in self._proper_terms():
                rr = np.array([r])
                J = [complex(_exp_power_int(sigma, rr, j)[0]) for j in range(1, len(cs) + 1)]
                inv = 1.0 / (s - r)
                for k, ck in enumerate(cs, start=1):
                    for j in range(1, k + 1):
                        part -= ck * inv ** (k - j + 1) * J[j - 1]
            out += coef * part
        return out

    def mass(self) -> complex:
        """Exact ``int rho(t) dt``."""
        if self.is_zero:
            return 0j
        if self.trig is not None:
            return self._trig_mass()
        return self._rational_mass()

    def _raw_stieltjes(self, s: np.ndarray) -> np.ndarray:
        if self.trig is not None:
            return self._trig_stieltjes(s)
        return self._rational_stieltjes(s)

    def stieltjes(self, s) -> np.ndarray:
        """Exact ``int rho(t)/(t - s) dt`` for non-real ``s`` (vectorised).

        Close to a pole of the density the partial-fraction formula cancels
        badly although the transform itself is analytic there; such points
        are evaluated as the mean over a circle around them (mean value
        property), which converges geometrically.
        """
        s = np.atleast_1d(np.asarray(s, dtype=complex))
        if self.is_zero:
            return np.zeros_like(s)
        with np.errstate(all="ignore"):
            out = self._raw_stieltjes(s)
        roots = self._roots
        if roots.size:
            dist = np.min(np.abs(s[:, None] - roots[None, :]), axis=1)
            bad = dist < 0.1 * np.abs(s.imag)
            if bad.any():
                sb = s[bad]
                n = 64
                ang = np.exp(2j * np.pi * (np.arange(n) + 0.5) / n)
                ring = sb[:, None] + 0.5 * np.abs(sb.imag)[:, None] * ang[None, :]
                vals = self._raw_stieltjes(ring.ravel()).reshape(ring.shape)
                out[bad] = vals.mean(axis=1)
        return out


def _default_tail_start(dens: Sequence[Density]) -> float:
    scale = max([d.pole_scale() for d in dens] + [1.0])
    for d in dens:
        if not d.num.is_zero and d.num.degree >= 1:
            for r, _ in d.num.roots():
                if _is_real_root(r):
                    scale = max(scale, 1 + abs(r.real))
    return max(200.0, 20 * scale)


# --------------------------------------------------------------------------
# measure


@dataclass(frozen=True)
class ComplexMeasure:
    """Atoms plus density components; immutable and hashable by identity."""

    atoms: tuple[Atom, ...] = ()
    densities: tuple[Density, ...] = ()

    def __post_init__(self):
        atoms = sorted((a if isinstance(a, Atom) else Atom(*a) for a in self.atoms), key=lambda a: a.t)
        merged: list[Atom] = []
        for a in atoms:
            if merged and same_location(merged[-1].t, a.t):
                raise ValidationError(f"duplicate atom location t={a.t:g}")
            merged.append(a)
        object.__setattr__(self, "atoms", tuple(a for a in merged if a.w != 0))
        dens = tuple(d for d in self.densities if not d.is_zero)
        for d in dens:
            if not isinstance(d, Density):
                raise ValidationError("densities must be Density instances")
        object.__setattr__(self, "densities", dens)

    @property
    def is_empty(self) -> bool:
        return not self.atoms and not self.densities

    def density(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        out = np.zeros(t.shape, dtype=complex)
        for d in self.densities:
            out = out + d(t)
        return out

    def mass(self) -> complex:
        return complex(sum((a.w for a in self.atoms), 0j) + sum((d.mass() for d in self.densities), 0j))

    def stieltjes(self, s) -> np.ndarray:
        """``int dnu(t)/(t - s)`` for non-real ``s`` (exact, vectorised)."""
        s = np.atleast_1d(np.asarray(s, dtype=complex))
        out = np.zeros_like(s)
        for a in self.atoms:
            out = out + a.w / (a.t - s)
        for d in self.densities:
            out = out + d.stieltjes(s)
        return out

    def breakpoints(self) -> list[float]:
        pts = {a.t for a in self.atoms}
        for d in self.densities:
            pts.update(d.breakpoints())
        return sorted(pts)

    def scaled(self, c: complex) -> "ComplexMeasure":
        return linear_combine(c, self, 0, ComplexMeasure())

    def __add__(self, other: "ComplexMeasure") -> "ComplexMeasure":
        return linear_combine(1, self, 1, other)

    def __sub__(self, other: "ComplexMeasure") -> "ComplexMeasure":
        return linear_combine(1, self, -1, other)


def lebesgue_tilde(scale: complex = 1.0) -> ComplexMeasure:
    """``scale * dt/(1 + t**2)``."""
    return ComplexMeasure((), (Density.rational((scale,), (1, 0, 1)),))


def dirac(t: float, w: complex = 1.0) -> ComplexMeasure:
    return ComplexMeasure((Atom(t, w),), ())


# --------------------------------------------------------------------------
# operations


def mass(nu: ComplexMeasure, cfg: QuadratureConfig = DEFAULT_CONFIG) -> complex:
    """Total mass ``nu(R)`` (closed form; ``cfg`` kept for interface symmetry)."""
    return nu.mass()


def linear_combine(alpha: complex, nu1: ComplexMeasure, beta: complex, nu2: ComplexMeasure) -> ComplexMeasure:
    """``alpha * nu1 + beta * nu2`` with atoms merged and like densities summed."""
    alpha, beta = complex(alpha), complex(beta)
    atoms: list[list] = []
    for c, nu in ((alpha, nu1), (beta, nu2)):
        if c == 0:
            continue
        for a in nu.atoms:
            for slot in atoms:
                if same_location(slot[0], a.t):
                    slot[1] += c * a.w
                    slot[2] = max(slot[2], abs(c * a.w))
                    break
            else:
                atoms.append([a.t, c * a.w, abs(c * a.w)])
    out_atoms = tuple(Atom(t, w) for t, w, ref in atoms if abs(w) > 1e-14 * ref)

    groups: dict = {}
    order = []
    for c, nu in ((alpha, nu1), (beta, nu2)):
        if c == 0:
            continue
        for d in nu.densities:
            k = d.key()
            if k in groups:
                prev, ref = groups[k]
                groups[k] = (replace(prev, num=prev.num + d.num * c), max(ref, (d.num * c).norm()))
            else:
                groups[k] = (d.scaled(c), (d.num * c).norm())
                order.append(k)
    dens = []
    for k in order:
        d, ref = groups[k]
        cleaned = Polynomial(x if abs(x) > 1e-14 * ref else 0 for x in d.num.coeffs)
        if not cleaned.is_zero:
            dens.append(replace(d, num=cleaned))
    return ComplexMeasure(out_atoms, tuple(dens))


def conjugate_measure(nu: ComplexMeasure) -> ComplexMeasure:
    """Conjugate every weight and coefficient."""
    return ComplexMeasure(
        tuple(Atom(a.t, a.w.conjugate()) for a in nu.atoms),
        tuple(d.conj() for d in nu.densities),
    )


def _split_density(d: Density) -> tuple[Density | None, Density | None]:
    den = d.den
    if all(c.imag == 0 for c in den.coeffs):
        re = replace(d, num=d.num.real_part())
        im = replace(d, num=d.num.imag_part())
    else:
        dbar = den.conj()
        common = (den * dbar).real_part()
        nd = d.num * dbar
        re = replace(d, num=nd.real_part(), den=common)
        im = replace(d, num=nd.imag_part(), den=common)
    return (None if re.is_zero else re), (None if im.is_zero else im)


def real_imag_parts(nu: ComplexMeasure) -> tuple[ComplexMeasure, ComplexMeasure]:
    """Split ``nu = qRe + i * qIm`` into two real (signed) measures."""
    re_atoms = tuple(Atom(a.t, a.w.real) for a in nu.atoms if a.w.real != 0)
    im_atoms = tuple(Atom(a.t, a.w.imag) for a in nu.atoms if a.w.imag != 0)
    re_d, im_d = [], []
    for d in nu.densities:
        r, i = _split_density(d)
        if r is not None:
            re_d.append(r)
        if i is not None:
            im_d.append(i)
    return ComplexMeasure(re_atoms, tuple(re_d)), ComplexMeasure(im_atoms, tuple(im_d))


def _trig_groups(dens: Sequence[Density]):
    return sorted({abs(d.omega) for d in dens if d.trig is not None and d.omega != 0})


def _panel_points(omegas: Sequence[float], T: float, max_panels: int = 4000) -> list[float]:
    pts: set[float] = set()
    for w in omegas:
        step = max(math.pi / w, 2 * T / max_panels)
        n = int(T / step)
        pts.update((k * step for k in range(-n, n + 1)))
    return sorted(pts)


def integrate_kernel(
    nu: ComplexMeasure,
    f: Callable[[np.ndarray], np.ndarray],
    cfg: QuadratureConfig = DEFAULT_CONFIG,
    points: Iterable[float] = (),
    tail_start: float | None = None,
):
    """``sum w_k f(t_k) + sum_j int f(t) rho_j(t) dt`` by adaptive quadrature.

    ``f`` is vectorised and may return ``(n, m)`` arrays for ``m`` integrands at
    once.  Non-oscillatory components share one mesh on the line; trig
    components are integrated panel-wise on ``[-T, T]`` (panels at multiples
    of ``pi/omega``) with the tails from the asymptotic series of
    :func:`fourier_tail`.
    """
    points = list(points)
    total = None

    def _acc(v):
        nonlocal total
        v = np.asarray(v, dtype=complex)
        total = v if total is None else total + v

    for a in nu.atoms:
        fv = np.asarray(f(np.array([a.t])), dtype=complex)
        if not np.all(np.isfinite(fv)):
            raise QuadratureError(f"integrand not finite at atom t={a.t:g}")
        _acc(a.w * fv[0])

    plain = [d for d in nu.densities if d.trig is None]
    trig = [d for d in nu.densities if d.trig is not None]
    if plain:
        lo = min(d.lo for d in plain)
        hi = max(d.hi for d in plain)
        bps = set(points)
        for d in plain:
            bps.update(d.breakpoints())

        def g(t):
            fv = np.asarray(f(t), dtype=complex)
            rho = sum(d(t) for d in plain)
            return fv * (rho[:, None] if fv.ndim == 2 else rho)

        v, _ = integrate(g, lo, hi, cfg, sorted(bps))
        _acc(v)
    for d in trig:
        T = tail_start if tail_start is not None else _default_tail_start([d])
        pts = _panel_points([abs(d.omega)], T) + [p for p in points if -T < p < T]

        def g(t, d=d):
            fv = np.asarray(f(t), dtype=complex)
            rho = d(t)
            return fv * (rho[:, None] if fv.ndim == 2 else rho)

        v, _ = integrate(g, -T, T, cfg, pts)
        _acc(v)
        for sigma, coef in d._exp_parts():

            def h(t, coef=coef, d=d):
                fv = np.asarray(f(t), dtype=complex)
                R = d.num(t) / d.den(t) * coef
                return fv * (R[:, None] if fv.ndim == 2 else R)

            _acc(fourier_tail(h, sigma, T, 1))
            _acc(fourier_tail(h, sigma, T, -1))
    if total is None:
        probe = np.asarray(f(np.array([0.0])), dtype=complex)
        return np.zeros(probe.shape[1:], dtype=complex) if probe.ndim == 2 else 0j
    return total if total.ndim else complex(total)


def _abs_trig_tail(d: Density, T: float, cfg: QuadratureConfig, harmonics: int = 64) -> float:
    """``int_{|t|>T} |trig(w t)| |R(t)| dt`` via the Fourier series of |sin|, |cos|."""
    w = abs(d.omega)

    def g(t):
        return np.abs(d.num(t) / d.den(t))

    total = 0.0
    for lo, hi, side in ((-math.inf, -T, -1), (T, math.inf, 1)):
        base, _ = integrate(lambda t: g(t).astype(complex), lo, hi, cfg)
        s = 2 / math.pi * base.real
        for k in range(1, harmonics + 1):
            ck = 4 / math.pi / (4 * k * k - 1)
            if d.trig == "cos":
                ck = ck * (-1) ** (k + 1)
            else:
                ck = -ck
            s += ck * fourier_tail(g, 2 * k * w, T, side).real
        total += s
    return total


def total_variation(nu: ComplexMeasure, cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """``|nu|(R)``: sum of atom moduli plus ``int |sum_j rho_j(t)| dt``.

    Components are summed pointwise before taking the modulus, so cancelling
    components are measured correctly.
    """
    tv = sum(abs(a.w) for a in nu.atoms)
    dens = list(nu.densities)
    if not dens:
        return float(tv)
    trig = [d for d in dens if d.trig is not None and d.omega != 0]
    bps = set()
    for d in dens:
        bps.update(d.breakpoints())
        if d.num.degree >= 1:
            for r, _ in d.num.roots():
                if _is_real_root(r):
                    bps.add(r.real)

    def absdens(t):
        return np.abs(sum(d(t) for d in dens)).astype(complex)

    if not trig:
        v, _ = integrate(absdens, -math.inf, math.inf, cfg, sorted(bps))
        return float(tv + v.real)
    T = _default_tail_start(dens)
    pts = _panel_points(_trig_groups(dens), T) + [p for p in bps if -T < p < T]
    inner, _ = integrate(absdens, -T, T, cfg, pts)
    tv += inner.real
    tails_plain = [d for d in dens if d.trig is None and not (d.hi <= T and d.lo >= -T)]
    if len(trig) == 1 and not tails_plain:
        tv += _abs_trig_tail(trig[0], T, cfg)
    else:
        # mixed tails: integrate panel-wise out to a larger cut-off, then bound the rest
        T2 = 50 * T
        more = _panel_points(_trig_groups(dens), T2, max_panels=40000)
        for lo, hi in ((-T2, -T), (T, T2)):
            v, _ = integrate(absdens, lo, hi, cfg, [p for p in more if lo < p < hi])
            tv += v.real
        for lo, hi in ((-math.inf, -T2), (T2, math.inf)):
            v, _ = integrate(lambda t: sum(np.abs(d.num(t) / d.den(t)) for d in dens).astype(complex), lo, hi, cfg)
            tv += 2 / math.pi * v.real
    return float(tv)
