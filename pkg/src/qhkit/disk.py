"""Cayley geometry and Cauchy transforms of measures on the unit circle.

Circle measures are kept in the angle variable ``s`` (``zeta = exp(i s)``)
as ``sigma~``; the Cauchy transform is then

    (C sigma)(tau) = i sigma~({0})/(1 - tau) + i int_(0, 2pi) e^{is}/(1 - e^{-is} tau) dsigma~(s)

so the measure on ``S^1`` itself is ``dsigma = i zeta dsigma~``.  The part on
``(0, 2pi)`` is stored as its pull-back to the real line under
``exp(i s) = phi(t)``, i.e. ``t = -cot(s/2)``, which keeps rational
densities rational.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .core import DataTriple, eval_data
from .errors import DomainError, ValidationError
from .measure import Atom, ComplexMeasure, integrate_kernel
from .poly import Polynomial
from .quadrature import DEFAULT_CONFIG, QuadratureConfig

__all__ = [
    "INFINITY",
    "cayley",
    "inverse_cayley",
    "angle_of",
    "chart_point",
    "CircleMeasure",
    "DiskData",
    "cauchy_transform",
    "to_disk",
    "from_disk",
    "IdentityReport",
    "identity_check",
]


class _Infinity(enum.Enum):
    INFINITY = "inf"

    def __repr__(self):
        return "INFINITY"

    def __str__(self):
        return "∞"


INFINITY = _Infinity.INFINITY


def _is_inf(x) -> bool:
    return x is INFINITY


def cayley(zeta):
    """``psi(zeta) = i (1 + zeta)/(1 - zeta)``; maps the disk onto the upper half-plane.

    ``INFINITY`` maps to ``-i``.  ``zeta = 1`` goes to the point at infinity
    and is rejected.
    """
    if _is_inf(zeta):
        return -1j
    z = np.asarray(zeta, dtype=complex)
    if np.any(z == 1):
        raise DomainError("cayley: zeta = 1 maps to the point at infinity")
    out = 1j * (1 + z) / (1 - z)
    return out if out.ndim else complex(out)


def inverse_cayley(xi):
    """``phi(xi) = (xi - i)/(xi + i)``; ``INFINITY`` maps to ``1``, ``-i`` to infinity."""
    if _is_inf(xi):
        return 1 + 0j
    x = np.asarray(xi, dtype=complex)
    if np.any(x == -1j):
        raise DomainError("inverse_cayley: xi = -i maps to the point at infinity")
    out = (x - 1j) / (x + 1j)
    return out if out.ndim else complex(out)


def angle_of(t):
    """Angle ``s`` in ``(0, 2pi)`` with ``exp(i s) = phi(t)`` for real ``t``."""
    t = np.asarray(t, dtype=float)
    s = np.mod(np.angle((t - 1j) / (t + 1j)), 2 * math.pi)
    return s if s.ndim else float(s)


def chart_point(s):
    """Inverse of :func:`angle_of`: ``t = -cot(s/2)`` for ``s`` in ``(0, 2pi)``."""
    s = np.asarray(s, dtype=float)
    if np.any((s <= 0) | (s >= 2 * math.pi)):
        raise DomainError("angles must lie in (0, 2pi); the angle 0 is the atom at 1")
    t = -np.cos(s / 2) / np.sin(s / 2)
    return t if t.ndim else float(t)


# --------------------------------------------------------------------------
# measures


_TP = Polynomial((1j, 1))  # t + i
_TM = Polynomial((-1j, 1))  # t - i


def _transport(nu: ComplexMeasure, c: complex, num: Polynomial, den: Polynomial) -> ComplexMeasure:
    """Multiply a measure by ``c num(t)/den(t)`` (atoms pointwise, densities symbolically)."""
    atoms = tuple(Atom(a.t, c * a.w * complex(num(a.t) / den(a.t))) for a in nu.atoms)
    dens = tuple(replace(d, num=d.num * num * c, den=d.den * den).reduced() for d in nu.densities)
    return ComplexMeasure(atoms, dens)


@dataclass(frozen=True)
class CircleMeasure:
    """``sigma~`` on ``[0, 2pi)``: an atom at angle 0 plus a measure on ``(0, 2pi)``.

    ``chart`` is the ``(0, 2pi)`` part pulled back to ``t = -cot(s/2)``, so that
    ``int g(s) dsigma~(s) = int g(s(t)) dchart(t)``.
    """

    atom_at_1: complex = 0j
    chart: ComplexMeasure = field(default_factory=ComplexMeasure)

    def __post_init__(self):
        w = complex(self.atom_at_1)
        if not cmath.isfinite(w):
            raise ValidationError("atom_at_1 must be finite")
        object.__setattr__(self, "atom_at_1", w)

    @classmethod
    def from_angles(cls, atom_at_1: complex = 0j, atoms=(), densities=()) -> "CircleMeasure":
        """Atoms given as ``(s, w)`` pairs in the angle variable; ``densities``
        are chart densities (functions of ``t``)."""
        pulled = tuple(Atom(chart_point(s), w) for s, w in atoms)
        return cls(atom_at_1, ComplexMeasure(pulled, tuple(densities)))

    @classmethod
    def from_sigma_atoms(cls, atoms) -> "CircleMeasure":
        """Atoms of ``sigma`` itself, as ``(zeta, weight)`` pairs with ``|zeta| = 1``.

        Uses ``dsigma~ = dsigma/(i zeta)``.
        """
        at1 = 0j
        rest = []
        for zeta, w in atoms:
            zeta = complex(zeta)
            if abs(abs(zeta) - 1) > 1e-12:
                raise DomainError(f"atom location {zeta} is not on the unit circle")
            wt = complex(w) / (1j * zeta)
            s = cmath.phase(zeta) % (2 * math.pi)
            if s < 1e-14 or s > 2 * math.pi - 1e-14:
                at1 += wt
            else:
                rest.append((s, wt))
        return cls.from_angles(at1, rest)

    @property
    def atoms(self) -> list[tuple[float, complex]]:
        """Atoms on ``(0, 2pi)`` as ``(angle, weight)`` pairs."""
        return [(angle_of(a.t), a.w) for a in self.chart.atoms]

    def density(self, s) -> np.ndarray:
        """Density of ``sigma~`` with respect to ``ds`` on ``(0, 2pi)``."""
        t = chart_point(s)
        return self.chart.density(t) * (1 + np.asarray(t) ** 2) / 2

    def mass(self) -> complex:
        """``sigma~([0, 2pi))``."""
        return self.atom_at_1 + self.chart.mass()

    def sigma_mass(self) -> complex:
        """``sigma(S^1) = int i e^{is} dsigma~(s)``, equal to ``(C sigma)(0)``."""
        return cauchy_transform(self, 0j)

    def is_zero(self) -> bool:
        return self.atom_at_1 == 0 and self.chart.is_empty


@dataclass(frozen=True)
class DiskData:
    """``q(z) = c + (C sigma)(phi(z))``."""

    c: complex
    sigma: CircleMeasure

    def __post_init__(self):
        c = complex(self.c)
        if not cmath.isfinite(c):
            raise ValidationError("c must be finite")
        object.__setattr__(self, "c", c)

    def __call__(self, z, cfg: QuadratureConfig = DEFAULT_CONFIG):
        return self.c + cauchy_transform(self.sigma, inverse_cayley(z), cfg)


def cauchy_transform(sigma: CircleMeasure, tau, cfg: QuadratureConfig = DEFAULT_CONFIG, method: str = "exact"):
    """``(C sigma)(tau)`` for ``tau`` off the unit circle, or ``INFINITY`` (value 0).

    ``method="exact"`` uses partial fractions in the chart variable, where the
    integrand ``phi(t)**2/(phi(t) - tau)`` is rational in ``t``;
    ``method="quadrature"`` integrates it numerically.
    """
    if _is_inf(tau):
        return 0j
    tau_arr = np.atleast_1d(np.asarray(tau, dtype=complex))
    if np.any(np.abs(np.abs(tau_arr) - 1) <= 1e-14):
        raise DomainError("Cauchy transform is undefined on the unit circle")
    out = 1j * sigma.atom_at_1 / (1 - tau_arr)
    nu = sigma.chart
    if not nu.is_empty:
        if method == "exact":
            # phi^2/(phi - tau) = A + B/(t + i) + C/(t - t*) with t* = psi(tau)
            k = 1 - tau_arr
            ts = 1j * (1 + tau_arr) / k
            A = 1 / k
            B = -4 / (k * (-1j - ts))
            C = (ts - 1j) ** 2 / (k * (ts + 1j))
            S_mi = nu.stieltjes(np.array([-1j]))[0]
            out = out + 1j * (A * nu.mass() + B * S_mi + C * nu.stieltjes(ts))
        elif method == "quadrature":

            def g(t):
                ph = (t - 1j) / (t + 1j)
                return ph[:, None] ** 2 / (ph[:, None] - tau_arr[None, :])

            out = out + 1j * np.asarray(integrate_kernel(nu, g, cfg), dtype=complex).reshape(tau_arr.shape)
        else:
            raise ValueError(f"unknown method {method!r}")
    if np.ndim(tau) == 0:
        return complex(out[0])
    return out.reshape(np.shape(tau))


def to_disk(D: DataTriple, cfg: QuadratureConfig = DEFAULT_CONFIG) -> DiskData:
    """``c = a - i(b + nu(R)/pi)``, ``sigma~({0}) = 2b`` and
    ``dsigma~ = (2/pi)(t + i)/(t - i) dnu`` on ``(0, 2pi)``."""
    nu = D.measure
    c = D.a - 1j * (D.b + nu.mass() / math.pi)
    chart = _transport(nu, 2 / math.pi, _TP, _TM)
    return DiskData(c, CircleMeasure(2 * D.b, chart))


def from_disk(
    E: DiskData,
    cfg: QuadratureConfig = DEFAULT_CONFIG,
    validate: bool = True,
    validation_tol: float = 1e-8,
) -> DataTriple:
    """Inverse of :func:`to_disk`: ``b = beta/2``, ``dnu = (pi/2)(t - i)/(t + i) dsigma~``,
    ``a = c + i(beta/2 + nu(R)/pi)``."""
    beta = E.sigma.atom_at_1
    nu = _transport(E.sigma.chart, math.pi / 2, _TM, _TP)
    a = E.c + 1j * (beta / 2 + nu.mass() / math.pi)
    D = DataTriple(a, beta / 2, nu)
    if validate:
        z = _default_grid()
        want = E(z, cfg)
        got = eval_data(D, z, cfg)
        err = float(np.max(np.abs(got - want) / np.maximum(1.0, np.abs(want))))
        if err > validation_tol:
            raise ValidationError(f"from_disk validation residual {err:.3g} exceeds {validation_tol:g}")
    return D


def _default_grid(n: int = 50, seed: int = 11) -> np.ndarray:
    rng = np.random.default_rng(seed)
    x = rng.uniform(-5, 5, n)
    y = rng.uniform(0.1, 5, n) * np.where(np.arange(n) % 2 == 0, 1, -1)
    return x + 1j * y


@dataclass
class IdentityReport:
    residual: float
    c: complex
    points: int
    disk: DiskData

    @property
    def ok(self) -> bool:
        return self.residual <= 1e-8


def identity_check(D: DataTriple, grid=None, cfg: QuadratureConfig = DEFAULT_CONFIG, method: str = "exact") -> IdentityReport:
    """Largest ``|q(z) - c - (C sigma)(phi(z))|`` over ``grid`` with ``(c, sigma) = to_disk(D)``.

    ``method`` selects how both sides are evaluated; ``"quadrature"`` makes the
    check independent of the closed-form transforms.
    """
    z = _default_grid() if grid is None else np.atleast_1d(np.asarray(grid, dtype=complex))
    E = to_disk(D, cfg)
    lhs = eval_data(D, z, cfg, method=method)
    rhs = E.c + cauchy_transform(E.sigma, inverse_cayley(z), cfg, method=method)
    return IdentityReport(float(np.max(np.abs(lhs - rhs))), E.c, int(z.size), E)
