"""Kernels, data triples and evaluation of quasi-Herglotz functions.

A quasi-Herglotz function is determined by its data triple ``(a, b, nu)``::

    q(z) = a + b z + (1/pi) * int (1 + t z)/(t - z) dnu(t),     Im z != 0.

Since ``(1 + t z)/(t - z) = z + (1 + z**2)/(t - z)`` the integral equals
``z * nu(R) + (1 + z**2) * S(z)`` with ``S`` the Stieltjes transform of
``nu``, which every measure component supplies in closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable

import numpy as np

from .errors import DomainError, ValidationError
from .measure import (
    ComplexMeasure,
    Density,
    QuadratureConfig,
    _is_real_root,
    conjugate_measure,
    integrate_kernel,
    linear_combine,
    real_imag_parts,
)
from .quadrature import DEFAULT_CONFIG
from .ratfn import RationalFn, parse_rational

__all__ = [
    "kernel_Kt",
    "kernel_K",
    "poisson_P",
    "poisson_Q",
    "DataTriple",
    "eval_data",
    "BoundaryFn",
    "FromData",
    "Builtin",
    "PiecewiseRational",
    "Custom",
    "BUILTIN_NAMES",
    "eval_boundary_fn",
    "as_boundary_fn",
    "conjugate_fn",
    "quasi_parts",
    "is_ordinary_herglotz",
]


def _offreal(z) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    if np.any(z.imag == 0):
        bad = np.atleast_1d(z)[np.atleast_1d(z.imag == 0)][0]
        raise DomainError(f"z must be non-real, got z={complex(bad)}")
    return z


def _ret(x):
    x = np.asarray(x)
    return x.item() if x.ndim == 0 else x


def kernel_Kt(z, t):
    """``(1 + t z)/(t - z)`` (broadcasting)."""
    z = _offreal(z)
    t = np.asarray(t, dtype=float)
    return _ret((1 + t * z) / (t - z))


def kernel_K(z, t):
    """``1/(t - z) - t/(1 + t**2)``; equals ``kernel_Kt / (1 + t**2)``."""
    z = _offreal(z)
    t = np.asarray(t, dtype=float)
    return _ret(1 / (t - z) - t / (1 + t * t))


def poisson_P(z, t):
    """``Im z / |t - z|**2``."""
    z = _offreal(z)
    t = np.asarray(t, dtype=float)
    return _ret(z.imag / np.abs(t - z) ** 2)


def poisson_Q(z, t):
    """``(Re z + t) / |t - z|**2``."""
    z = _offreal(z)
    t = np.asarray(t, dtype=float)
    return _ret((z.real + t) / np.abs(t - z) ** 2)


# --------------------------------------------------------------------------
# data triples


@dataclass(frozen=True)
class DataTriple:
    """The data ``(a, b, nu)`` of a quasi-Herglotz function."""

    a: complex = 0j
    b: complex = 0j
    measure: ComplexMeasure = field(default_factory=ComplexMeasure)

    def __post_init__(self):
        for name in ("a", "b"):
            v = complex(getattr(self, name))
            if not (math.isfinite(v.real) and math.isfinite(v.imag)):
                raise ValidationError(f"{name} must be finite")
            object.__setattr__(self, name, v)
        if not isinstance(self.measure, ComplexMeasure):
            raise ValidationError("measure must be a ComplexMeasure")

    def __call__(self, z, cfg: QuadratureConfig = DEFAULT_CONFIG):
        return eval_data(self, z, cfg)

    def combine(self, alpha: complex, other: "DataTriple", beta: complex) -> "DataTriple":
        """``alpha * self + beta * other``."""
        return DataTriple(
            alpha * self.a + beta * other.a,
            alpha * self.b + beta * other.b,
            linear_combine(alpha, self.measure, beta, other.measure),
        )

    def __add__(self, other: "DataTriple") -> "DataTriple":
        return self.combine(1, other, 1)

    def __sub__(self, other: "DataTriple") -> "DataTriple":
        return self.combine(1, other, -1)

    def scaled(self, c: complex) -> "DataTriple":
        return self.combine(c, DataTriple(), 0)

    @property
    def is_real(self) -> bool:
        re, im = real_imag_parts(self.measure)
        return self.a.imag == 0 and self.b.imag == 0 and im.is_empty


def eval_data(D: DataTriple, z, cfg: QuadratureConfig = DEFAULT_CONFIG, method: str = "exact"):
    """``a + b z + (1/pi) int K~(z, t) dnu(t)`` for non-real ``z``.

    ``method="exact"`` uses closed-form transforms of the measure;
    ``method="quadrature"`` integrates the kernel numerically instead.
    """
    z = _offreal(z)
    zz = np.atleast_1d(z).ravel()
    nu = D.measure
    if method == "exact":
        integral = zz * nu.mass() + (1 + zz * zz) * nu.stieltjes(zz)
    elif method == "quadrature":
        if nu.is_empty:
            integral = np.zeros_like(zz)
        else:
            pts = sorted(set(np.round(zz.real, 12).tolist()))
            tail = max(200.0, 2 * float(np.max(np.abs(zz.real))) + 50)
            integral = np.asarray(
                integrate_kernel(
                    nu,
                    lambda t: (1 + t[:, None] * zz[None, :]) / (t[:, None] - zz[None, :]),
                    cfg,
                    points=pts,
                    tail_start=tail,
                ),
                dtype=complex,
            )
    else:
        raise ValueError(f"unknown evaluation method {method!r}")
    out = D.a + D.b * zz + integral / np.pi
    return _ret(out.reshape(np.shape(z)))


def conjugate_fn(D: DataTriple) -> DataTriple:
    """Data of the conjugate function: ``(conj a, conj b, conj nu)``."""
    return DataTriple(D.a.conjugate(), D.b.conjugate(), conjugate_measure(D.measure))


def quasi_parts(D: DataTriple) -> tuple[DataTriple, DataTriple]:
    """Data of the quasi-real and quasi-imaginary parts.

    ``qRe = (Re a, Re b, qRe nu)`` and ``qIm = (Im a, Im b, qIm nu)``, so that
    ``q = qRe + i qIm``.
    """
    re_nu, im_nu = real_imag_parts(D.measure)
    return DataTriple(D.a.real, D.b.real, re_nu), DataTriple(D.a.imag, D.b.imag, im_nu)


def _real_poly(p, tol=1e-14) -> bool:
    scale = max(p.norm(), 1e-300)
    return all(abs(c.imag) <= tol * scale for c in p.coeffs)


def _density_nonnegative(d: Density) -> bool:
    if d.trig is not None or d.kind == "bump":
        lo = d.lo if math.isfinite(d.lo) else -1e3
        hi = d.hi if math.isfinite(d.hi) else 1e3
        t = np.linspace(lo, hi, 10_000)
        v = np.asarray(d(t))
        scale = max(float(np.max(np.abs(v))), 1e-300)
        return bool(np.all(np.abs(v.imag) <= 1e-12 * scale) and np.all(v.real >= -1e-12 * scale))
    if not (_real_poly(d.num) and _real_poly(d.den)):
        return False
    # sign changes only at real numerator roots of odd multiplicity inside the support
    if d.num.degree >= 1:
        for r, m in d.num.roots():
            if _is_real_root(r) and m % 2 == 1 and d.lo < r.real < d.hi:
                return False
    lo, hi = d.lo, d.hi
    probe = 0.5 * (lo + hi) if math.isfinite(lo) and math.isfinite(hi) else (
        hi - 1 if math.isfinite(hi) else (lo + 1 if math.isfinite(lo) else 0.0)
    )
    cand = [probe + k * 0.137 for k in range(5)]
    for x in cand:
        if d.lo <= x <= d.hi:
            v = complex(d(np.array([x]))[0])
            if v != 0:
                return v.real > 0
    return True


def is_ordinary_herglotz(D: DataTriple) -> bool:
    """True iff ``a`` real, ``b >= 0`` and ``nu`` is a positive measure."""
    if D.a.imag != 0 or D.b.imag != 0 or D.b.real < 0:
        return False
    for at in D.measure.atoms:
        if at.w.imag != 0 or at.w.real < 0:
            return False
    return all(_density_nonnegative(d) for d in D.measure.densities)


# --------------------------------------------------------------------------
# boundary functions


class BoundaryFn:
    """A function on the complement of the real line, evaluated vectorised."""

    name = "function"

    def _eval(self, z: np.ndarray) -> np.ndarray:  # pragma: no cover - abstract
        raise NotImplementedError

    def __call__(self, z):
        z = _offreal(z)
        zz = np.atleast_1d(z).ravel()
        with np.errstate(all="ignore"):
            out = np.asarray(self._eval(zz), dtype=complex)
        return _ret(out.reshape(np.shape(z)))

    def real_singularities(self, lo: float, hi: float) -> list[float]:
        """Real points in ``[lo, hi]`` where boundary values may be singular."""
        return []


@dataclass(frozen=True, eq=False)
class FromData(BoundaryFn):
    data: DataTriple
    cfg: QuadratureConfig = DEFAULT_CONFIG
    method: str = "exact"
    name: str = "data"

    def _eval(self, z):
        return np.asarray(eval_data(self.data, z, self.cfg, self.method), dtype=complex)

    def real_singularities(self, lo, hi):
        pts = [a.t for a in self.data.measure.atoms]
        pts += self.data.measure.breakpoints()
        return sorted({p for p in pts if lo <= p <= hi})


@dataclass(frozen=True, eq=False)
class PiecewiseRational(BoundaryFn):
    """``upper`` on the upper half-plane, ``lower`` on the lower one."""

    upper: RationalFn
    lower: RationalFn
    name: str = "rational"

    def __post_init__(self):
        for side in ("upper", "lower"):
            v = getattr(self, side)
            if isinstance(v, str):
                object.__setattr__(self, side, parse_rational(v))

    def _eval(self, z):
        out = np.empty_like(z)
        up = z.imag > 0
        if up.any():
            out[up] = self.upper(z[up])
        if (~up).any():
            out[~up] = self.lower(z[~up])
        return out

    def real_singularities(self, lo, hi):
        pts = set()
        for r in (self.upper, self.lower):
            if r.den.degree >= 1:
                for root, _ in r.den.roots():
                    if abs(root.imag) <= 1e-9 * (1 + abs(root)) and lo <= root.real <= hi:
                        pts.add(root.real)
        return sorted(pts)


@dataclass(frozen=True, eq=False)
class Custom(BoundaryFn):
    """Wrap a vectorised callable ``f(z)``."""

    fn: Callable[[np.ndarray], np.ndarray]
    name: str = "custom"
    singularities: tuple[float, ...] = ()

    def _eval(self, z):
        return self.fn(z)

    def real_singularities(self, lo, hi):
        return [p for p in self.singularities if lo <= p <= hi]


def _halves(upper: Callable, lower: Callable) -> Callable:
    def f(z):
        out = np.empty_like(z)
        up = z.imag > 0
        out[up] = upper(z[up])
        out[~up] = lower(z[~up])
        return out

    return f


def _tan_poles(lo: float, hi: float) -> list[float]:
    k0 = math.ceil(lo / math.pi - 0.5)
    k1 = math.floor(hi / math.pi - 0.5)
    return [(k + 0.5) * math.pi for k in range(k0, k1 + 1)]


_CATALOG: dict[str, tuple[Callable, Callable[[float, float], list[float]], str]] = {
    "lin-split": (_halves(lambda z: z, lambda z: -z), lambda lo, hi: [], "z on C+, -z on C-"),
    "recip-split": (
        _halves(lambda z: -1 / z, lambda z: 1 / z),
        lambda lo, hi: [0.0] if lo <= 0 <= hi else [],
        "-1/z on C+, 1/z on C-",
    ),
    "gauss": (lambda z: np.exp(-z * z), lambda lo, hi: [], "exp(-z^2)"),
    "sqrt-up": (
        _halves(np.sqrt, lambda z: np.zeros_like(z)),
        lambda lo, hi: [0.0] if lo <= 0 <= hi else [],
        "principal sqrt(z) on C+, 0 on C-",
    ),
    "exp-sym": (
        _halves(lambda z: np.exp(1j * z), lambda z: np.exp(-1j * z)),
        lambda lo, hi: [],
        "exp(iz) on C+, exp(-iz) on C-",
    ),
    "tan-mi": (lambda z: np.tan(z) - 1j, _tan_poles, "tan(z) - i"),
    "recip-sq": (lambda z: z**-2, lambda lo, hi: [0.0] if lo <= 0 <= hi else [], "z^-2"),
    "const-i-sym": (
        _halves(lambda z: np.full_like(z, 1j), lambda z: np.full_like(z, -1j)),
        lambda lo, hi: [],
        "i on C+, -i on C-",
    ),
}

BUILTIN_NAMES = tuple(_CATALOG)


@dataclass(frozen=True, eq=False)
class Builtin(BoundaryFn):
    """Closed-form catalogue entry (names are case-sensitive)."""

    name: str

    def __post_init__(self):
        if self.name not in _CATALOG:
            raise ValidationError(f"unknown builtin {self.name!r}; choose from {', '.join(BUILTIN_NAMES)}")

    @property
    def description(self) -> str:
        return _CATALOG[self.name][2]

    def _eval(self, z):
        return _CATALOG[self.name][0](z)

    def real_singularities(self, lo, hi):
        return _CATALOG[self.name][1](lo, hi)


def as_boundary_fn(obj, cfg: QuadratureConfig = DEFAULT_CONFIG) -> BoundaryFn:
    """Coerce a DataTriple, builtin name, RationalFn pair or callable."""
    if isinstance(obj, BoundaryFn):
        return obj
    if isinstance(obj, DataTriple):
        return FromData(obj, cfg)
    if isinstance(obj, str):
        return Builtin(obj)
    if isinstance(obj, RationalFn):
        return PiecewiseRational(obj, obj)
    if isinstance(obj, tuple) and len(obj) == 2:
        return PiecewiseRational(*obj)
    if callable(obj):
        return Custom(obj)
    raise TypeError(f"cannot interpret {type(obj).__name__} as a boundary function")


def eval_boundary_fn(f, z, cfg: QuadratureConfig = DEFAULT_CONFIG):
    """Evaluate any boundary-function flavour at non-real ``z``."""
    return as_boundary_fn(f, cfg)(z)
