"""Dense complex polynomials: arithmetic, roots, GCD and partial fractions.

Coefficients are stored in ascending order of degree.  Root finding uses the
Aberth-Ehrlich simultaneous iteration; clustered roots are merged into a
multiple root only when a backward-error test confirms that a nearby
polynomial really has a root of that multiplicity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import RootError

__all__ = [
    "Polynomial",
    "poly_gcd",
    "partial_fractions",
    "PartialFractions",
    "ROOT_TOL",
    "CLUSTER_RADIUS",
    "GCD_CUTOFF",
]

ROOT_TOL = 1e-12
CLUSTER_RADIUS = 1e-8
GCD_CUTOFF = 1e-10
# Candidate groups for the multiplicity test; merged only if the test passes.
_CANDIDATE_RADIUS = 1e-3
_MULTIPLICITY_TOL = 1e-10


def _as_coeffs(values: Iterable) -> tuple[complex, ...]:
    out = [complex(v) for v in values]
    while out and out[-1] == 0:
        out.pop()
    for c in out:
        if not (math.isfinite(c.real) and math.isfinite(c.imag)):
            raise ValueError("polynomial coefficients must be finite")
    return tuple(out)


@dataclass(frozen=True)
class Polynomial:
    """Complex polynomial ``sum(coeffs[k] * z**k)``.

    Trailing zero coefficients are stripped, so ``coeffs[-1]`` is the leading
    coefficient.  The zero polynomial has no coefficients and degree ``-inf``.
    """

    coeffs: tuple[complex, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _as_coeffs(self.coeffs))

    # construction ------------------------------------------------------
    @classmethod
    def constant(cls, c: complex) -> "Polynomial":
        return cls((c,))

    @classmethod
    def identity(cls) -> "Polynomial":
        return cls((0, 1))

    @classmethod
    def from_roots(cls, roots: Iterable[complex], lead: complex = 1.0) -> "Polynomial":
        p = cls((lead,))
        for r in roots:
            p = p * cls((-complex(r), 1))
        return p

    # basic properties ----------------------------------------------------
    @property
    def degree(self) -> int | float:
        return len(self.coeffs) - 1 if self.coeffs else -math.inf

    @property
    def lead(self) -> complex:
        return self.coeffs[-1] if self.coeffs else 0j

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def norm(self) -> float:
        """Max-modulus of the coefficients."""
        return max((abs(c) for c in self.coeffs), default=0.0)

    @cached_property
    def array(self) -> np.ndarray:
        return np.array(self.coeffs, dtype=complex)

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        acc = np.zeros_like(z)
        for c in reversed(self.coeffs):
            acc = acc * z + c
        if acc.ndim == 0:
            return complex(acc)
        return acc

    # arithmetic ----------------------------------------------------------
    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            return other
        if isinstance(other, (int, float, complex, np.number)):
            return Polynomial((other,))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0j,) * (n - len(self.coeffs))
        b = other.coeffs + (0j,) * (n - len(other.coeffs))
        return Polynomial(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(-c for c in self.coeffs)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.is_zero or other.is_zero:
            return Polynomial()
        return Polynomial(np.convolve(self.array, other.array))

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        if isinstance(scalar, Polynomial):
            raise TypeError("use divmod() for polynomial division")
        return Polynomial(c / scalar for c in self.coeffs)

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not polynomials")
        out = Polynomial((1,))
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __divmod__(self, other: "Polynomial"):
        if other.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        num = list(self.coeffs)
        dd = len(other.coeffs) - 1
        if len(num) - 1 < dd:
            return Polynomial(), self
        lead = other.lead
        q = [0j] * (len(num) - dd)
        for k in range(len(num) - 1, dd - 1, -1):
            c = num[k] / lead
            q[k - dd] = c
            if c:
                for j, oc in enumerate(other.coeffs):
                    num[k - dd + j] -= c * oc
            num[k] = 0j
        return Polynomial(q), Polynomial(num[:dd])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    # transforms ----------------------------------------------------------
    def derivative(self, n: int = 1) -> "Polynomial":
        c = list(self.coeffs)
        for _ in range(n):
            c = [k * c[k] for k in range(1, len(c))]
        return Polynomial(c)

    def antiderivative(self) -> "Polynomial":
        return Polynomial([0j] + [c / (k + 1) for k, c in enumerate(self.coeffs)])

    def conj(self) -> "Polynomial":
        """Coefficient-wise conjugate, i.e. ``z -> conj(p(conj(z)))``."""
        return Polynomial(c.conjugate() for c in self.coeffs)

    def monic(self) -> "Polynomial":
        if self.is_zero:
            return self
        return self / self.lead

    def shift(self, c: complex) -> "Polynomial":
        """Coefficients of ``p(c + h)`` as a polynomial in ``h``."""
        a = list(self.coeffs)
        n = len(a)
        # repeated synthetic division (Taylor shift)
        for i in range(n):
            for k in range(n - 2, i - 1, -1):
                a[k] += c * a[k + 1]
        return Polynomial(a)

    def scale_arg(self, s: complex) -> "Polynomial":
        """Coefficients of ``p(s * h)``."""
        return Polynomial(c * s**k for k, c in enumerate(self.coeffs))

    def trim(self, tol: float) -> "Polynomial":
        """Drop leading coefficients below ``tol * norm``."""
        if self.is_zero:
            return self
        cut = tol * self.norm()
        c = list(self.coeffs)
        while c and abs(c[-1]) <= cut:
            c.pop()
        return Polynomial(c)

    def real_part(self) -> "Polynomial":
        return Polynomial(c.real for c in self.coeffs)

    def imag_part(self) -> "Polynomial":
        return Polynomial(c.imag for c in self.coeffs)

    def allclose(self, other: "Polynomial", tol: float = 1e-12) -> bool:
        n = max(len(self.coeffs), len(other.coeffs))
        a = np.zeros(n, complex)
        b = np.zeros(n, complex)
        a[: len(self.coeffs)] = self.coeffs
        b[: len(other.coeffs)] = other.coeffs
        scale = max(1.0, float(np.max(np.abs(a), initial=0)), float(np.max(np.abs(b), initial=0)))
        return bool(np.all(np.abs(a - b) <= tol * scale))

    # roots ----------------------------------------------------------------
    @cached_property
    def _roots(self) -> tuple[tuple[complex, int], ...]:
        return tuple(_roots_with_multiplicity(self))

    def roots(self) -> list[tuple[complex, int]]:
        """All roots with multiplicities; multiplicities sum to the degree."""
        if self.degree < 1:
            raise ValueError("roots() needs a polynomial of degree >= 1")
        return list(self._roots)

    def root_values(self) -> list[complex]:
        """Roots repeated according to multiplicity."""
        return [r for r, m in self.roots() for _ in range(m)]

    def __repr__(self):
        return f"Polynomial({list(self.coeffs)!r})"


# --------------------------------------------------------------------------
# root finding


def _aberth(c: np.ndarray, maxiter: int = 2000) -> np.ndarray:
    """Simultaneous Aberth-Ehrlich iteration for a polynomial without zero roots."""
    n = len(c) - 1
    if n == 1:
        return np.array([-c[0] / c[1]])
    mono = c / c[-1]
    dcoef = np.arange(1, n + 1) * mono[1:]
    # geometric mean of root moduli as initial radius; spread by a phase offset
    radius = abs(mono[0]) ** (1.0 / n)
    bound = 1 + np.max(np.abs(mono[:-1]))
    radius = min(max(radius, 1e-300), bound)
    angles = 2 * np.pi * np.arange(n) / n + 0.4
    z = radius * np.exp(1j * angles)
    eps = np.finfo(float).eps
    active = np.ones(n, bool)
    for _ in range(maxiter):
        pz = np.polyval(mono[::-1], z)
        dz = np.polyval(dcoef[::-1], z)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(dz != 0, pz / dz, pz)
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, np.inf)
            s = np.sum(1.0 / diff, axis=1)
            w = ratio / (1 - ratio * s)
        w = np.where(np.isfinite(w), w, 0)
        w[~active] = 0
        z = z - w
        small = np.abs(w) <= 4 * eps * np.maximum(np.abs(z), radius)
        active &= ~small
        # a root whose value is already zero is done as well
        active &= np.abs(pz) > 0
        if not active.any():
            break
    return z


def _abs_taylor_norms(c: np.ndarray, center: complex, upto: int) -> list[float]:
    """Sum_k |c_k| binom(k, j) |center|^(k-j) for j < upto (noise scale of Taylor coeffs)."""
    r = abs(center)
    out = []
    for j in range(upto):
        s = 0.0
        for k in range(j, len(c)):
            s += abs(c[k]) * math.comb(k, j) * r ** (k - j)
        out.append(s)
    return out


def _is_multiple_root(p: Polynomial, center: complex, m: int) -> bool:
    d = p.shift(center).coeffs
    d = list(d) + [0j] * (m + 1 - len(d))
    noise = _abs_taylor_norms(np.array(p.coeffs), center, m)
    return all(abs(d[j]) <= _MULTIPLICITY_TOL * max(noise[j], 1e-300) for j in range(m))


def _polish(p: Polynomial, z: complex, m: int) -> complex:
    """Newton on the (m-1)-th derivative, where an m-fold root is simple."""
    f = p.derivative(m - 1)
    df = f.derivative()
    best, best_val = z, abs(f(z))
    for _ in range(6):
        d = df(best)
        if d == 0:
            break
        cand = best - f(best) / d
        val = abs(f(cand))
        if val < best_val:
            best, best_val = cand, val
        else:
            break
    return best


def _cluster(p: Polynomial, z: np.ndarray, scale: float) -> list[tuple[complex, int]]:
    n = len(z)
    # single-linkage grouping at the candidate radius
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(z[i] - z[j]) <= _CANDIDATE_RADIUS * scale:
                parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)

    out: list[tuple[complex, int]] = []
    for idx in groups.values():
        pts = z[idx]
        m = len(idx)
        if m == 1:
            out.append((complex(pts[0]), 1))
            continue
        mean = complex(np.mean(pts))
        tight = np.max(np.abs(pts - mean)) <= CLUSTER_RADIUS * scale
        center = _polish(p, mean, m)
        if tight or _is_multiple_root(p, center, m):
            out.append((center, m))
        else:
            out.extend((complex(v), 1) for v in pts)
    return out


def _roots_with_multiplicity(p: Polynomial) -> list[tuple[complex, int]]:
    c = list(p.coeffs)
    if len(c) < 2:
        return []
    zero_mult = 0
    while c and c[0] == 0:
        c.pop(0)
        zero_mult += 1
    out: list[tuple[complex, int]] = []
    if zero_mult:
        out.append((0j, zero_mult))
    if len(c) >= 2:
        # roots are scale free; an exact power-of-two rescale keeps tiny or
        # huge coefficients away from under/overflow
        _, e = math.frexp(max(abs(v) for v in c))
        c = [math.ldexp(v.real, -e) + 1j * math.ldexp(v.imag, -e) for v in map(complex, c)]
        core = Polynomial(c)
        arr = np.array(c, dtype=complex)
        z = _aberth(arr)
        scale = max(1.0, float(np.max(np.abs(z))))
        found = _cluster(core, z, scale)
        # residual check against the absolute-value polynomial
        for r, m in found:
            f = core.derivative(m - 1) if m > 1 else core
            val = abs(f(r))
            ref = float(np.polyval(np.abs(np.array(f.coeffs))[::-1], abs(r)))
            if val > 1e-6 * max(ref, 1e-300):
                raise RootError(f"root iteration did not converge near {r!r} (residual {val:.3e})")
        out.extend(found)
    out.sort(key=lambda rm: (round(rm[0].real, 12), round(rm[0].imag, 12)))
    return out


# --------------------------------------------------------------------------
# gcd and partial fractions


def poly_gcd(p: Polynomial, q: Polynomial, tol: float = GCD_CUTOFF) -> Polynomial:
    """Approximate monic GCD by the Euclidean remainder sequence.

    Remainder coefficients below ``tol`` times the running scale are treated
    as zero.  Near-common factors can therefore be cancelled (or kept) in a
    way that depends on ``tol``.
    """
    if p.is_zero:
        return q.monic() if not q.is_zero else Polynomial((1,))
    if q.is_zero:
        return p.monic()
    a = p / p.norm()
    b = q / q.norm()
    if a.degree < b.degree:
        a, b = b, a
    while True:
        if b.degree <= 0:
            return Polynomial((1,))
        _, r = divmod(a, b)
        scale = max(a.norm(), b.norm())
        r = Polynomial(c if abs(c) > tol * scale else 0 for c in r.coeffs)
        if r.is_zero:
            return b.monic()
        a, b = b, r / r.norm()


@dataclass(frozen=True)
class PartialFractions:
    """``N/D = poly + sum_r sum_k coeffs[r][k-1] / (z - r)**k``."""

    poly: Polynomial
    terms: tuple[tuple[complex, tuple[complex, ...]], ...]

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        out = self.poly(z) if not self.poly.is_zero else np.zeros_like(z)
        out = np.asarray(out, dtype=complex)
        for r, cs in self.terms:
            inv = 1.0 / (z - r)
            pw = inv
            for c in cs:
                out = out + c * pw
                pw = pw * inv
        return out if out.ndim else complex(out)


def _series_div(num: Sequence[complex], den: Sequence[complex], order: int) -> list[complex]:
    """First ``order`` coefficients of the power series num/den (den[0] != 0)."""
    num = list(num) + [0j] * order
    den = list(den) + [0j] * order
    out = []
    for k in range(order):
        s = num[k] - sum(out[j] * den[k - j] for j in range(k))
        out.append(s / den[0])
    return out


def partial_fractions(num: Polynomial, den: Polynomial) -> PartialFractions:
    """Partial fraction expansion of ``num/den`` over the roots of ``den``."""
    if den.is_zero:
        raise ZeroDivisionError("zero denominator")
    poly, rem = divmod(num, den)
    if den.degree < 1 or rem.is_zero:
        return PartialFractions(poly, ())
    rts = den.roots()
    terms = []
    for i, (r, m) in enumerate(rts):
        other = Polynomial((den.lead,))
        for j, (s, k) in enumerate(rts):
            if j != i:
                other = other * Polynomial.from_roots([s] * k)
        g = _series_div(rem.shift(r).coeffs or (0j,), other.shift(r).coeffs, m)
        # coefficient of (z-r)^-k is the Taylor coefficient g_{m-k}
        cs = tuple(g[m - k] for k in range(1, m + 1))
        terms.append((r, cs))
    return PartialFractions(poly, tuple(terms))
