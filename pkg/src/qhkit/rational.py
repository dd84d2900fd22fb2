"""Rational quasi-Herglotz functions.

A function equal to ``P1/Q1`` on the upper and ``P2/Q2`` on the lower
half-plane is quasi-Herglotz exactly when it splits as

    b z + C(z) + [a1 + P12/Q12 on C+, 0 on C-] + [0 on C+, a2 + P22/Q22 on C-]

with ``C`` a proper rational function with simple real poles shared by both
halves (equal residues), ``Q12`` vanishing only in the lower half-plane and
``Q22`` only in the upper one.  This module classifies pairs, computes that
decomposition, and converts accepted pairs into data triples.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import DataTriple, PiecewiseRational, eval_data
from .errors import ClassificationError, ValidationError
from .measure import Atom, ComplexMeasure, Density
from .poly import Polynomial
from .ratfn import ParseError, RationalFn, format_rational, parse_rational

__all__ = [
    "Polynomial",
    "RationalFn",
    "ParseError",
    "parse_rational",
    "format_rational",
    "roots",
    "RationalPair",
    "Classification",
    "Decomposition",
    "classify_upper_zero_lower",
    "classify_lower_zero_upper",
    "classify_both_halves",
    "classify_pair",
    "decompose",
    "rational_to_data",
    "TAU_REAL",
    "TAU_RES",
]

TAU_REAL = 1e-9
TAU_RES = 1e-9
# roots with TAU_REAL < |Im r|/(1+|r|) <= NEAR_REAL_FACTOR * TAU_REAL are too close to call
NEAR_REAL_FACTOR = 1e3

ACCEPTED = "accepted"
REJECTED = "rejected"
INCONCLUSIVE = "inconclusive"


def roots(p: Polynomial) -> list[tuple[complex, int]]:
    """Roots of ``p`` with multiplicities (Aberth iteration plus clustering)."""
    if not isinstance(p, Polynomial):
        p = Polynomial(p)
    return p.roots()


def _as_rat(x) -> RationalFn:
    if isinstance(x, RationalFn):
        return x
    if isinstance(x, str):
        return parse_rational(x)
    if isinstance(x, Polynomial):
        return RationalFn(x)
    if isinstance(x, (int, float, complex)):
        return RationalFn.constant(x)
    raise TypeError(f"cannot interpret {type(x).__name__} as a rational function")


@dataclass(frozen=True)
class RationalPair:
    """``upper`` on the upper half-plane and ``lower`` on the lower one."""

    upper: RationalFn
    lower: RationalFn

    def __post_init__(self):
        object.__setattr__(self, "upper", _as_rat(self.upper))
        object.__setattr__(self, "lower", _as_rat(self.lower))

    @classmethod
    def same(cls, r) -> "RationalPair":
        r = _as_rat(r)
        return cls(r, r)

    def __call__(self, z):
        return PiecewiseRational(self.upper, self.lower)(z)

    def boundary_fn(self) -> PiecewiseRational:
        return PiecewiseRational(self.upper, self.lower)


@dataclass
class Classification:
    verdict: str
    reason: str = ""
    condition: str = ""
    roots: list = field(default_factory=list)
    decomposition: "Decomposition | None" = None

    @property
    def accepted(self) -> bool:
        return self.verdict == ACCEPTED


def _locate(r: complex) -> str:
    """``real``, ``upper``, ``lower`` or ``near-real`` for a root."""
    rel = abs(r.imag) / (1 + abs(r))
    if rel <= TAU_REAL:
        return "real"
    if rel <= NEAR_REAL_FACTOR * TAU_REAL:
        return "near-real"
    return "upper" if r.imag > 0 else "lower"


def _den_roots(R: RationalFn) -> list[tuple[complex, int, str]]:
    if R.den.degree < 1:
        return []
    return [(r, m, _locate(r)) for r, m in R.den.roots()]


def _deg(p: Polynomial) -> float:
    return p.degree


def _classify_one_half(R: RationalFn, half: str) -> Classification:
    # zero on the other half-plane: poles only strictly inside the other half
    if _deg(R.num) > _deg(R.den):
        return Classification(REJECTED, "deg P > deg Q", "degree bound deg P <= deg Q")
    other = "lower" if half == "upper" else "upper"
    bad, near = [], []
    for r, m, loc in _den_roots(R):
        if loc == "near-real":
            near.append(r)
        elif loc != other:
            bad.append((r, loc))
    if bad:
        r, loc = bad[0]
        if loc == "real":
            reason = f"real pole at {r.real:g} (a function vanishing on a half-plane has no point masses)"
        else:
            reason = f"pole at {r:.6g} in the {half} half-plane"
        return Classification(REJECTED, reason, f"Q != 0 on the closed {half} half-plane", [b[0] for b in bad])
    if near:
        return Classification(INCONCLUSIVE, "pole within tolerance of the real axis", "root location", near)
    return Classification(ACCEPTED, "", "", [])


def classify_upper_zero_lower(R) -> Classification:
    """``R`` on the upper half-plane, ``0`` on the lower one."""
    return _classify_one_half(_as_rat(R), "upper")


def classify_lower_zero_upper(R) -> Classification:
    """``0`` on the upper half-plane, ``R`` on the lower one."""
    return _classify_one_half(_as_rat(R), "lower")


def classify_both_halves(R) -> Classification:
    """The same ``R`` on both half-planes: simple real poles and ``deg P <= deg Q + 1``."""
    R = _as_rat(R)
    if _deg(R.num) > _deg(R.den) + 1:
        return Classification(REJECTED, "deg P > deg Q + 1", "degree bound deg P <= deg Q + 1")
    near = []
    for r, m, loc in _den_roots(R):
        if loc == "near-real":
            near.append(r)
        elif loc != "real":
            return Classification(REJECTED, f"non-real pole at {r:.6g}", "all zeros of Q real", [r])
        elif m > 1:
            word = {2: "double", 3: "triple"}.get(m, f"order-{m}")
            return Classification(REJECTED, f"{word} real zero of Q at {r.real:g}", "real zeros of Q simple", [r])
    if near:
        return Classification(INCONCLUSIVE, "pole within tolerance of the real axis", "root location", near)
    return Classification(ACCEPTED)


# --------------------------------------------------------------------------
# decomposition


@dataclass(frozen=True)
class Decomposition:
    """``b z + common + (a1 + upper_part on C+ | a2 + lower_part on C-)``."""

    b: complex
    common: RationalFn
    a1: complex
    upper_part: RationalFn
    a2: complex
    lower_part: RationalFn
    real_poles: tuple[tuple[float, complex], ...] = ()

    def upper(self, z):
        z = np.asarray(z, dtype=complex)
        return self.b * z + self.common(z) + self.a1 + self.upper_part(z)

    def lower(self, z):
        z = np.asarray(z, dtype=complex)
        return self.b * z + self.common(z) + self.a2 + self.lower_part(z)

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        return np.where(z.imag > 0, self.upper(z), self.lower(z))

    def reconstruct(self) -> RationalPair:
        lin = RationalFn(Polynomial((0, self.b)))
        return RationalPair(
            lin + self.common + self.a1 + self.upper_part,
            lin + self.common + self.a2 + self.lower_part,
        )

    def allclose(self, other: "Decomposition", tol: float = 1e-9) -> bool:
        scale = 1 + max(abs(self.b), abs(self.a1), abs(self.a2))
        return (
            abs(self.b - other.b) <= tol * scale
            and abs(self.a1 - other.a1) <= tol * scale
            and abs(self.a2 - other.a2) <= tol * scale
            and self.common.allclose(other.common, tol)
            and self.upper_part.allclose(other.upper_part, tol)
            and self.lower_part.allclose(other.lower_part, tol)
        )


def _split_half(R: RationalFn, half: str):
    """``R = b z + a + sum_l res_l/(z - t_l) + P2/Q2`` with ``Q2`` vanishing
    only in the half-plane opposite to ``half``."""
    if _deg(R.num) > _deg(R.den) + 1:
        raise ClassificationError(
            f"{half} half: deg P > deg Q + 1 (no finite limit of q(z)/z)", "degree bound deg P <= deg Q + 1"
        )
    quo, rem = divmod(R.num, R.den)
    b = complex(quo.coeffs[1]) if len(quo.coeffs) > 1 else 0j
    a = complex(quo.coeffs[0]) if quo.coeffs else 0j
    other = "lower" if half == "upper" else "upper"
    real, rest = [], []
    for r, m, loc in _den_roots(R):
        if loc == "near-real":
            raise ClassificationError(
                f"{half} half: pole {r:.6g} within tolerance of the real axis", "root location (inconclusive)", r
            )
        if loc == "real":
            if m > 1:
                word = {2: "double", 3: "triple"}.get(m, f"order-{m}")
                raise ClassificationError(
                    f"{word} real zero of Q at {r.real:g} ({half} half)", "real zeros of Q simple", r.real
                )
            real.append(r.real)
        elif loc == other:
            rest.extend([r] * m)
        else:
            raise ClassificationError(
                f"{half} half: pole {r:.6g} inside its own half-plane", "Q != 0 in its half-plane", r
            )
    dQ = R.den.derivative()
    res = [complex(rem(complex(t)) / dQ(complex(t))) for t in real]
    Q1 = Polynomial.from_roots(real) if real else Polynomial((1,))
    Q2 = Polynomial.from_roots(rest) if rest else Polynomial((1,))
    # P1 = sum_l res_l prod_{k != l} (z - t_k)
    P1 = Polynomial(())
    for l, t in enumerate(real):
        P1 = P1 + res[l] * Polynomial.from_roots([s for k, s in enumerate(real) if k != l])
    # rem/(Q1 Q2) = P1/Q1 + P2/Q2  =>  P2 = (rem - P1 Q2)/Q1
    P2, left = divmod(rem - P1 * Q2, Q1)
    return b, a, list(zip(real, res)), RationalFn(P2, Q2) if not P2.is_zero else RationalFn(Polynomial(()))


def decompose(pair) -> Decomposition:
    """Split an accepted pair into linear, common, upper-only and lower-only parts.

    Raises:
        ClassificationError: naming the violated condition (degree bound,
            unequal ``b``, double or one-sided real pole, residue mismatch,
            pole inside its own half-plane).
    """
    if not isinstance(pair, RationalPair):
        pair = RationalPair(*pair)
    b1, a1, poles1, part1 = _split_half(pair.upper, "upper")
    b2, a2, poles2, part2 = _split_half(pair.lower, "lower")
    if abs(b1 - b2) > TAU_RES * max(1.0, abs(b1), abs(b2)):
        raise ClassificationError(
            f"unequal limits of q(z)/z: {b1:.6g} on C+ vs {b2:.6g} on C-", "equal b on both half-planes", (b1, b2)
        )
    b = 0.5 * (b1 + b2)
    used = set()
    common = []
    for t, r1 in poles1:
        match = None
        for k, (s, r2) in enumerate(poles2):
            if k not in used and abs(s - t) <= TAU_REAL * (1 + abs(t)):
                match = k
                break
        if match is None:
            raise ClassificationError(
                f"real pole at {t:g} only in the upper half", "equal real zeros of Q1 and Q2", t
            )
        used.add(match)
        s, r2 = poles2[match]
        if abs(r1 - r2) > TAU_RES * max(1.0, abs(r1), abs(r2)):
            raise ClassificationError(
                f"residues at the real pole {t:g} differ: {r1:.6g} vs {r2:.6g}", "equal residues at shared real poles", t
            )
        common.append((0.5 * (t + s), 0.5 * (r1 + r2)))
    for k, (s, _) in enumerate(poles2):
        if k not in used:
            raise ClassificationError(f"real pole at {s:g} only in the lower half", "equal real zeros of Q1 and Q2", s)
    common.sort()
    ts = [t for t, _ in common]
    num = Polynomial(())
    for l, (t, r) in enumerate(common):
        num = num + r * Polynomial.from_roots([s for k, s in enumerate(ts) if k != l])
    C = RationalFn(num, Polynomial.from_roots(ts)) if common else RationalFn(Polynomial(()))
    return Decomposition(b, C, a1, part1, a2, part2, tuple(common))


def classify_pair(pair) -> Classification:
    """Accepted iff :func:`decompose` succeeds."""
    try:
        d = decompose(pair)
    except ClassificationError as exc:
        verdict = INCONCLUSIVE if "inconclusive" in exc.condition else REJECTED
        w = exc.witness
        return Classification(verdict, str(exc), exc.condition, [w] if w is not None else [])
    return Classification(ACCEPTED, decomposition=d)


def rational_to_data(pair, validate: bool = True, validation_tol: float = 1e-6) -> DataTriple:
    """Data triple of an accepted rational pair.

    Atoms sit at the shared real poles with weight ``-pi res/(1 + t**2)``; the
    density is the boundary jump ``(upper - lower)/(2i (1 + t**2))`` in closed
    form; ``a`` is ``(q(i) + q(-i))/2``.
    """
    if not isinstance(pair, RationalPair):
        pair = RationalPair(*pair)
    d = decompose(pair)
    atoms = tuple(Atom(t, -math.pi * r / (1 + t * t)) for t, r in d.real_poles)
    jump = (d.a1 - d.a2) + d.upper_part - d.lower_part
    dens = ()
    if not jump.is_zero:
        rho = jump / RationalFn(Polynomial((2j, 0, 2j)))
        dens = (Density(rho.num, rho.den),)
    q = pair.boundary_fn()
    v = q(np.array([1j, -1j]))
    a = complex(0.5 * (v[0] + v[1]))
    D = DataTriple(a, d.b, ComplexMeasure(atoms, dens))
    if validate:
        z = _VALIDATION_GRID
        want = q(z)
        err = np.abs(eval_data(D, z) - want) / np.maximum(1.0, np.abs(want))
        if float(err.max()) > validation_tol:
            raise ValidationError(f"converted data misses the pair by {float(err.max()):.3g}")
    return D


_VALIDATION_GRID = np.array(
    [x + 1j * y for x in (-3.0, -0.7, 0.0, 0.4, 2.5) for y in (0.1, 1.0, -0.1, -1.0, 5.0)]
)
