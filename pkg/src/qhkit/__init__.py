"""Executable calculus of quasi-Herglotz functions.

A quasi-Herglotz function is stored through its data triple ``(a, b, nu)``:

    q(z) = a + b z + (1/pi) int (1/(t - z) - t/(1 + t**2)) dnu(t)

with complex ``a``, ``b`` and a complex measure ``nu`` satisfying
``int d|nu|/(1 + t**2) < inf``.
"""

from types import ModuleType as _ModuleType

from .asympt import Expansion, SumRuleReport, expand_at_infinity, expand_at_point, sum_rule_check, sum_rule_integral
from .characterize import (
    ConditionReport,
    GrowthGrid,
    check_growth,
    check_real_symmetry,
    check_regularity,
    check_signed_zero_props,
    check_zero_lower,
    hardy_lower_bound,
    is_quasi_herglotz,
    regularity_integral,
)
from .core import (
    BUILTIN_NAMES,
    Builtin,
    Custom,
    DataTriple,
    FromData,
    PiecewiseRational,
    as_boundary_fn,
    conjugate_fn,
    eval_boundary_fn,
    eval_data,
    is_ordinary_herglotz,
    quasi_parts,
)
from .disk import (
    INFINITY,
    CircleMeasure,
    DiskData,
    cauchy_transform,
    cayley,
    from_disk,
    identity_check,
    inverse_cayley,
    to_disk,
)
from .errors import (
    ClassificationError,
    DomainError,
    LimitDivergence,
    PoleError,
    QHError,
    QuadratureError,
    RecoveryError,
    RootError,
    ValidationError,
)
from .limits import LimitResult, LimitSchedule, extrapolate
from .measure import (
    Atom,
    ComplexMeasure,
    Density,
    conjugate_measure,
    dirac,
    lebesgue_tilde,
    linear_combine,
    mass,
    real_imag_parts,
    total_variation,
)
from .poly import Polynomial
from .quadrature import DEFAULT_CONFIG, QuadratureConfig, integrate
from .ratfn import ParseError, RationalFn, format_rational, parse_rational
from .rational import (
    Classification,
    Decomposition,
    RationalPair,
    classify_both_halves,
    classify_lower_zero_upper,
    classify_pair,
    classify_upper_zero_lower,
    decompose,
    rational_to_data,
)
from .recover import (
    Recovery,
    SamplingGrid,
    extract_a,
    extract_b,
    extract_b_via_mass,
    recover_atom,
    recover_data,
    recover_density,
)

__version__ = "0.1.0"

__all__ = [n for n, v in list(globals().items()) if not n.startswith("_") and not isinstance(v, _ModuleType)]
