"""``qhkit`` command line.

Exit codes: 0 success or satisfied, 2 malformed input, 3 evaluation failure,
4 recovery failure, 5 violated or rejected, 6 inconclusive.
"""

from __future__ import annotations

import argparse
import math
import os
import sys

import numpy as np

from . import asympt, characterize, disk, io, rational, recover
from .core import BUILTIN_NAMES, Builtin, FromData, PiecewiseRational
from .errors import (
    ClassificationError,
    DomainError,
    LimitDivergence,
    PoleError,
    QHError,
    QuadratureError,
    RecoveryError,
    ValidationError,
)
from .quadrature import DEFAULT_CONFIG, QuadratureConfig

EXIT_OK = 0
EXIT_MALFORMED = 2
EXIT_EVAL = 3
EXIT_RECOVERY = 4
EXIT_VIOLATED = 5
EXIT_INCONCLUSIVE = 6

VERDICT_EXIT = {
    characterize.SATISFIED: EXIT_OK,
    characterize.VIOLATED: EXIT_VIOLATED,
    characterize.INCONCLUSIVE: EXIT_INCONCLUSIVE,
    rational.ACCEPTED: EXIT_OK,
    rational.REJECTED: EXIT_VIOLATED,
    asympt.HOLDS: EXIT_OK,
    asympt.DIVERGES: EXIT_VIOLATED,
}

DEFAULT_RE_RANGE = (-5.0, 5.0, 0.5)


class UsageError(Exception):
    """Malformed input detected after argument parsing (exit 2)."""


# --------------------------------------------------------------------------
# parsing helpers


def _float(text: str, what: str) -> float:
    try:
        x = float(text)
    except ValueError:
        raise UsageError(f"{what}: {text!r} is not a number") from None
    if not math.isfinite(x):
        raise UsageError(f"{what}: value must be finite")
    return x


def parse_range(text: str, what: str = "range") -> np.ndarray:
    """``LO:HI:STEP`` with both ends included."""
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"{what}: expected LO:HI:STEP, got {text!r}")
    lo, hi, step = (_float(p, what) for p in parts)
    if not (lo <= hi and step > 0):
        raise UsageError(f"{what}: need LO <= HI and STEP > 0")
    n = int(round((hi - lo) / step))
    if n > 1_000_000:
        raise UsageError(f"{what}: too many points")
    return lo + step * np.arange(n + 1)


def parse_grid(text: str) -> np.ndarray:
    """``im:Y[,re:LO:HI:STEP]``; the real range defaults to ``-5:5:0.5``."""
    im = None
    re = None
    for item in text.split(","):
        key, _, rest = item.strip().partition(":")
        if key == "im" and im is None:
            im = _float(rest, "grid im")
        elif key == "re" and re is None:
            re = parse_range(rest, "grid re")
        else:
            raise UsageError(f"grid: unexpected item {item!r} (expected im:Y[,re:LO:HI:STEP])")
    if im is None:
        raise UsageError("grid: missing im:Y")
    if re is None:
        re = parse_range("{}:{}:{}".format(*DEFAULT_RE_RANGE))
    return re + 1j * im


def read_points(path: str) -> np.ndarray:
    """CSV rows ``re,im``; blank lines, ``#`` comments and a header are skipped."""
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    pts = []
    for n, line in enumerate(lines, 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        cells = [c.strip() for c in line.split(",")]
        if n == 1 and cells[:2] == ["re", "im"]:
            continue
        if len(cells) != 2:
            raise UsageError(f"{path}:{n}: expected 're,im'")
        pts.append(complex(_float(cells[0], f"{path}:{n}"), _float(cells[1], f"{path}:{n}")))
    return np.array(pts, dtype=complex)


def _fmt(x: float) -> str:
    return repr(float(x) + 0.0)


def write_csv(header: list[str], rows) -> None:
    out = sys.stdout
    out.write(",".join(header) + "\n")
    for row in rows:
        out.write(",".join(_fmt(v) for v in row) + "\n")


def _emit(doc: dict) -> None:
    sys.stdout.write(io.dumps(doc) + "\n")


# --------------------------------------------------------------------------
# configuration and sources


def _env_float(name: str):
    v = os.environ.get(name)
    if v is None or v == "":
        return None
    return _float(v, name)


def make_config(args) -> QuadratureConfig:
    """Flags win over ``QHKIT_ABS_TOL``, ``QHKIT_REL_TOL``, ``QHKIT_MAX_SUBDIV``."""
    abs_tol = args.abs_tol if args.abs_tol is not None else _env_float("QHKIT_ABS_TOL")
    rel_tol = args.rel_tol if args.rel_tol is not None else _env_float("QHKIT_REL_TOL")
    sub = args.max_subdiv
    if sub is None:
        env = os.environ.get("QHKIT_MAX_SUBDIV")
        if env:
            try:
                sub = int(env)
            except ValueError:
                raise UsageError(f"QHKIT_MAX_SUBDIV: {env!r} is not an integer") from None
    try:
        return QuadratureConfig(
            abs_tol=abs_tol if abs_tol is not None else DEFAULT_CONFIG.abs_tol,
            rel_tol=rel_tol if rel_tol is not None else DEFAULT_CONFIG.rel_tol,
            max_subdivisions=sub if sub is not None else DEFAULT_CONFIG.max_subdivisions,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def load_data(path: str):
    return io.data_from_json(io.load_json(path))


def make_source(args, cfg: QuadratureConfig):
    """Boundary function from ``--data``, ``--builtin`` or ``--upper/--lower``."""
    given = [x for x in ("data", "builtin", "upper") if getattr(args, x, None) is not None]
    if len(given) != 1:
        raise UsageError("give exactly one source: --data FILE, --builtin NAME or --upper EXPR [--lower EXPR]")
    if args.data is not None:
        return FromData(load_data(args.data), cfg)
    if args.builtin is not None:
        if args.builtin not in BUILTIN_NAMES:
            raise UsageError(f"unknown builtin {args.builtin!r}; choose from {', '.join(BUILTIN_NAMES)}")
        return Builtin(args.builtin)
    lower = args.lower if args.lower is not None else args.upper
    return PiecewiseRational(args.upper, lower)


def _eval_points(f, z: np.ndarray) -> np.ndarray:
    """Evaluate, naming the first offending point on failure."""
    try:
        vals = np.asarray(f(z), dtype=complex) if z.size else np.zeros(0, dtype=complex)
    except (DomainError, PoleError, QuadratureError, ZeroDivisionError, FloatingPointError):
        vals = None
    if vals is None or not np.all(np.isfinite(vals)):
        single = []
        for p in z:
            try:
                v = complex(f(p))
            except (QHError, ZeroDivisionError, FloatingPointError, ValueError) as exc:
                raise _EvalFailure(p, str(exc)) from None
            if not np.isfinite(v):
                raise _EvalFailure(p, "non-finite value")
            single.append(v)
        vals = np.array(single, dtype=complex)
    return vals


class _EvalFailure(Exception):
    def __init__(self, z: complex, why: str):
        super().__init__(f"evaluation failed at z = {float(z.real)!r}{float(z.imag):+}i: {why}")


# --------------------------------------------------------------------------
# commands


def cmd_eval(args) -> int:
    cfg = make_config(args)
    if (args.points is None) == (args.grid is None):
        raise UsageError("give exactly one of --points FILE or --grid SPEC")
    z = read_points(args.points) if args.points is not None else parse_grid(args.grid)
    f = make_source(args, cfg)
    vals = _eval_points(f, z)
    write_csv(["re", "im", "q_re", "q_im"], ((p.real, p.imag, v.real, v.imag) for p, v in zip(z, vals)))
    return EXIT_OK


def cmd_extract(args) -> int:
    cfg = make_config(args)
    f = make_source(args, cfg)
    atoms = ()
    if args.atoms:
        atoms = tuple(_float(t, "--atoms") for t in args.atoms.split(",") if t.strip())
    lo, hi, step = -20.0, 20.0, 0.05
    if args.window:
        parts = args.window.split(":")
        if len(parts) != 3:
            raise UsageError("--window: expected LO:HI:STEP")
        lo, hi, step = (_float(p, "--window") for p in parts)
    try:
        grid = recover.SamplingGrid(lo, hi, step, atoms, args.tail, args.validation_tol)
    except ValidationError as exc:
        raise UsageError(str(exc)) from None
    try:
        rec = recover.recover(f, grid, cfg=cfg)
    except RecoveryError as exc:
        sys.stderr.write(f"qhkit: {exc}\n")
        if exc.data is not None:
            _emit(io.data_to_json(exc.data, residual=exc.residual, recovered=False))
        return EXIT_RECOVERY
    except LimitDivergence as exc:
        sys.stderr.write(f"qhkit: {exc}\n")
        return EXIT_RECOVERY
    _emit(
        io.data_to_json(
            rec.data,
            residual=rec.residual,
            tail=rec.tail,
            flagged=[float(x) for x in rec.flagged],
            recovered=True,
        )
    )
    return EXIT_OK


def cmd_check(args) -> int:
    cfg = make_config(args)
    cond = args.condition
    if cond in ("zero-lower", "zero-upper"):
        if args.data is None:
            raise UsageError(f"check {cond} needs --data FILE (the test is stated on data)")
        D = load_data(args.data)
        rep = characterize.check_zero_lower(D, cfg=cfg, half=cond.split("-")[1])
    else:
        f = make_source(args, cfg)
        if cond == "growth":
            rep = characterize.check_growth(f)
        elif cond == "regularity":
            rep = characterize.check_regularity(f, cfg=cfg)
        elif cond == "membership":
            rep = characterize.is_quasi_herglotz(f, cfg=cfg)
        else:
            rep = characterize.check_real_symmetry(f)
    _emit(io.document("report", condition=rep.condition, verdict=rep.verdict, witness=rep.witness,
                      trace=rep.trace, details=rep.details))
    return VERDICT_EXIT[rep.verdict]


def cmd_rational(args) -> int:
    lower = args.lower if args.lower is not None else args.upper
    pair = rational.RationalPair(args.upper, lower)
    if args.action == "classify":
        c = rational.classify_pair(pair)
        doc = io.document("classification", verdict=c.verdict, reason=c.reason, condition=c.condition,
                          roots=c.roots)
        if c.decomposition is not None:
            doc["decomposition"] = _decomposition_json(c.decomposition)
        _emit(doc)
        return VERDICT_EXIT[c.verdict]
    try:
        if args.action == "decompose":
            d = rational.decompose(pair)
            doc = {"schema": io.SCHEMA, "type": "decomposition"}
            doc.update(_decomposition_json(d))
            _emit(doc)
            return EXIT_OK
        D = rational.rational_to_data(pair)
    except ClassificationError as exc:
        _emit(io.document("classification", verdict=rational.REJECTED, reason=str(exc), condition=exc.condition,
                          roots=[exc.witness] if exc.witness is not None else []))
        return EXIT_VIOLATED
    _emit(io.data_to_json(D))
    return EXIT_OK


def _decomposition_json(d) -> dict:
    return {
        "b": io.complex_to_json(d.b),
        "common": str(d.common),
        "upper_part": {"a": io.complex_to_json(d.a1), "r": str(d.upper_part)},
        "lower_part": {"a": io.complex_to_json(d.a2), "r": str(d.lower_part)},
        "real_poles": [{"t": t, "residue": io.complex_to_json(r)} for t, r in d.real_poles],
    }


def cmd_disk(args) -> int:
    cfg = make_config(args)
    if args.action == "from":
        if args.disk is None:
            raise UsageError("disk from needs --disk FILE")
        E = io.disk_from_json(io.load_json(args.disk))
        try:
            D = disk.from_disk(E, cfg)
        except ValidationError as exc:
            sys.stderr.write(f"qhkit: {exc}\n")
            return EXIT_EVAL
        _emit(io.data_to_json(D))
        return EXIT_OK
    if args.data is None:
        raise UsageError(f"disk {args.action} needs --data FILE")
    D = load_data(args.data)
    if args.action == "to":
        _emit(io.disk_to_json(disk.to_disk(D, cfg)))
        return EXIT_OK
    rep = disk.identity_check(D, cfg=cfg)
    ok = rep.residual <= args.tol
    _emit(io.document("identity", residual=rep.residual, c=rep.c, points=rep.points, tol=args.tol,
                      verdict=characterize.SATISFIED if ok else characterize.VIOLATED))
    return EXIT_OK if ok else EXIT_VIOLATED


def cmd_sumrule(args) -> int:
    cfg = make_config(args)
    f = make_source(args, cfg)
    eps = tuple(_float(e, "--eps") for e in args.eps.split(","))
    if any(not 0 < e < 1 for e in eps):
        raise UsageError("--eps values must lie in (0, 1)")
    rep = asympt.sum_rule_check(f, args.k, eps, cfg=cfg)
    _emit(io.document("sumrule", k=rep.k, verdict=rep.verdict, predicted=rep.predicted,
                      limit_estimate=rep.limit_estimate, reason=rep.reason,
                      inner=[{"eps": e, "limit": v, "error": er, "converged": c} for e, v, er, c in rep.inner],
                      table=[{"eps": e, "y": y, "integral": v} for e, y, v in rep.table]))
    return VERDICT_EXIT.get(rep.verdict, EXIT_INCONCLUSIVE)


def cmd_plot(args) -> int:
    cfg = make_config(args)
    f = make_source(args, cfg)
    if not args.y > 0:
        raise UsageError("--y must be positive")
    x = parse_range(args.range, "--range")
    up = _eval_points(f, x + 1j * args.y)
    if args.what == "value":
        write_csv(["x", "q_re", "q_im"], ((a, v.real, v.imag) for a, v in zip(x, up)))
    else:
        lo = _eval_points(f, x - 1j * args.y)
        jump = (up - lo) / 2j
        write_csv(["x", "jump_re", "jump_im"], ((a, v.real, v.imag) for a, v in zip(x, jump)))
    return EXIT_OK


# --------------------------------------------------------------------------
# parser


def _tol_flags(p):
    p.add_argument("--abs-tol", type=float, default=None, help="absolute quadrature tolerance")
    p.add_argument("--rel-tol", type=float, default=None, help="relative quadrature tolerance")
    p.add_argument("--max-subdiv", type=int, default=None, help="maximum bisection depth")


def _source_flags(p, rational_ok: bool = True):
    p.add_argument("--data", metavar="FILE", help="data triple JSON")
    p.add_argument("--builtin", metavar="NAME", help="one of: " + ", ".join(BUILTIN_NAMES))
    if rational_ok:
        p.add_argument("--upper", metavar="EXPR", help="rational expression on the upper half-plane")
        p.add_argument("--lower", metavar="EXPR", help="rational expression on the lower half-plane (default: upper)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qhkit", description="Quasi-Herglotz functions from the command line.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate q on points, CSV re,im,q_re,q_im")
    _source_flags(p)
    p.add_argument("--points", metavar="FILE", help="CSV of re,im rows")
    p.add_argument("--grid", metavar="SPEC", help="im:Y[,re:LO:HI:STEP]")
    _tol_flags(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("extract", help="recover the data triple from boundary behaviour")
    _source_flags(p)
    p.add_argument("--atoms", metavar="LIST", help="comma-separated candidate atom locations")
    p.add_argument("--window", metavar="LO:HI:STEP", help="density sampling window (default -20:20:0.05)")
    p.add_argument("--tail", choices=recover.TAIL_MODELS, default="auto", help="density model beyond the window")
    p.add_argument("--validation-tol", type=float, default=1e-3, help="largest accepted reconstruction residual")
    _tol_flags(p)
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("check", help="numerical verdict on a condition")
    p.add_argument(
        "condition", choices=("growth", "regularity", "membership", "zero-lower", "zero-upper", "real-symmetry")
    )
    _source_flags(p)
    _tol_flags(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("rational", help="classify, decompose or convert a piecewise rational function")
    p.add_argument("action", choices=("classify", "decompose", "to-data"))
    p.add_argument("--upper", metavar="EXPR", required=True)
    p.add_argument("--lower", metavar="EXPR", help="default: same as --upper")
    p.set_defaults(func=cmd_rational)

    p = sub.add_parser("disk", help="Cauchy-transform form on the unit disk")
    p.add_argument("action", choices=("to", "from", "verify"))
    p.add_argument("--data", metavar="FILE")
    p.add_argument("--disk", metavar="FILE")
    p.add_argument("--tol", type=float, default=1e-8, help="verify: largest accepted residual")
    _tol_flags(p)
    p.set_defaults(func=cmd_disk)

    p = sub.add_parser("sumrule", help="iterated-limit sum rule against the expansion coefficients")
    _source_flags(p)
    p.add_argument("--k", type=int, default=0, help="moment x**k")
    p.add_argument("--eps", default="0.2,0.1,0.05,0.02", help="comma-separated eps schedule")
    _tol_flags(p)
    p.set_defaults(func=cmd_sumrule)

    p = sub.add_parser("plot", help="boundary traces as CSV")
    _source_flags(p)
    p.add_argument("--y", type=float, default=0.01, help="distance from the real axis")
    p.add_argument("--range", default="-5:5:0.1", metavar="LO:HI:STEP")
    p.add_argument("--what", choices=("jump", "value"), default="value")
    _tol_flags(p)
    p.set_defaults(func=cmd_plot)
    return ap


# options whose values may legitimately start with '-' ("-1/z", "-5:5:0.1")
_VALUE_OPTS = {"--upper", "--lower", "--range", "--window", "--atoms", "--grid", "--eps", "--y"}


def _glue_values(argv: list[str]) -> list[str]:
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in _VALUE_OPTS and i + 1 < len(argv) and argv[i + 1].startswith("-") and not argv[i + 1].startswith("--"):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def main(argv=None) -> int:
    ap = build_parser()
    argv = _glue_values(list(sys.argv[1:] if argv is None else argv))
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        return args.func(args)
    except (UsageError, ValidationError) as exc:
        sys.stderr.write(f"qhkit: {exc}\n")
        return EXIT_MALFORMED
    except _EvalFailure as exc:
        sys.stderr.write(f"qhkit: {exc}\n")
        return EXIT_EVAL
    except (DomainError, PoleError, QuadratureError) as exc:
        sys.stderr.write(f"qhkit: {exc}\n")
        return EXIT_EVAL
    except BrokenPipeError:
        # downstream closed the pipe (e.g. `| head`); not an error of ours
        sys.stderr.close()
        return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
