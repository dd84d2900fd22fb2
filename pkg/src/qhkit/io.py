"""JSON documents (schema ``qhkit/1``) for data triples, disk data and reports.

Complex scalars are ``{"re": x, "im": y}``; polynomial coefficients are
``[re, im]`` pairs in ascending degree.
"""

from __future__ import annotations

import json
import math
from dataclasses import is_dataclass

import numpy as np

from .core import DataTriple
from .disk import INFINITY, CircleMeasure, DiskData, angle_of, chart_point
from .errors import ValidationError
from .measure import Atom, ComplexMeasure, Density
from .poly import Polynomial

__all__ = [
    "SCHEMA",
    "complex_to_json",
    "complex_from_json",
    "poly_to_json",
    "poly_from_json",
    "density_to_json",
    "density_from_json",
    "measure_to_json",
    "measure_from_json",
    "data_to_json",
    "data_from_json",
    "disk_to_json",
    "disk_from_json",
    "to_jsonable",
    "document",
    "validate_document",
    "load_json",
    "dumps",
]

SCHEMA = "qhkit/1"


def _num(x, what: str) -> float:
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise ValidationError(f"{what}: expected a number, got {type(x).__name__}")
    x = float(x)
    if not math.isfinite(x):
        raise ValidationError(f"{what}: value must be finite")
    return x


def complex_to_json(c) -> dict:
    c = complex(c)
    return {"re": float(c.real), "im": float(c.imag)}


def complex_from_json(obj, what: str = "complex") -> complex:
    """Accepts ``{"re", "im"}``, a ``[re, im]`` pair or a plain real number."""
    if isinstance(obj, dict):
        extra = set(obj) - {"re", "im"}
        if extra or "re" not in obj:
            raise ValidationError(f"{what}: expected keys re, im")
        return complex(_num(obj["re"], what), _num(obj.get("im", 0.0), what))
    if isinstance(obj, (list, tuple)) and len(obj) == 2:
        return complex(_num(obj[0], what), _num(obj[1], what))
    return complex(_num(obj, what), 0.0)


def poly_to_json(p: Polynomial) -> list:
    return [[float(c.real), float(c.imag)] for c in p.coeffs]


def poly_from_json(obj, what: str = "polynomial") -> Polynomial:
    if not isinstance(obj, list):
        raise ValidationError(f"{what}: expected a list of [re, im] pairs")
    return Polynomial(tuple(complex_from_json(c, what) for c in obj))


# --------------------------------------------------------------------------
# measures


def density_to_json(d: Density) -> dict:
    if d.trig is not None:
        return {"kind": "trig", "phase": d.trig, "omega": d.omega, "num": poly_to_json(d.num), "den": poly_to_json(d.den)}
    bounded = math.isfinite(d.lo) and math.isfinite(d.hi)
    if bounded and d.den.degree == 0:
        return {"kind": "bump", "lo": d.lo, "hi": d.hi, "coeffs": poly_to_json(d.num / d.den.coeffs[0])}
    if bounded or math.isfinite(d.lo) or math.isfinite(d.hi):
        return {
            "kind": "piece",
            "lo": d.lo if math.isfinite(d.lo) else None,
            "hi": d.hi if math.isfinite(d.hi) else None,
            "num": poly_to_json(d.num),
            "den": poly_to_json(d.den),
        }
    return {"kind": "rational", "num": poly_to_json(d.num), "den": poly_to_json(d.den)}


def _bound(x, default: float, what: str) -> float:
    return default if x is None else _num(x, what)


def density_from_json(obj) -> Density:
    if not isinstance(obj, dict) or "kind" not in obj:
        raise ValidationError("density: expected an object with a 'kind'")
    kind = obj["kind"]
    try:
        if kind == "rational":
            return Density(poly_from_json(obj["num"]), poly_from_json(obj["den"]))
        if kind == "trig":
            phase = obj["phase"]
            if phase not in ("sin", "cos"):
                raise ValidationError(f"density: trig phase must be sin or cos, got {phase!r}")
            return Density(
                poly_from_json(obj["num"]), poly_from_json(obj["den"]), trig=phase, omega=_num(obj["omega"], "omega")
            )
        if kind == "bump":
            return Density.bump(_num(obj["lo"], "lo"), _num(obj["hi"], "hi"), poly_from_json(obj["coeffs"]).coeffs)
        if kind == "piece":
            return Density(
                poly_from_json(obj["num"]),
                poly_from_json(obj["den"]),
                _bound(obj.get("lo"), -math.inf, "lo"),
                _bound(obj.get("hi"), math.inf, "hi"),
            )
    except KeyError as exc:
        raise ValidationError(f"density of kind {kind!r} is missing field {exc.args[0]!r}") from None
    raise ValidationError(f"unknown density kind {kind!r}")


def measure_to_json(nu: ComplexMeasure) -> dict:
    return {
        "atoms": [{"t": a.t, "w": complex_to_json(a.w)} for a in nu.atoms],
        "densities": [density_to_json(d) for d in nu.densities],
    }


def measure_from_json(obj) -> ComplexMeasure:
    if not isinstance(obj, dict):
        raise ValidationError("measure: expected an object")
    atoms = []
    for a in obj.get("atoms", []):
        if not isinstance(a, dict) or "t" not in a or "w" not in a:
            raise ValidationError("atom: expected {t, w}")
        atoms.append(Atom(_num(a["t"], "atom t"), complex_from_json(a["w"], "atom w")))
    dens = [density_from_json(d) for d in obj.get("densities", [])]
    return ComplexMeasure(tuple(atoms), tuple(dens))


def data_to_json(D: DataTriple, **extra) -> dict:
    doc = {
        "schema": SCHEMA,
        "type": "data",
        "a": complex_to_json(D.a),
        "b": complex_to_json(D.b),
        "measure": measure_to_json(D.measure),
    }
    doc.update(extra)
    return doc


def data_from_json(obj) -> DataTriple:
    if not isinstance(obj, dict):
        raise ValidationError("data: expected an object")
    _check_schema(obj)
    for key in ("a", "b"):
        if key not in obj:
            raise ValidationError(f"data: missing field {key!r}")
    return DataTriple(
        complex_from_json(obj["a"], "a"),
        complex_from_json(obj["b"], "b"),
        measure_from_json(obj.get("measure", {})),
    )


def disk_to_json(E: DiskData, **extra) -> dict:
    """Atoms on ``(0, 2pi)`` are keyed by angle ``s``; densities are given in
    the chart variable ``t = -cot(s/2)``."""
    doc = {
        "schema": SCHEMA,
        "type": "disk",
        "c": complex_to_json(E.c),
        "atom_at_1": complex_to_json(E.sigma.atom_at_1),
        "atoms": [{"s": angle_of(a.t), "w": complex_to_json(a.w)} for a in E.sigma.chart.atoms],
        "densities": [density_to_json(d) for d in E.sigma.chart.densities],
        "density_variable": "t=-cot(s/2)",
    }
    doc.update(extra)
    return doc


def disk_from_json(obj) -> DiskData:
    if not isinstance(obj, dict):
        raise ValidationError("disk: expected an object")
    _check_schema(obj)
    if "c" not in obj:
        raise ValidationError("disk: missing field 'c'")
    atoms = []
    for a in obj.get("atoms", []):
        if not isinstance(a, dict) or "s" not in a or "w" not in a:
            raise ValidationError("disk atom: expected {s, w}")
        s = _num(a["s"], "atom s")
        if not 0 < s < 2 * math.pi:
            raise ValidationError("disk atom angles must lie in (0, 2pi); use atom_at_1 for angle 0")
        atoms.append(Atom(chart_point(s), complex_from_json(a["w"], "atom w")))
    dens = tuple(density_from_json(d) for d in obj.get("densities", []))
    sigma = CircleMeasure(complex_from_json(obj.get("atom_at_1", 0.0), "atom_at_1"), ComplexMeasure(tuple(atoms), dens))
    return DiskData(complex_from_json(obj["c"], "c"), sigma)


def _check_schema(obj: dict):
    s = obj.get("schema")
    if s is not None and s != SCHEMA:
        raise ValidationError(f"unsupported schema {s!r} (expected {SCHEMA!r})")


# --------------------------------------------------------------------------
# generic documents


def to_jsonable(x):
    """Convert complex numbers, numpy values and dataclasses to plain JSON types."""
    if x is None or isinstance(x, (bool, str)):
        return x
    if x is INFINITY:
        return "infinity"
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return x if math.isfinite(x) else str(x)
    if isinstance(x, (complex, np.complexfloating)):
        return complex_to_json(x)
    if isinstance(x, np.ndarray):
        return [to_jsonable(v) for v in x.tolist()]
    if isinstance(x, DataTriple):
        d = data_to_json(x)
        d.pop("schema")
        return d
    if isinstance(x, ComplexMeasure):
        return measure_to_json(x)
    if isinstance(x, Density):
        return density_to_json(x)
    if isinstance(x, Polynomial):
        return poly_to_json(x)
    if is_dataclass(x) and not isinstance(x, type):
        return {k: to_jsonable(getattr(x, k)) for k in x.__dataclass_fields__}
    if isinstance(x, dict):
        return {str(k): to_jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set)):
        return [to_jsonable(v) for v in x]
    return str(x)


def document(kind: str, **fields) -> dict:
    doc = {"schema": SCHEMA, "type": kind}
    doc.update({k: to_jsonable(v) for k, v in fields.items()})
    return doc


_REQUIRED = {
    "data": ("a", "b", "measure"),
    "disk": ("c", "atom_at_1", "atoms", "densities"),
    "report": ("condition", "verdict"),
    "classification": ("verdict",),
    "decomposition": ("b", "common", "upper_part", "lower_part"),
    "sumrule": ("verdict", "table", "inner"),
    "identity": ("residual", "c"),
}


def validate_document(doc) -> str:
    """Check a document against the published shapes; returns its type.

    Data and disk documents are additionally parsed back into objects.
    """
    if not isinstance(doc, dict):
        raise ValidationError("document must be a JSON object")
    if doc.get("schema") != SCHEMA:
        raise ValidationError(f"document schema must be {SCHEMA!r}")
    kind = doc.get("type")
    if kind not in _REQUIRED:
        raise ValidationError(f"unknown document type {kind!r}")
    missing = [k for k in _REQUIRED[kind] if k not in doc]
    if missing:
        raise ValidationError(f"{kind} document is missing {', '.join(missing)}")
    if kind == "data":
        data_from_json(doc)
    elif kind == "disk":
        disk_from_json(doc)
    elif kind in ("report", "classification", "sumrule"):
        if not isinstance(doc["verdict"], str):
            raise ValidationError("verdict must be a string")
    return kind


def load_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None


def dumps(doc, indent: int | None = None) -> str:
    return json.dumps(doc, indent=indent, allow_nan=False)
