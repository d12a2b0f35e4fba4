"""
Read and write bound problems as JSON documents.

    {
      "support": {"lo": 0, "hi": "inf"},
      "target": {"kind": "call", "d": 50},
      "constraints": [
        {"g": {"kind": "monomial", "power": 1}, "lo": 50, "hi": 50},
        {"g": {"kind": "monomial", "power": 2}, "lo": 2725, "hi": 2725}
      ],
      "sense": "upper",
      "family": {"variant": "khintchine_uniform", "mode": 45},
      "cg_epsilon": 1e-8,
      "search_cap": 1000
    }

Functions are either a named payoff (``call``, ``coinsurance``, ``variance``,
``semivariance``, ``indicator``, ``monomial``) or ``piecewise`` with a list of
``{"interval": [a, b], "coeffs": [c0, c1, ...]}`` pieces. Infinite values are written as
the strings "inf" and "-inf".
"""

import json
import logging
import math
import re
from pathlib import Path
from typing import Optional

from src.model import (
    MixtureFamily,
    MomentConstraint,
    ProblemSpec,
    call_payoff,
    coinsurance_payoff,
    indicator_payoff,
    monomial,
    semivariance_payoff,
    variance_payoff,
)
from src.polyalg import Domain, PiecewiseFunction, Polynomial
from src.utils.errors import ProblemFileError, SemiboundsError, ValidationError

logger = logging.getLogger(__name__)

TOP_LEVEL_FIELDS = {
    "support",
    "target",
    "constraints",
    "sense",
    "family",
    "cg_epsilon",
    "search_cap",
}
REQUIRED_FIELDS = ("support", "target", "constraints")
FUNCTION_FIELDS = {
    "call": {"d"},
    "coinsurance": {"d", "u", "gamma"},
    "variance": {"mu"},
    "semivariance": {"mu"},
    "indicator": {"lo", "hi"},
    "monomial": {"power"},
    "piecewise": {"pieces"},
}
FAMILY_FIELDS = {"variant", "mode", "alpha", "eta"}


class _Reader:
    """Field-path aware accessors over a decoded document and its source text."""

    def __init__(self, text: str):
        self.text = text

    def line_of(self, key: str) -> Optional[int]:
        match = re.search(rf'"{re.escape(key)}"\s*:', self.text)
        return self.text.count("\n", 0, match.start()) + 1 if match else None

    def fail(self, message: str, path: str) -> ProblemFileError:
        return ProblemFileError(message, field=path, line=self.line_of(path.split(".")[-1]))

    def check_fields(self, obj, allowed: set, path: str, required=()):
        if not isinstance(obj, dict):
            raise self.fail(f"Expected an object, got {type(obj).__name__}", path or "<root>")
        for key in obj:
            if key not in allowed:
                where = f"{path}.{key}" if path else key
                raise ProblemFileError(
                    f"Unknown field '{key}' (allowed: {', '.join(sorted(allowed))})",
                    field=where,
                    line=self.line_of(key),
                )
        for key in required:
            if key not in obj:
                where = f"{path}.{key}" if path else key
                raise self.fail(f"Missing required field '{key}'", where)

    def number(self, value, path: str) -> float:
        if isinstance(value, str) and value.strip().lower() in ("inf", "+inf", "-inf"):
            return -math.inf if value.strip().startswith("-") else math.inf
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise self.fail(f"Expected a number or \"inf\", got {value!r}", path)
        return float(value)


def _encode_number(value: float):
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return value


def _parse_piecewise(reader: _Reader, pieces, path: str) -> PiecewiseFunction:
    if not isinstance(pieces, list) or not pieces:
        raise reader.fail("Expected a non-empty list of pieces", path)
    breakpoints, polys = [], []
    for i, entry in enumerate(pieces):
        where = f"{path}[{i}]"
        reader.check_fields(entry, {"interval", "coeffs"}, where, ("interval", "coeffs"))
        interval = entry["interval"]
        if not isinstance(interval, list) or len(interval) != 2:
            raise reader.fail("Interval must be a pair [lo, hi]", f"{where}.interval")
        lo = reader.number(interval[0], f"{where}.interval")
        hi = reader.number(interval[1], f"{where}.interval")
        if breakpoints and lo != breakpoints[-1]:
            raise reader.fail(f"Piece starts at {lo} but the previous one ends at "
                              f"{breakpoints[-1]}", f"{where}.interval")
        if not breakpoints:
            breakpoints.append(lo)
        breakpoints.append(hi)
        coeffs = entry["coeffs"]
        if not isinstance(coeffs, list) or not coeffs:
            raise reader.fail("Coefficients must be a non-empty list", f"{where}.coeffs")
        polys.append(Polynomial([reader.number(c, f"{where}.coeffs") for c in coeffs]))
    return PiecewiseFunction.from_polynomials(breakpoints, polys)


def _parse_function(reader: _Reader, obj, support: Domain, path: str) -> PiecewiseFunction:
    if not isinstance(obj, dict) or "kind" not in obj:
        raise reader.fail("Function needs a 'kind'", path)
    kind = obj["kind"]
    if kind not in FUNCTION_FIELDS:
        raise reader.fail(
            f"Unknown function kind '{kind}' (allowed: {', '.join(sorted(FUNCTION_FIELDS))})",
            f"{path}.kind",
        )
    fields = FUNCTION_FIELDS[kind]
    reader.check_fields(obj, fields | {"kind"}, path, sorted(fields))

    if kind == "piecewise":
        return _parse_piecewise(reader, obj["pieces"], f"{path}.pieces")
    if kind == "monomial":
        power = obj["power"]
        if isinstance(power, bool) or not isinstance(power, int):
            raise reader.fail(f"Power must be an integer, got {power!r}", f"{path}.power")
        return monomial(power, support)
    args = {k: reader.number(obj[k], f"{path}.{k}") for k in fields}
    builders = {
        "call": lambda: call_payoff(args["d"], support),
        "coinsurance": lambda: coinsurance_payoff(args["d"], args["u"], args["gamma"], support),
        "variance": lambda: variance_payoff(args["mu"], support),
        "semivariance": lambda: semivariance_payoff(args["mu"], support),
        "indicator": lambda: indicator_payoff(args["lo"], args["hi"], support),
    }
    return builders[kind]()


def _parse_family(reader: _Reader, obj) -> MixtureFamily:
    reader.check_fields(obj, FAMILY_FIELDS, "family", ("variant",))
    params = {k: reader.number(v, f"family.{k}") for k, v in obj.items() if k != "variant"}
    try:
        return MixtureFamily(obj["variant"], **params)
    except ValidationError as e:
        raise ProblemFileError(e.message, field=f"family.{e.field}", line=reader.line_of(e.field))


def _parse_constraint(reader: _Reader, obj, support: Domain, j: int) -> MomentConstraint:
    path = f"constraints[{j}]"
    reader.check_fields(obj, {"g", "lo", "hi", "label"}, path, ("g", "lo", "hi"))
    return MomentConstraint(
        g=_parse_function(reader, obj["g"], support, f"{path}.g"),
        sigma_lo=reader.number(obj["lo"], f"{path}.lo"),
        sigma_hi=reader.number(obj["hi"], f"{path}.hi"),
        label=str(obj.get("label", "")),
    )


def parse_problem(document: dict, text: str = "") -> ProblemSpec:
    """
    Build a validated ProblemSpec from a decoded problem document.

    Raises:
        ProblemFileError: unknown or missing fields, bad values, failed validation
    """
    reader = _Reader(text)
    reader.check_fields(document, TOP_LEVEL_FIELDS, "", REQUIRED_FIELDS)

    reader.check_fields(document["support"], {"lo", "hi"}, "support", ("lo", "hi"))
    try:
        support = Domain(
            reader.number(document["support"]["lo"], "support.lo"),
            reader.number(document["support"]["hi"], "support.hi"),
        )
        target = _parse_function(reader, document["target"], support, "target")
        constraints = document["constraints"]
        if not isinstance(constraints, list):
            raise reader.fail("Expected a list of constraints", "constraints")
        family = (
            _parse_family(reader, document["family"])
            if "family" in document
            else MixtureFamily.dirac()
        )
        spec = ProblemSpec(
            support=support,
            target=target,
            constraints=tuple(
                _parse_constraint(reader, c, support, j) for j, c in enumerate(constraints)
            ),
            sense=document.get("sense", "upper"),
            family=family,
            cg_epsilon=(
                reader.number(document["cg_epsilon"], "cg_epsilon")
                if document.get("cg_epsilon") is not None
                else None
            ),
            search_cap=(
                reader.number(document["search_cap"], "search_cap")
                if document.get("search_cap") is not None
                else None
            ),
        )
        return spec.validate()
    except ProblemFileError:
        raise
    except ValidationError as e:
        field = e.field or ""
        raise ProblemFileError(e.message, field=field, line=reader.line_of(field.split(".")[-1]))
    except SemiboundsError as e:
        raise ProblemFileError(str(e))


def parse_problem_file(path) -> ProblemSpec:
    """
    Read a JSON problem file.

    Raises:
        ProblemFileError: missing file, malformed JSON (with its line) or invalid content
    """
    file_path = Path(path)
    if not file_path.exists():
        raise ProblemFileError(f"Problem file not found: {path}")
    text = file_path.read_text(encoding="utf-8")
    try:
        document = json.loads(text)
    except json.JSONDecodeError as e:
        raise ProblemFileError(f"Malformed JSON: {e.msg}", line=e.lineno)
    spec = parse_problem(document, text)
    logger.info(f"Loaded problem from {file_path}: {spec.describe()}")
    return spec


def function_to_dict(fn: PiecewiseFunction) -> dict:
    pieces = []
    for piece, lo, hi in zip(fn.pieces, fn.breakpoints[:-1], fn.breakpoints[1:]):
        if piece.is_rational:
            raise ValidationError("Rational pieces cannot be written to a problem file")
        pieces.append(
            {
                "interval": [_encode_number(lo), _encode_number(hi)],
                "coeffs": list(piece.numerator.coefficients),
            }
        )
    return {"kind": "piecewise", "pieces": pieces}


def problem_to_dict(spec: ProblemSpec) -> dict:
    """Problem document for ``spec``; every function is written in piecewise form."""
    document = {
        "support": {
            "lo": _encode_number(spec.support.lower),
            "hi": _encode_number(spec.support.upper),
        },
        "target": function_to_dict(spec.target),
        "constraints": [
            {
                "g": function_to_dict(c.g),
                "lo": _encode_number(c.sigma_lo),
                "hi": _encode_number(c.sigma_hi),
                "label": c.label,
            }
            for c in spec.constraints
        ],
        "sense": spec.sense.value,
        "family": spec.family.to_dict(),
    }
    if spec.cg_epsilon is not None:
        document["cg_epsilon"] = spec.cg_epsilon
    if spec.search_cap is not None:
        document["search_cap"] = _encode_number(spec.search_cap)
    return document


def dump_problem_file(spec: ProblemSpec, path) -> Path:
    file_path = Path(path)
    file_path.parent.mkdir(parents=True, exist_ok=True)
    file_path.write_text(json.dumps(problem_to_dict(spec), indent=2) + "\n", encoding="utf-8")
    logger.info(f"Wrote problem file {file_path}")
    return file_path
