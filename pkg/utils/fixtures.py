import json
import os
import re
from functools import lru_cache
from typing import Dict, List, Optional

from loguru import logger

from algebra.fields import QQ, Field, QuadraticField
from algebra.matrix import IntMatrix, load_matrix_csv
from algebra.polynomial import ExactPolynomial, parse_coefficient
from fibration.curve import FunctionFieldCurve
from fibration.group_law import CurvePoint
from utils.errors import FixtureError

FIXTURES_DIR = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "fixtures")

CURVE_FILES = {
    "es": "es.txt",
    "neron-s": "neron_s.txt",
    "e-sigma": "e_sigma.txt",
    "neron-sigma": "neron_sigma.txt",
}

SECTION_FILES = {
    "es": ["es_torsion.txt", "es_sigma.txt"],
    "neron-s": ["neron_s_sigma.txt"],
    "e-sigma": ["e_sigma_torsion.txt", "e_sigma_sigma.txt"],
    "neron-sigma": [],
}

RECORDED_VALUES_FILE = "paper_values.json"


def fixture_path(*parts: str) -> str:
    return os.path.join(FIXTURES_DIR, *parts)


def _content_lines(path: str) -> List[List[str]]:
    try:
        with open(path) as fh:
            raw = fh.readlines()
    except OSError as e:
        raise FixtureError(f"Failed to read fixture {path}: {e}") from e
    return [line.split("#", 1)[0].split() for line in raw if line.split("#", 1)[0].strip()]


def parse_field(token: str) -> Field:
    if token == "Q":
        return QQ
    m = re.fullmatch(r"Q\((-?\d+)\)", token)
    if not m:
        raise FixtureError(f"Unknown field {token!r}")
    return QuadraticField(int(m.group(1)))


def load_matrix(name: str) -> IntMatrix:
    """ns20 or t2"""
    return load_matrix_csv(fixture_path(f"{name}.csv"))


@lru_cache(maxsize=None)
def load_curve(model: str) -> FunctionFieldCurve:
    if model not in CURVE_FILES:
        raise FixtureError(f"Unknown curve model {model!r}; known: {', '.join(CURVE_FILES)}")
    path = fixture_path("curves", CURVE_FILES[model])
    var, field, name = "s", QQ, model
    coeffs: Dict[str, List[str]] = {}
    for tokens in _content_lines(path):
        key, values = tokens[0], tokens[1:]
        if key == "var":
            var = values[0]
        elif key == "field":
            field = parse_field(values[0])
        elif key == "name":
            name = values[0]
        elif key in ("a1", "a2", "a3", "a4", "a6"):
            coeffs[key] = values
        else:
            raise FixtureError(f"{path}: unexpected key {key!r}")
    missing = {"a1", "a2", "a3", "a4", "a6"} - set(coeffs)
    if missing:
        raise FixtureError(f"{path}: missing {sorted(missing)}")
    polys = [
        ExactPolynomial(tuple(parse_coefficient(c, field) for c in coeffs[k]), var, field)
        for k in ("a1", "a2", "a3", "a4", "a6")
    ]
    logger.debug(f"Loaded curve {name} over {field!r} in {var}")
    return FunctionFieldCurve(*polys, name=name)


def _factor_line(values: List[str], var: str, field: Field) -> ExactPolynomial:
    power = 1
    if values and values[-1].startswith("^"):
        power = int(values[-1][1:])
        values = values[:-1]
    poly = ExactPolynomial(tuple(parse_coefficient(c, field) for c in values), var, field)
    return poly ** power


def load_sections(filename: str) -> Dict[str, CurvePoint]:
    """Points of one section file, keyed by name; each coordinate is the product of its lines"""
    path = fixture_path("sections", filename)
    var, field = "s", QQ
    points: Dict[str, Dict[str, Optional[ExactPolynomial]]] = {}
    current: Optional[str] = None
    for tokens in _content_lines(path):
        key, values = tokens[0], tokens[1:]
        if key == "var":
            var = values[0]
        elif key == "field":
            field = parse_field(values[0])
        elif key == "point":
            current = values[0]
            points[current] = {"X": None, "Y": None, "Z": None}
        elif key in ("X", "Y", "Z"):
            if current is None:
                raise FixtureError(f"{path}: coordinate before any 'point' line")
            factor = _factor_line(values, var, field)
            prev = points[current][key]
            points[current][key] = factor if prev is None else prev * factor
        else:
            raise FixtureError(f"{path}: unexpected key {key!r}")
    out: Dict[str, CurvePoint] = {}
    for name, coords in points.items():
        if any(v is None for v in coords.values()):
            raise FixtureError(f"{path}: point {name} lacks a coordinate")
        out[name] = CurvePoint(coords["X"], coords["Y"], coords["Z"])
    return out


def sections_for(model: str) -> Dict[str, CurvePoint]:
    points: Dict[str, CurvePoint] = {}
    for filename in SECTION_FILES.get(model, []):
        points.update(load_sections(filename))
    return points


@lru_cache(maxsize=None)
def load_recorded_values() -> Dict[str, dict]:
    path = fixture_path(RECORDED_VALUES_FILE)
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as e:
        raise FixtureError(f"Failed to load {path}: {e}") from e


def recorded_value(key: str):
    values = load_recorded_values()
    if key not in values:
        raise FixtureError(f"No recorded value {key!r}")
    return values[key]["value"]
