"""JSON input shared by the CLI and library users.

Triplet::

    {"dim": 1,
     "shift": [0.0],
     "covariance": [[1.0]],
     "levy_measure": {"kind": "atoms", "points": [[1.0]], "masses": [1.0]}}

``levy_measure`` kinds: ``atoms`` (points, masses), ``radial`` (directions,
weights, family), ``scaled`` (factor, inner), ``dilated`` (scale, inner),
``sum`` (parts), ``mixture`` (inner, mixing), ``zero``.  Radial families:
``{"name": "power_exp", "alpha", "rate"}``, ``{"name": "power", "alpha",
"r_min", "r_max"}`` (``r_max`` null for infinity), ``{"name": "exp", "rate"}``.

Mixing measure::

    {"kind": "point_masses", "times": [...], "masses": [...]}
    {"kind": "exponential"}
    {"kind": "rho_alpha", "alpha": 0.5}
    {"kind": "density", "form": "power_exp", "coef": c, "power": p,
     "rate": r, "lo": a, "hi": b}        # c t^p exp(-r t) on (a, b)
"""
from __future__ import annotations

import json
from pathlib import Path

from .exceptions import InvalidMeasure, InvalidTriplet
from .free_bridge import RealMeasure
from .levy_core import LevyTriplet, measure_from_dict
from .mixing import MixingMeasure, mixing_from_dict

TRIPLET_SCHEMA = {
    "type": "object",
    "required": ["dim"],
    "properties": {
        "dim": {"type": "integer", "minimum": 1, "maximum": 3},
        "shift": {"type": "array", "items": {"type": "number"}},
        "covariance": {"type": "array", "items": {"type": "array", "items": {"type": "number"}}},
        "levy_measure": {"type": "object", "required": ["kind"]},
    },
}

MIXING_SCHEMA = {
    "type": "object",
    "required": ["kind"],
    "properties": {"kind": {"enum": ["point_masses", "exponential", "rho_alpha", "density", "sum"]}},
}


def _read(src):
    if isinstance(src, dict):
        return src
    text = Path(src).read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidTriplet(f"{src}: not valid JSON ({exc})") from exc


def load_triplet(src) -> LevyTriplet:
    d = _read(src)
    try:
        return LevyTriplet.from_dict(d)
    except (KeyError, TypeError) as exc:
        raise InvalidTriplet(f"malformed triplet: {exc!r}") from exc


def load_measure(src, dim=None):
    """The Levy measure of a triplet file, without the Levy check."""
    d = _read(src)
    if "kind" not in d:
        # a triplet file; no levy_measure means the zero measure.  Shift and
        # covariance are still checked so a broken file is reported as such.
        try:
            LevyTriplet.from_dict({k: v for k, v in d.items() if k != "levy_measure"})
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidTriplet(f"malformed triplet: {exc!r}") from exc
        dim = int(d["dim"])
        d = d.get("levy_measure") or {"kind": "zero"}
    try:
        return measure_from_dict(d, dim)
    except (KeyError, TypeError) as exc:
        raise InvalidMeasure(f"malformed Levy measure: {exc!r}") from exc


def load_mixing(src) -> MixingMeasure:
    d = _read(src)
    try:
        return mixing_from_dict(d)
    except (KeyError, TypeError) as exc:
        raise InvalidMeasure(f"malformed mixing measure: {exc!r}") from exc


def parse_real_measure(text) -> RealMeasure:
    """``semicircle[:variance]``, ``free_poisson[:rate[:jump]]``,
    ``point:c`` or ``cauchy[:scale]``."""
    name, *args = text.split(":")
    vals = [float(a) for a in args]
    if name == "semicircle":
        return RealMeasure.semicircle(*vals)
    if name == "free_poisson":
        return RealMeasure.free_poisson(*vals)
    if name == "point":
        return RealMeasure.point_mass(*vals)
    if name == "cauchy":
        return RealMeasure.cauchy(*vals)
    raise InvalidMeasure(f"unknown free-side measure {name!r}")


def dumps(obj) -> str:
    return json.dumps(obj.to_dict() if hasattr(obj, "to_dict") else obj, indent=2)
