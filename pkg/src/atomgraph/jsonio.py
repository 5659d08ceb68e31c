"""Deterministic JSON reading and writing for all package objects."""

from __future__ import annotations

import json
import math
import sys
from collections.abc import Mapping
from fractions import Fraction
from pathlib import Path

import numpy as np

from .errors import MalformedTable
from .graph import AtomGraph
from .pba import PartialBooleanAlgebra
from .quantum import projectors_from_dict

SIG_DIGITS = 10


def normalize(obj):
    """Plain JSON-ready structure with floats rounded to ``SIG_DIGITS`` significant digits."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating, Fraction)):
        x = float(obj)
        if not math.isfinite(x):
            raise ValueError("cannot serialise a non-finite number")
        x = float(f"{x:.{SIG_DIGITS}g}")
        return 0.0 if x == 0 else x
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, Mapping):
        return {str(k): normalize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [normalize(v) for v in obj]
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps(obj) -> str:
    return json.dumps(normalize(obj), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def read_json(path: str | Path):
    """Parse JSON from a file, or from stdin when ``path`` is ``-``."""
    name = str(path)
    text = sys.stdin.read() if name == "-" else Path(name).read_text(encoding="utf-8")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        where = "<stdin>" if name == "-" else name
        raise MalformedTable(f"{where}:{exc.lineno}:{exc.colno}: {exc.msg}") from None


def write_text(text: str, path: str | Path | None) -> None:
    if path is None or str(path) == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def kind_of(data) -> str:
    """One of ``algebra``, ``graph``, ``projectors``, ``state``, ``weights``."""
    if isinstance(data, Mapping):
        for key, kind in (("elements", "algebra"), ("vertices", "graph"), ("projectors", "projectors"),
                          ("values", "state"), ("weights", "weights")):
            if key in data:
                return kind
    raise MalformedTable("unrecognised JSON document")


def load_object(data):
    """Build the object a JSON document describes."""
    kind = kind_of(data)
    if kind == "algebra":
        return PartialBooleanAlgebra.from_dict(data)
    if kind == "graph":
        return AtomGraph.from_dict(data)
    if kind == "projectors":
        return projectors_from_dict(data)
    if kind == "state":
        return state_values(data)
    raise MalformedTable(f"cannot build an object from a {kind} document")


def state_values(data: Mapping) -> dict[str, float]:
    vals = data.get("values") if isinstance(data, Mapping) else None
    if not isinstance(vals, Mapping):
        raise MalformedTable('state must look like {"values": {name: number}}')
    out = {}
    for k, v in vals.items():
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise MalformedTable(f"state value of {k!r} is not a number")
        out[str(k)] = float(v)
    return out
