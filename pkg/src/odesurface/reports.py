"""Deterministic JSON output.

The standard encoder prints floats with ``repr``; reports here print every
float with 17 significant digits and map NaN and infinities to ``null``, so
identical runs give byte-identical files.
"""

from __future__ import annotations

import json
import math

import numpy as np

SCHEMA_VERSION = 1


def _float(v: float) -> str:
    if not math.isfinite(v):
        return "null"
    text = format(v, ".17g")
    if not any(c in text for c in ".en"):
        text += ".0"
    return text


def _emit(obj, indent: int, level: int, out: list) -> None:
    pad = "\n" + " " * (indent * (level + 1))
    end = "\n" + " " * (indent * level)
    if obj is None or obj is True or obj is False or isinstance(obj, np.bool_):
        out.append(json.dumps(None if obj is None else bool(obj)))
    elif isinstance(obj, (int, np.integer)) and not isinstance(obj, bool):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        out.append(_float(float(obj)))
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{")
        for i, (k, v) in enumerate(obj.items()):
            out.append(("," if i else "") + pad + json.dumps(str(k)) + ": ")
            _emit(v, indent, level + 1, out)
        out.append(end + "}")
    elif isinstance(obj, (list, tuple, np.ndarray)):
        items = list(obj)
        if not items:
            out.append("[]")
            return
        out.append("[")
        for i, v in enumerate(items):
            out.append(("," if i else "") + pad)
            _emit(v, indent, level + 1, out)
        out.append(end + "]")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj, indent: int = 2) -> str:
    out: list[str] = []
    _emit(obj, indent, 0, out)
    return "".join(out) + "\n"
