"""Deterministic JSON output with fixed decimal formatting.

Floats are written with 17 significant digits, which round-trips every
64-bit float exactly and makes repeated runs byte-identical.  Dict field
order is preserved as written (callers build dicts in a stable order).
"""
from __future__ import annotations

import math
from typing import Any


def fmt17(x: float) -> str:
    """Format a float with 17 significant digits ('.' decimal separator)."""
    if isinstance(x, float):
        if math.isnan(x):
            return "NaN"
        if math.isinf(x):
            return "Infinity" if x > 0 else "-Infinity"
        return format(x, ".17g")
    return repr(x)


def dumps(obj: Any) -> str:
    """Serialize to JSON with fmt17 floats and stable field order."""
    pieces: list[str] = []
    _write(obj, pieces)
    return "".join(pieces)


def _write(obj: Any, out: list[str]) -> None:
    if obj is None:
        out.append("null")
    elif obj is True:
        out.append("true")
    elif obj is False:
        out.append("false")
    elif isinstance(obj, int):
        out.append(str(obj))
    elif isinstance(obj, float):
        out.append(fmt17(obj))
    elif isinstance(obj, str):
        out.append(_quote(obj))
    elif isinstance(obj, dict):
        out.append("{")
        first = True
        for key, val in obj.items():
            if not first:
                out.append(",")
            first = False
            out.append(_quote(str(key)))
            out.append(":")
            _write(val, out)
        out.append("}")
    elif isinstance(obj, (list, tuple)):
        out.append("[")
        for i, val in enumerate(obj):
            if i:
                out.append(",")
            _write(val, out)
        out.append("]")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


_ESCAPES = {'"': '\\"', "\\": "\\\\", "\n": "\\n", "\r": "\\r", "\t": "\\t"}


def _quote(s: str) -> str:
    chunks = ['"']
    for ch in s:
        if ch in _ESCAPES:
            chunks.append(_ESCAPES[ch])
        elif ord(ch) < 0x20:
            chunks.append(f"\\u{ord(ch):04x}")
        else:
            chunks.append(ch)
    chunks.append('"')
    return "".join(chunks)
