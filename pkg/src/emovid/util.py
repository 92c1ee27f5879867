"""Shared helpers: float formatting, JSON emission, seed derivation."""

from __future__ import annotations

import hashlib
import json


def fmt17(x: float) -> str:
    """Format a float with 17 significant digits (lossless for float64)."""
    return format(float(x), ".17g")


def dumps_17g(obj) -> str:
    """Serialize a plain dict/list/scalar tree to JSON with floats at 17
    significant digits.

    The stdlib encoder hardwires repr() for floats, so the file formats
    here use this small walker instead. Dict insertion order is kept.
    """
    parts: list[str] = []
    _emit(obj, parts, 0)
    parts.append("\n")
    return "".join(parts)


def _emit(obj, parts: list[str], level: int) -> None:
    pad = "  " * level
    if isinstance(obj, dict):
        if not obj:
            parts.append("{}")
            return
        parts.append("{\n")
        items = list(obj.items())
        for i, (key, value) in enumerate(items):
            parts.append(f"{pad}  {json.dumps(str(key))}: ")
            _emit(value, parts, level + 1)
            parts.append(",\n" if i < len(items) - 1 else "\n")
        parts.append(pad + "}")
    elif isinstance(obj, (list, tuple)):
        if len(obj) == 0:
            parts.append("[]")
            return
        parts.append("[")
        for i, value in enumerate(obj):
            _emit(value, parts, level)
            if i < len(obj) - 1:
                parts.append(", ")
        parts.append("]")
    elif isinstance(obj, bool):  # bool is an int subclass; test it first
        parts.append("true" if obj else "false")
    elif obj is None:
        parts.append("null")
    elif isinstance(obj, int):
        parts.append(str(obj))
    elif isinstance(obj, float):
        parts.append(fmt17(obj))
    elif isinstance(obj, str):
        parts.append(json.dumps(obj))
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__} to JSON")


def derive_seed(base: int, *labels: str) -> int:
    """Mix a base seed with stage labels into a fresh 63-bit seed."""
    text = "|".join([str(int(base)), *labels])
    digest = hashlib.sha256(text.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big") >> 1
