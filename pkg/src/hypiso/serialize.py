"""Deterministic JSON and CSV emission with 17-significant-digit floats.

The stdlib json module always formats floats with repr; the file
formats here pin 17 significant digits so output is byte-stable across
platforms and every value round-trips exactly.
"""

from __future__ import annotations

import json
import math


def fmt17(x: float) -> str:
    if isinstance(x, float):
        if math.isnan(x) or math.isinf(x):
            raise ValueError("non-finite number in serialized output")
        return format(x, ".17g")
    return str(x)


def dumps(obj, indent: int = 0) -> str:
    """JSON text with floats at 17 significant digits, keys in order."""
    pad = " " * indent
    if isinstance(obj, dict):
        items = ",\n".join(
            f'{pad}  {json.dumps(str(k))}: {dumps(v, indent + 2).lstrip()}'
            for k, v in obj.items())
        return f"{pad}{{\n{items}\n{pad}}}" if obj else f"{pad}{{}}"
    if isinstance(obj, (list, tuple)):
        items = ",\n".join(dumps(v, indent + 2) for v in obj)
        return f"{pad}[\n{items}\n{pad}]" if len(obj) else f"{pad}[]"
    if isinstance(obj, bool) or obj is None:
        return pad + json.dumps(obj)
    if isinstance(obj, float):
        return pad + fmt17(obj)
    if isinstance(obj, int):
        return pad + str(obj)
    if isinstance(obj, str):
        return pad + json.dumps(obj)
    raise TypeError(f"cannot serialize {type(obj)!r}")


def csv_line(values) -> str:
    out = []
    for v in values:
        if isinstance(v, float):
            out.append(fmt17(v))
        else:
            out.append(str(v))
    return ",".join(out)
