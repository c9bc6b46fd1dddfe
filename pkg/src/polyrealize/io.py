"""Coordinate files, OFF export and JSON reports."""

from __future__ import annotations

import json
import math
import re
from fractions import Fraction
from typing import Any, List, Sequence, Tuple

from .surface import ParseError, Triangulation, orient_faces

_NUMBER = re.compile(r"^[+-]?\d+(/\d+)?$")


def parse_coordinates(text: str, n: int = None) -> List[Tuple]:
    """Read ``x y z`` lines. Entries are integers or ``p/q`` rationals.

    Integer rows come back as int triples; a row with a fraction keeps
    Fractions. ``#`` starts a comment. If n is given the row count must match.
    """
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 3:
            raise ParseError(f"expected 3 coordinates, got {len(parts)}", lineno)
        row = []
        for tok in parts:
            if not _NUMBER.match(tok):
                raise ParseError(f"bad coordinate {tok!r}", lineno, raw.find(tok) + 1)
            if "/" in tok:
                num, den = tok.split("/")
                if int(den) == 0:
                    raise ParseError("zero denominator", lineno, raw.find(tok) + 1)
                val = Fraction(int(num), int(den))
                row.append(int(val) if val.denominator == 1 else val)
            else:
                row.append(int(tok))
        rows.append(tuple(row))
    if n is not None and len(rows) != n:
        raise ParseError(f"expected {n} coordinate rows, got {len(rows)}", max(1, len(rows)))
    return rows


def _fmt_number(x) -> str:
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    return str(int(x))


def format_coordinates(coords: Sequence) -> str:
    return "".join(" ".join(_fmt_number(x) for x in p) + "\n" for p in coords)


def _off_number(x) -> str:
    if isinstance(x, Fraction):
        if x.denominator == 1:
            return str(x.numerator)
        return repr(float(x))
    return str(x)


def format_off(t: Triangulation, coords: Sequence) -> str:
    faces = orient_faces(t) or t.faces
    lines = ["OFF", f"{t.n} {len(faces)} 0"]
    lines.extend(" ".join(_off_number(x) for x in p) for p in coords)
    lines.extend(f"3 {a - 1} {b - 1} {c - 1}" for a, b, c in faces)
    return "\n".join(lines) + "\n"


def parse_off(text: str) -> Tuple[List[Tuple[float, float, float]], List[Tuple[int, ...]]]:
    """Minimal OFF reader (used to check exports)."""
    tokens = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            tokens.extend(line.split())
    if not tokens or tokens[0] != "OFF":
        raise ValueError("missing OFF header")
    nv, nf = int(tokens[1]), int(tokens[2])
    pos = 4
    verts = []
    for _ in range(nv):
        verts.append(tuple(float(x) for x in tokens[pos:pos + 3]))
        pos += 3
    faces = []
    for _ in range(nf):
        k = int(tokens[pos])
        faces.append(tuple(int(x) for x in tokens[pos + 1:pos + 1 + k]))
        pos += 1 + k
    return verts, faces


# -- JSON -----------------------------------------------------------------------------


def _jsonable(obj: Any, floats: List[float]) -> Any:
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return None
        floats.append(obj)
        return f"\x00{len(floats) - 1}\x00"
    if isinstance(obj, Fraction):
        return _fmt_number(obj)
    if isinstance(obj, dict):
        return {str(k): _jsonable(v, floats) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v, floats) for v in obj]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


_PLACEHOLDER = re.compile(r'"\\u0000(\d+)\\u0000"')


def dumps_report(obj: Any) -> str:
    """JSON with every float written to 17 significant digits."""
    floats: List[float] = []
    text = json.dumps(_jsonable(obj, floats), indent=2, sort_keys=True)
    return _PLACEHOLDER.sub(lambda m: _float17(floats[int(m.group(1))]), text) + "\n"


def _float17(x: float) -> str:
    s = "%.17g" % x
    return s if any(c in s for c in ".en") else s + ".0"
