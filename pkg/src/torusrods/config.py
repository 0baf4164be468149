"""Reading and writing rod configuration files.

Format::

    {"rods": [{"base": ["0", "1/2", "1/3"], "direction": [1, 2, 0]}, ...]}

Rationals are strings ``"num/den"`` or ``"num"`` (plain JSON integers are
accepted too); directions are integers.  A non-primitive direction is
divided by its gcd and a diagnostic is emitted.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from pathlib import Path

from .errors import ConfigError
from .lattice import Rod, primitive_direction

_RATIONAL = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?$")


def parse_rational(value, where: str = "value") -> Fraction:
    if isinstance(value, bool):
        raise ConfigError(f"{where}: expected a rational, got {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if not isinstance(value, str):
        raise ConfigError(f"{where}: rationals must be strings like \"1/3\", got {value!r}")
    m = _RATIONAL.match(value)
    if not m:
        raise ConfigError(f"{where}: malformed rational {value!r}")
    num, den = m.group(1), m.group(2)
    if den is not None and int(den) == 0:
        raise ConfigError(f"{where}: malformed rational {value!r} (zero denominator)")
    return Fraction(int(num), int(den) if den is not None else 1)


def parse_config(data, source: str = "<config>"):
    """Turn decoded JSON into ``(rods, diagnostics)``."""
    if not isinstance(data, dict) or "rods" not in data:
        raise ConfigError(f"{source}: top-level object with a \"rods\" list expected")
    items = data["rods"]
    if not isinstance(items, list):
        raise ConfigError(f"{source}: \"rods\" must be a list")
    rods, diagnostics = [], []
    for i, item in enumerate(items):
        where = f"{source}: rods[{i}]"
        if not isinstance(item, dict) or "base" not in item or "direction" not in item:
            raise ConfigError(f"{where}: object with \"base\" and \"direction\" expected")
        base, direction = item["base"], item["direction"]
        if not isinstance(base, list) or len(base) != 3:
            raise ConfigError(f"{where}.base: three rationals expected")
        if not isinstance(direction, list) or len(direction) != 3:
            raise ConfigError(f"{where}.direction: three integers expected")
        coords = [parse_rational(x, f"{where}.base[{k}]") for k, x in enumerate(base)]
        for k, x in enumerate(direction):
            if isinstance(x, bool) or not isinstance(x, int):
                raise ConfigError(f"{where}.direction[{k}]: integer expected, got {x!r}")
        if not any(direction):
            raise ConfigError(f"{where}.direction: the zero vector is not a direction")
        prim = primitive_direction(direction)
        if list(prim) != list(direction) and [-a for a in prim] != list(direction):
            diagnostics.append(f"rods[{i}]: direction {direction} reduced to primitive {list(prim)}")
        rods.append(Rod(coords, prim))
    return rods, diagnostics


def load_config(path):
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"{path}: cannot read file ({exc.strerror})") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}: invalid JSON ({exc.msg})") from None
    return parse_config(data, str(path))


def dump_config(rods) -> dict:
    """Canonical form: bases reduced into [0, 1), fractions in lowest terms."""
    return {"rods": [r.to_json() for r in rods]}
