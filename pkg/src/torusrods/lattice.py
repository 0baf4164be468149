"""Closed geodesics ("rods") and flat tori in the 3-torus R^3 / Z^3.

All data are exact rationals.  A rod is stored as a base point reduced into
``[0, 1)^3`` together with a primitive integer direction whose first nonzero
entry is positive (a geodesic is unoriented).  Any nonzero rational direction
closes up in the torus, so validity reduces to "nonzero".
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from math import lcm
from typing import Sequence

from .errors import (
    CoincidentRodsError,
    ConfigError,
    InvalidInputError,
    InvalidRodError,
    UnsupportedCaseError,
)
from .farey import Slope
from .unimodular import (
    complete_primitive_to_basis,
    cross,
    dot,
    is_primitive,
    rank,
    vector_gcd,
)

__all__ = [
    "Rod",
    "FlatTorus2",
    "StratifiedConfig",
    "Check",
    "rat3",
    "direction_is_closed",
    "primitive_direction",
    "rods_coincide",
    "rods_disjoint",
    "rods_disjoint_oracle",
    "plane_projects_to_torus",
    "slope_of_horizontal",
    "check_stratified",
    "validate_stratified",
    "VERTICAL",
]

VERTICAL = (0, 0, 1)


def rat3(values) -> tuple:
    """Three exact rationals (reduced ``Fraction``s with positive denominators)."""
    vals = tuple(Fraction(v) for v in values)
    if len(vals) != 3:
        raise InvalidInputError(f"expected three coordinates, got {len(vals)}")
    return vals


def _canonical_sign(v):
    for a in v:
        if a:
            return tuple(v) if a > 0 else tuple(-t for t in v)
    return tuple(v)


def direction_is_closed(d) -> bool:
    """A line with direction ``d`` closes up in the 3-torus.

    True for every nonzero rational vector: its coordinates always span a
    one dimensional Q-space.  Kept as an explicit guard against zero input.
    """
    d = rat3(d)
    if not any(d):
        raise InvalidRodError("the zero vector is not a direction")
    return True


def primitive_direction(d) -> tuple:
    """Primitive integer vector on the same line as ``d``, first nonzero entry positive."""
    d = rat3(d)
    direction_is_closed(d)
    den = lcm(*(x.denominator for x in d))
    ints = [int(x * den) for x in d]
    g = vector_gcd(ints)
    return _canonical_sign(tuple(a // g for a in ints))


@dataclass(frozen=True)
class Rod:
    base: tuple
    direction: tuple

    def __post_init__(self):
        base = tuple(x % 1 for x in rat3(self.base))
        direction = self.direction
        if len(direction) != 3 or not all(isinstance(a, int) and not isinstance(a, bool) for a in direction):
            raise InvalidRodError(f"direction must be three integers, got {direction!r}")
        if not any(direction):
            raise InvalidRodError("the zero vector is not a direction")
        if not is_primitive(direction):
            raise InvalidRodError(f"direction {tuple(direction)} is not primitive")
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "direction", _canonical_sign(direction))

    @classmethod
    def through(cls, base, direction) -> "Rod":
        """Build a rod from any nonzero rational direction (normalized to primitive)."""
        return cls(base, primitive_direction(direction))

    @property
    def is_vertical(self) -> bool:
        return self.direction == VERTICAL

    @property
    def is_horizontal(self) -> bool:
        return self.direction[2] == 0

    @property
    def height(self) -> Fraction:
        return self.base[2]

    def translated(self, offset) -> "Rod":
        return Rod(tuple(a + b for a, b in zip(self.base, rat3(offset))), self.direction)

    def to_json(self):
        return {"base": [str(x) for x in self.base], "direction": list(self.direction)}

    def __str__(self):
        b = ", ".join(str(x) for x in self.base)
        return f"Rod(base=({b}), direction={self.direction})"


def rods_coincide(r1: Rod, r2: Rod) -> bool:
    """Same image in the torus: parallel and ``b1 - b2`` lies on the line plus Z^3."""
    if r1.direction != r2.direction:
        return False
    delta = [a - b for a, b in zip(r1.base, r2.base)]
    # in a Z-basis starting with the direction, the remaining coordinates of
    # delta must be integers
    basis = complete_primitive_to_basis(r1.direction)
    coords = basis.inverse().apply(delta)
    return all(Fraction(c).denominator == 1 for c in coords[1:])


def rods_disjoint(r1: Rod, r2: Rod) -> bool:
    d1, d2 = r1.direction, r2.direction
    n = cross(d1, d2)
    if not any(n):
        # parallel: distinct parallel closed geodesics never meet
        return not rods_coincide(r1, r2)
    delta = [a - b for a, b in zip(r1.base, r2.base)]
    # they meet iff delta ∈ Z^3 + R d1 + R d2, i.e. n.delta ∈ n.Z^3 = gcd(n) Z
    value = Fraction(dot(n, delta)) / vector_gcd(n)
    return value.denominator != 1


def _meet_with_offsets(r1: Rod, r2: Rod, bound: int) -> bool:
    """Does ``b1 + t d1 = b2 + s d2 + m`` have a solution with ``m`` in ``[-bound, bound]^3``?

    Each offset is tested exactly in integers after scaling the bases by a
    common denominator.
    """
    d1, d2 = r1.direction, r2.direction
    den = lcm(*(x.denominator for x in r1.base + r2.base))
    shift = [int((b2 - b1) * den) for b1, b2 in zip(r1.base, r2.base)]
    parallel = not any(cross(d1, d2))
    if parallel:
        i = next(k for k in range(3) if d1[k])
    else:
        i, j = next((a, b) for a, b in combinations(range(3), 2)
                    if d1[a] * d2[b] - d1[b] * d2[a])
        det0 = d2[i] * d1[j] - d1[i] * d2[j]  # det of [d1, -d2] on rows i, j
    for m in product(range(-bound, bound + 1), repeat=3):
        rhs = [sh + den * mk for sh, mk in zip(shift, m)]
        if parallel:
            # rhs = t d1: proportional to d1
            if all(rhs[k] * d1[i] == d1[k] * rhs[i] for k in range(3)):
                return True
            continue
        # Cramer on rows i, j of t d1 - s d2 = rhs, scaled by det0
        t = -rhs[i] * d2[j] + d2[i] * rhs[j]
        sv = d1[i] * rhs[j] - d1[j] * rhs[i]
        if all(d1[k] * t - d2[k] * sv == rhs[k] * det0 for k in range(3)):
            return True
    return False


def rods_disjoint_oracle(r1: Rod, r2: Rod) -> bool:
    """Brute force disjointness: search lattice offsets ``m`` in ``[-L, L]^3``
    for an exact intersection point, doubling ``L`` until two consecutive
    bounds agree.

    The search starts at ``L = 1 + max|d1| + max|d2|``: with ``t, s`` taken in
    ``[0, 1)`` and bases in ``[0, 1)^3`` every intersection has such an offset.
    """
    bound = 1 + max(map(abs, r1.direction)) + max(map(abs, r2.direction))
    prev = _meet_with_offsets(r1, r2, bound)
    while True:
        bound *= 2
        cur = _meet_with_offsets(r1, r2, bound)
        if cur == prev:
            return not cur
        prev = cur


@dataclass(frozen=True)
class FlatTorus2:
    base: tuple
    dir1: tuple
    dir2: tuple

    def __post_init__(self):
        object.__setattr__(self, "base", tuple(x % 1 for x in rat3(self.base)))
        object.__setattr__(self, "dir1", tuple(self.dir1))
        object.__setattr__(self, "dir2", tuple(self.dir2))


def plane_projects_to_torus(t: FlatTorus2) -> bool:
    """Whether the plane through ``t.base`` spanned by the two directions closes
    up to a totally geodesic 2-torus: needs two independent rational directions."""
    if not any(t.dir1) or not any(t.dir2):
        return False
    return rank([t.dir1, t.dir2]) == 2


def slope_of_horizontal(r: Rod) -> Slope:
    if not r.is_horizontal:
        raise InvalidRodError(f"{r} is not horizontal")
    p, q, _ = r.direction
    return Slope(p, q)


@dataclass(frozen=True)
class StratifiedConfig:
    """One vertical rod plus horizontal rods sorted by increasing height."""

    horizontal: tuple
    vertical: Rod

    @property
    def heights(self):
        return [r.height for r in self.horizontal]

    @property
    def slopes(self):
        return [slope_of_horizontal(r) for r in self.horizontal]

    @property
    def rods(self):
        return list(self.horizontal) + [self.vertical]

    def __len__(self):
        return len(self.horizontal) + 1


@dataclass
class Check:
    name: str
    ok: bool
    detail: str = ""

    def to_json(self):
        return {"check": self.name, "ok": self.ok, "detail": self.detail}


def check_stratified(rods: Sequence[Rod]) -> list:
    """Evaluate every hypothesis of a stratified configuration; never raises."""
    rods = list(rods)
    checks = []
    n = len(rods)
    checks.append(Check("at least three rods", n >= 3, f"n={n}"))

    vertical = [i for i, r in enumerate(rods) if r.is_vertical]
    checks.append(Check("exactly one vertical rod", len(vertical) == 1,
                        f"vertical rods at indices {vertical}"))
    others = [i for i in range(n) if i not in vertical[:1]]
    tilted = [i for i in others if not rods[i].is_horizontal]
    checks.append(Check("remaining rods horizontal", not tilted,
                        f"non-horizontal rods at indices {tilted}" if tilted else ""))

    horiz = [i for i in others if rods[i].is_horizontal]
    zero = [i for i in horiz if rods[i].height == 0]
    checks.append(Check("heights strictly inside (0, 1)", not zero,
                        f"height 0 at indices {zero}" if zero else ""))

    clashes = [(i, j) for i, j in combinations(horiz, 2) if rods[i].height == rods[j].height]
    checks.append(Check("distinct heights", not clashes,
                        "; ".join(f"rods {i} and {j} share height {rods[i].height}" for i, j in clashes)))

    ordered = sorted(horiz, key=lambda i: rods[i].height)
    repeats = []
    if len(ordered) >= 2:
        pairs = list(zip(ordered, ordered[1:]))
        if len(ordered) > 2:
            pairs.append((ordered[-1], ordered[0]))
        for i, j in pairs:
            if slope_of_horizontal(rods[i]) == slope_of_horizontal(rods[j]):
                repeats.append(f"rods {i} and {j} both have slope {slope_of_horizontal(rods[i])}")
    checks.append(Check("consecutive slopes distinct (cyclically)", not repeats, "; ".join(repeats)))

    same, meet = [], []
    for i, j in combinations(range(n), 2):
        if rods_coincide(rods[i], rods[j]):
            same.append(f"rods {i} and {j} coincide")
        elif not rods_disjoint(rods[i], rods[j]):
            meet.append(f"rods {i} and {j} intersect")
    checks.append(Check("no coincident rods", not same, "; ".join(same)))
    checks.append(Check("pairwise disjoint", not meet, "; ".join(meet)))
    return checks


def validate_stratified(rods: Sequence[Rod]) -> StratifiedConfig:
    rods = list(rods)
    if len(rods) < 3:
        raise UnsupportedCaseError(
            f"a stratified configuration needs at least three rods, got {len(rods)}"
        )
    checks = check_stratified(rods)
    failed = [c for c in checks if not c.ok]
    if failed:
        problems = [f"{c.name}: {c.detail}" if c.detail else c.name for c in failed]
        cls = CoincidentRodsError if any(c.name == "no coincident rods" for c in failed) else ConfigError
        raise cls("invalid stratified configuration: " + "; ".join(problems), problems)
    vertical = next(r for r in rods if r.is_vertical)
    horizontal = sorted((r for r in rods if r is not vertical), key=lambda r: r.height)
    return StratifiedConfig(tuple(horizontal), vertical)
