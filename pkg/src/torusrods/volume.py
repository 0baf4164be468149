"""Volume bounds for stratified rod complements and the drilling construction.

The lower bounds involve a universal constant ``K1`` whose value is not
known, so they are reported as an exact rational coefficient of ``1/K1``.
Upper bounds are integer multiples of the regular ideal octahedron volume
``v8``, evaluated numerically by two independent series.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import ROUND_HALF_EVEN, Decimal, localcontext
from fractions import Fraction
from itertools import combinations, permutations, product
from typing import Sequence

import mpmath

from .errors import ConfigError, InvalidInputError, InvalidSlopeError, UnsupportedCaseError
from .farey import FareyPath, Slope, complete_to_unimodular_2, farey_distance, farey_geodesic_path
from .lattice import Rod, StratifiedConfig, rods_coincide, rods_disjoint, validate_stratified
from .unimodular import IntMatrix3, rank

__all__ = [
    "VolumeBounds",
    "DrillSegment",
    "DrillPlan",
    "lobachevsky",
    "catalan",
    "v8_constant",
    "v8_crosscheck",
    "stratified_bounds",
    "three_rod_orthogonal_bounds",
    "drill_plan",
    "flow_orbit_bounds",
    "flow_order",
    "place_horizontal_rod",
]

MAX_DIGITS = 50
_GUARD = 15

STRATIFIED = "stratified"
THREE_ROD = "three-rod-orthogonal"
FLOW_ORBITS = "geodesic-flow-orbits"


def lobachevsky(theta, dps: int):
    """Lobachevsky function at ``0 < theta < pi`` to roughly ``dps`` digits.

    Uses ``Lambda(theta) = Cl2(2 theta) / 2`` and the Bernoulli expansion
    ``Cl2(x) = x - x log x + sum_k |B_2k| x^(2k+1) / (2k (2k+1)!)``.  Since
    ``|B_2k| <= 4 (2k)! / (2 pi)^(2k)``, the tail after ``K`` terms is below
    ``4 x r^(2K+2) / ((2K+2)(2K+3)(1 - r^2))`` with ``r = x / (2 pi)``.
    """
    with mpmath.workdps(dps + _GUARD):
        theta = mpmath.mpf(theta)
        x = 2 * theta
        if not 0 < x < 2 * mpmath.pi:
            raise InvalidInputError("theta must lie in (0, pi)")
        r2 = (x / (2 * mpmath.pi)) ** 2
        eps = mpmath.mpf(10) ** (-(dps + 5))
        total = x - x * mpmath.log(x)
        k = 0
        while True:
            k += 1
            total += abs(mpmath.bernoulli(2 * k)) * x ** (2 * k + 1) / (2 * k * mpmath.factorial(2 * k + 1))
            tail = 4 * x * r2 ** (k + 1) / ((2 * k + 2) * (2 * k + 3) * (1 - r2))
            if tail < eps:
                break
        return total / 2


def catalan(dps: int):
    """Catalan's constant from ``sum (-1)^k / (2k+1)^2``.

    The alternating series is accelerated with the Cohen, Rodriguez Villegas
    and Zagier weights; ``1/(2k+1)^2`` are moments of a positive measure on
    ``[0, 1]`` so the error is at most ``2 / (3 + sqrt 8)^n``.
    """
    with mpmath.workdps(dps + _GUARD):
        n = int((dps + 5) / mpmath.log10(3 + mpmath.sqrt(8))) + 2
        d = (3 + mpmath.sqrt(8)) ** n
        d = (d + 1 / d) / 2
        b = mpmath.mpf(-1)
        c = -d
        s = mpmath.mpf(0)
        for k in range(n):
            c = b - c
            s += c / mpmath.mpf(2 * k + 1) ** 2
            b = (k + n) * (k - n) * b / ((k + mpmath.mpf(1) / 2) * (k + 1))
        return s / d


def _check_digits(digits: int):
    if not isinstance(digits, int) or not 1 <= digits <= MAX_DIGITS:
        raise InvalidInputError(f"digits must be an integer in [1, {MAX_DIGITS}], got {digits!r}")


def v8_crosscheck(digits: int = 12):
    """``|8 Lambda(pi/4) - 4 G|`` evaluated at ``digits`` plus guard digits."""
    _check_digits(digits)
    with mpmath.workdps(digits + _GUARD):
        return abs(8 * lobachevsky(mpmath.pi / 4, digits) - 4 * catalan(digits))


def _v8_mpf(digits: int):
    with mpmath.workdps(digits + _GUARD):
        value = 8 * lobachevsky(mpmath.pi / 4, digits)
        other = 4 * catalan(digits)
        if abs(value - other) > mpmath.mpf(10) ** (-(digits + 3)):
            raise ArithmeticError("v8 series disagree; refusing to report a value")
        return value


def _to_decimal(x, digits: int) -> Decimal:
    with mpmath.workdps(digits + _GUARD):
        text = mpmath.nstr(x, digits + _GUARD, strip_zeros=False)
    with localcontext() as ctx:
        ctx.prec = 2 * (digits + _GUARD)
        return Decimal(text).quantize(Decimal(1).scaleb(-digits), rounding=ROUND_HALF_EVEN)


def v8_constant(digits: int = 12) -> Decimal:
    """Volume of the regular ideal octahedron rounded to ``digits`` decimals."""
    _check_digits(digits)
    return _to_decimal(_v8_mpf(digits), digits)


def _multiple_of_v8(count: int, digits: int) -> Decimal:
    with mpmath.workdps(digits + _GUARD):
        return _to_decimal(count * _v8_mpf(digits), digits)


@dataclass(frozen=True)
class VolumeBounds:
    farey_sum: int
    lower_coeff: Fraction
    upper_octahedra: int
    upper_numeric: Decimal
    digits: int
    statement: str

    def to_json(self):
        return {
            "statement": self.statement,
            "farey_sum": self.farey_sum,
            "lower_bound": {"value_rational": str(self.lower_coeff), "units": "1/K1"},
            "upper_bound": {
                "octahedra": self.upper_octahedra,
                "numeric": float(self.upper_numeric),
                "numeric_text": str(self.upper_numeric),
                "v8_digits": self.digits,
            },
        }

    def describe(self):
        return (
            f"{self.lower_coeff} * (1/K1) <= Vol <= {self.upper_octahedra} * v8 "
            f"= {self.upper_numeric} ({self.digits} decimals)"
        )


def _bounds(farey_sum: int, octahedra: int, digits: int, statement: str) -> VolumeBounds:
    _check_digits(digits)
    return VolumeBounds(
        farey_sum=farey_sum,
        lower_coeff=Fraction(farey_sum, 2),
        upper_octahedra=octahedra,
        upper_numeric=_multiple_of_v8(octahedra, digits),
        digits=digits,
        statement=statement,
    )


def _as_config(c) -> StratifiedConfig:
    return c if isinstance(c, StratifiedConfig) else validate_stratified(c)


def _cyclic_pairs(items):
    # (1,2), (2,3), ..., (m-1,m), (m,1)
    m = len(items)
    return [(items[i], items[(i + 1) % m]) for i in range(m)]


def stratified_bounds(c, digits: int = 12) -> VolumeBounds:
    """Bounds for a stratified configuration: ``S/2 * 1/K1 <= Vol <= S * v8``."""
    c = _as_config(c)
    s = sum(farey_distance(x, y) for x, y in _cyclic_pairs(c.slopes))
    return _bounds(s, s, digits, STRATIFIED)


def _signed_permutations():
    for perm in permutations(range(3)):
        for signs in product((1, -1), repeat=3):
            rows = [[0, 0, 0] for _ in range(3)]
            for j in range(3):
                rows[perm[j]][j] = signs[j]
            yield IntMatrix3(tuple(tuple(r) for r in rows))


@dataclass(frozen=True)
class OrthogonalNormalization:
    matrix: IntMatrix3
    slopes: tuple
    distance: int

    def to_json(self):
        return {
            "matrix": self.matrix.to_list(),
            "slopes": [str(s) for s in self.slopes],
            "farey_distance": self.distance,
        }


def orthogonal_normalization(directions) -> OrthogonalNormalization | None:
    """Signed permutation sending ``d3`` to ``+-e3`` and ``d1, d2`` into ``z = 0``."""
    d1, d2, d3 = directions
    for m in _signed_permutations():
        t3 = m.apply(d3)
        if t3[:2] != (0, 0):
            continue
        t1, t2 = m.apply(d1), m.apply(d2)
        if t1[2] == 0 and t2[2] == 0:
            s1, s2 = Slope(t1[0], t1[1]), Slope(t2[0], t2[1])
            return OrthogonalNormalization(m, (s1, s2), farey_distance(s1, s2))
    return None


def three_rod_orthogonal_bounds(rods: Sequence[Rod], digits: int = 12):
    """Bounds ``d/2 * 1/K1 <= Vol <= 2 d v8`` for three rods where the third
    direction is orthogonal to the plane of the first two.

    Returns ``(bounds, normalization)``.
    """
    rods = list(rods)
    if len(rods) != 3:
        raise UnsupportedCaseError(f"exactly three rods are required, got {len(rods)}")
    dirs = [r.direction for r in rods]
    if rank(dirs) != 3:
        raise UnsupportedCaseError("directions must be linearly independent")
    for i, j in combinations(range(3), 2):
        if not rods_disjoint(rods[i], rods[j]):
            raise ConfigError(f"rods {i} and {j} are not disjoint")
    norm = orthogonal_normalization(dirs)
    if norm is None:
        raise UnsupportedCaseError(
            "no signed permutation sends the third direction to (0,0,1) and the "
            "other two into the plane z=0"
        )
    return _bounds(norm.distance, 2 * norm.distance, digits, THREE_ROD), norm


@dataclass(frozen=True)
class DrillSegment:
    start: int
    end: int
    path: FareyPath
    aux_rods: tuple

    @property
    def edges(self) -> int:
        return len(self.path)

    def to_json(self):
        return {
            "from": self.start,
            "to": self.end,
            "path": self.path.to_text(),
            "octahedra": self.edges,
            "aux_rods": [r.to_json() for r in self.aux_rods],
        }


@dataclass(frozen=True)
class DrillPlan:
    config: StratifiedConfig
    segments: tuple

    @property
    def octahedra(self) -> int:
        return sum(s.edges for s in self.segments)

    @property
    def aux_rods(self):
        return [r for s in self.segments for r in s.aux_rods]

    @property
    def augmented_rods(self):
        return self.config.rods + self.aux_rods

    def to_json(self):
        return [s.to_json() for s in self.segments]


def place_horizontal_rod(slope: Slope, height, vertical: Rod) -> Rod:
    """Horizontal rod of ``slope`` at ``height`` that misses the vertical rod.

    ``(0, 0, h)`` is used when possible; otherwise the line is put through
    ``(a, b) + (u, v)/2`` where ``p v - q u = 1``, which keeps it at half a
    lattice step from the vertical rod ``(a, b)``.
    """
    direction = (slope.p, slope.q, 0)
    candidate = Rod((0, 0, height), direction)
    if rods_disjoint(candidate, vertical):
        return candidate
    m = complete_to_unimodular_2(slope.p, slope.q)
    delta = m.det
    u, v = delta * m.b, delta * m.d
    a, b, _ = vertical.base
    return Rod((a + Fraction(u, 2), b + Fraction(v, 2), height), direction)


def drill_plan(c) -> DrillPlan:
    """Auxiliary horizontal rods along Farey geodesics between consecutive slopes."""
    c = _as_config(c)
    m = len(c.horizontal)
    segments = []
    for i in range(m):
        j = (i + 1) % m
        lo = c.horizontal[i].height
        hi = c.horizontal[j].height + (1 if j == 0 else 0)
        x, y = c.slopes[i], c.slopes[j]
        path = farey_geodesic_path(x, y)
        inner = path.interior
        step = (hi - lo) / (len(inner) + 1)
        aux = []
        for t, s in enumerate(inner, start=1):
            h = (lo + t * step) % 1
            aux.append(place_horizontal_rod(s, h, c.vertical))
        segments.append(DrillSegment(i, j, path, tuple(aux)))
    plan = DrillPlan(c, tuple(segments))
    rods = plan.augmented_rods
    for a, b in combinations(range(len(rods)), 2):
        if rods_coincide(rods[a], rods[b]) or not rods_disjoint(rods[a], rods[b]):
            raise AssertionError(f"drilled rods {a} and {b} meet")
    return plan


def flow_order(slopes) -> list:
    """Order slopes by angle in ``[-pi/2, pi/2)``: infinity first, then by ``p/q``.

    ``arctan`` is monotone, so exact comparison of ``p/q`` gives the same order.
    """
    return sorted(slopes, key=lambda s: (0, 0) if s.is_infinite else (1, Fraction(s.p, s.q)))


def flow_orbit_bounds(slopes, digits: int = 12):
    """Bounds for the complement of periodic geodesic-flow orbits with the given slopes.

    Returns ``(ordering, bounds)`` with ``S`` the cyclic Farey sum in angle
    order, ``S/2 * 1/K1 <= Vol <= 2 S v8``.
    """
    slopes = list(slopes)
    if len(set(slopes)) != len(slopes):
        raise InvalidSlopeError("slopes must be pairwise distinct (nonparallel curves)")
    if len(slopes) < 2:
        raise UnsupportedCaseError("at least two distinct slopes are required")
    order = flow_order(slopes)
    s = sum(farey_distance(x, y) for x, y in _cyclic_pairs(order))
    return order, _bounds(s, 2 * s, digits, FLOW_ORBITS)
