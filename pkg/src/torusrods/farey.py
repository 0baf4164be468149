"""Slopes, the Farey graph and the action of 2x2 unimodular matrices.

A slope is a point ``[p:q]`` of the rational projective line, stored in the
canonical form ``q > 0`` (or ``(1, 0)`` for infinity).  Two slopes are joined
by an edge of the Farey graph when ``|p*s - q*r| == 1``.

Distances are computed by moving the target slope to infinity with a
unimodular map and measuring the shortest integer continued fraction of the
image of the source.  ``farey_distance_oracle`` is an independent breadth
first search on a bounded piece of the graph, used to cross-check.
"""

from __future__ import annotations

import os
from collections import deque
from dataclasses import dataclass
from math import gcd
from typing import Iterable, Iterator

from .errors import InvalidSlopeError, NotCoprimeError, ResourceLimitError

__all__ = [
    "Slope",
    "INFINITY",
    "ZERO",
    "Moebius2",
    "FareyPath",
    "canonicalize",
    "parse_slope",
    "is_neighbor",
    "apply_moebius",
    "complete_to_unimodular_2",
    "continued_fraction",
    "shortest_continued_fraction",
    "evaluate_continued_fraction",
    "farey_distance",
    "farey_distance_oracle",
    "farey_distances_oracle",
    "farey_geodesic_path",
    "oracle_max_cap",
]

ORACLE_MAX_CAP_ENV = "TORUSRODS_ORACLE_MAX_CAP"
DEFAULT_ORACLE_MAX_CAP = 2**16


@dataclass(frozen=True)
class Slope:
    """Projective class ``[p:q]``; any nonzero integer pair is accepted and canonicalized."""

    p: int
    q: int

    def __post_init__(self):
        p, q = self.p, self.q
        if isinstance(p, bool) or isinstance(q, bool) or not isinstance(p, int) or not isinstance(q, int):
            raise InvalidSlopeError(f"slope entries must be integers, got ({p!r}, {q!r})")
        if p == 0 and q == 0:
            raise InvalidSlopeError("[0:0] is not a slope")
        g = gcd(p, q)
        p, q = p // g, q // g
        if q < 0 or (q == 0 and p < 0):
            p, q = -p, -q
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)

    @property
    def is_infinite(self) -> bool:
        return self.q == 0

    def sort_key(self):
        # path tie-breaking order: denominator first, then numerator
        return (self.q, self.p)

    def __str__(self):
        return f"{self.p}/{self.q}"

    def __repr__(self):
        return f"Slope({self.p}, {self.q})"


INFINITY = Slope(1, 0)
ZERO = Slope(0, 1)


def canonicalize(p: int, q: int) -> Slope:
    return Slope(p, q)


def parse_slope(text: str) -> Slope:
    """Parse ``"p/q"`` (``"1/0"`` is infinity) or a bare integer ``"n"``."""
    s = text.strip()
    try:
        if "/" in s:
            num, den = s.split("/")
            return Slope(int(num), int(den))
        return Slope(int(s), 1)
    except ValueError as exc:
        if isinstance(exc, InvalidSlopeError):
            raise
        raise InvalidSlopeError(f"cannot parse slope {text!r}") from None


def is_neighbor(x: Slope, y: Slope) -> bool:
    return abs(x.p * y.q - x.q * y.p) == 1


@dataclass(frozen=True)
class Moebius2:
    """Integer matrix ``[[a, b], [c, d]]`` with ``|ad - bc| = 1`` acting on slopes."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if abs(self.det) != 1:
            raise NotCoprimeError(f"matrix {self.rows} is not unimodular (det {self.det})")

    @property
    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    @property
    def rows(self):
        return ((self.a, self.b), (self.c, self.d))

    @property
    def columns(self):
        return ((self.a, self.c), (self.b, self.d))

    @classmethod
    def identity(cls) -> "Moebius2":
        return cls(1, 0, 0, 1)

    @classmethod
    def from_columns(cls, first, second) -> "Moebius2":
        return cls(first[0], second[0], first[1], second[1])

    def inverse(self) -> "Moebius2":
        e = self.det
        return Moebius2(e * self.d, -e * self.b, -e * self.c, e * self.a)

    def __matmul__(self, other: "Moebius2") -> "Moebius2":
        return Moebius2(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def __call__(self, x: Slope) -> Slope:
        return Slope(self.a * x.p + self.b * x.q, self.c * x.p + self.d * x.q)


def apply_moebius(m: Moebius2, x: Slope) -> Slope:
    return m(x)


def complete_to_unimodular_2(p: int, q: int) -> Moebius2:
    """Return a unimodular matrix with first column ``(p, q)``.

    The second column ``(r, s)`` is the Farey parent of ``p/q`` with the
    smallest nonnegative ``s``; when both determinants are available for the
    same ``s`` the one with ``det = +1`` is taken.  This reproduces the
    identity for ``(1, 0)`` and gives e.g. ``(2, 1)`` for ``(5, 3)``.
    """
    if gcd(p, q) != 1:
        raise NotCoprimeError(f"({p}, {q}) is not a coprime pair")
    if q == 0:
        # p = +-1; column (0, p) gives det p*p = 1
        return Moebius2.from_columns((p, q), (0, p))
    aq = abs(q)
    # extended Euclid through the modular inverse
    inv = pow(p % aq, -1, aq) if aq > 1 else 0
    best = None
    for eps in (1, -1):
        s = (eps * inv) % aq if aq > 1 else 0
        if q < 0:
            s = -s
        r, rem = divmod(p * s - eps, q)
        assert rem == 0
        key = (abs(s), -eps)
        if best is None or key < best[0]:
            best = (key, r, s)
    _, r, s = best
    return Moebius2.from_columns((p, q), (r, s))


def continued_fraction(x: Slope) -> list[int]:
    """Regular continued fraction ``[a0; a1, ..., an]`` of a finite slope (last entry >= 2 when n >= 1)."""
    if x.is_infinite:
        raise InvalidSlopeError("infinity has no finite continued fraction")
    p, q = x.p, x.q
    out = []
    while q:
        a, r = divmod(p, q)
        out.append(a)
        p, q = q, r
    return out


def evaluate_continued_fraction(terms: Iterable[int]) -> Slope:
    """Evaluate an integer continued fraction; a zero denominator along the way yields infinity."""
    terms = list(terms)
    if not terms:
        return INFINITY
    # convergent recursion p_k = a_k p_{k-1} + p_{k-2}
    p0, q0 = 1, 0
    p1, q1 = terms[0], 1
    for a in terms[1:]:
        p0, q0, p1, q1 = p1, q1, a * p1 + p0, a * q1 + q0
    return Slope(p1, q1)


def shortest_continued_fraction(x: Slope) -> list[int]:
    """Shortest integer continued fraction of ``x``, found by singularizing the regular one.

    A partial quotient ``e = +-1`` strictly inside the expansion is removed by
    ``[.., a, e, b, c, ..] -> [.., a + e, -(b + e), -c, ..]``; the tail after
    ``b`` changes sign.  Scanning left to right removes every other entry of
    each run of ones, which is optimal; a trailing ``+-1`` is absorbed into
    its predecessor.
    """
    terms = continued_fraction(x)
    k = 1
    while k < len(terms) - 1:
        e = terms[k]
        if abs(e) == 1:
            terms[k - 1] += e
            terms[k + 1] = -(terms[k + 1] + e)
            for j in range(k + 2, len(terms)):
                terms[j] = -terms[j]
            del terms[k]
        k += 1
    if len(terms) >= 2 and abs(terms[-1]) == 1:
        terms[-2] += terms[-1]
        del terms[-1]
    return terms


def _distance_to_infinity(x: Slope) -> int:
    if x.is_infinite:
        return 0
    return len(shortest_continued_fraction(x))


def farey_distance(x: Slope, y: Slope) -> int:
    """Exact distance between two slopes in the Farey graph."""
    if x == y:
        return 0
    to_infinity = complete_to_unimodular_2(y.p, y.q).inverse()
    return _distance_to_infinity(to_infinity(x))


@dataclass(frozen=True)
class FareyPath:
    vertices: tuple

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        if not self.vertices:
            raise ValueError("a Farey path has at least one vertex")
        for u, v in zip(self.vertices, self.vertices[1:]):
            if not is_neighbor(u, v):
                raise ValueError(f"{u} and {v} are not Farey neighbors")

    def __len__(self):
        # edge count
        return len(self.vertices) - 1

    def __iter__(self):
        return iter(self.vertices)

    @property
    def interior(self):
        return self.vertices[1:-1]

    def to_text(self):
        return [str(v) for v in self.vertices]


def _closer_candidates(u: Slope, y: Slope) -> list[Slope]:
    # In the frame where y is infinity, a geodesic toward infinity leaves u
    # through one of its two Farey parents (the ladder argument).
    frame = complete_to_unimodular_2(y.p, y.q)
    w = frame.inverse()(u)
    p, q = w.p, w.q
    inv = pow(p % q, -1, q)
    parents = []
    for eps in (1, -1):
        s = (eps * inv) % q
        r = (p * s - eps) // q
        parents.append(frame(Slope(r, s)))
    return parents


def farey_geodesic_path(x: Slope, y: Slope) -> FareyPath:
    """A shortest path from ``x`` to ``y``; among geodesics the one whose
    vertices are lexicographically smallest under (denominator, numerator)."""
    path = [x]
    u = x
    d = farey_distance(x, y)
    while d > 1:
        options = [v for v in _closer_candidates(u, y) if farey_distance(v, y) == d - 1]
        u = min(options, key=Slope.sort_key)
        path.append(u)
        d -= 1
    if d == 1:
        path.append(y)
    return FareyPath(path)


# ---------------------------------------------------------------------------
# breadth first search oracle


def oracle_max_cap() -> int:
    raw = os.environ.get(ORACLE_MAX_CAP_ENV)
    if raw is None:
        return DEFAULT_ORACLE_MAX_CAP
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"{ORACLE_MAX_CAP_ENV} must be an integer, got {raw!r}") from None
    if value < 1:
        raise ValueError(f"{ORACLE_MAX_CAP_ENV} must be positive")
    return value


def _bounded_neighbors(x: Slope, cap: int) -> Iterator[Slope]:
    """Neighbors of ``x`` whose canonical ``|p|`` and ``q`` are at most ``cap``."""
    p, q = x.p, x.q
    if q == 0:
        for n in range(-cap, cap + 1):
            yield Slope(n, 1)
        return
    if q == 1:
        yield INFINITY
    inv = pow(p % q, -1, q) if q > 1 else 0
    for eps in (1, -1):
        # p*s - q*r = eps forces s = eps * p^-1 (mod q)
        s = (eps * inv) % q or q
        while s <= cap:
            r = (p * s - eps) // q
            if abs(r) <= cap:
                yield Slope(r, s)
            s += q


def _bfs(source: Slope, cap: int, targets: set) -> dict:
    dist = {source: 0}
    missing = set(targets) - {source}
    queue = deque([source])
    while queue and missing:
        u = queue.popleft()
        du = dist[u] + 1
        for v in _bounded_neighbors(u, cap):
            if v not in dist:
                dist[v] = du
                missing.discard(v)
                queue.append(v)
    return dist


def _height(x: Slope) -> int:
    return max(abs(x.p), x.q)


def farey_distances_oracle(x: Slope, ys: Iterable[Slope], cap: int | None = None,
                           max_cap: int | None = None) -> dict:
    """Oracle distances from ``x`` to each of ``ys``, each stabilized separately.

    Starting at ``cap``, the bounded graph is searched at ``cap, 2cap, 4cap, ...``
    and a target's value is accepted once two consecutive caps agree.
    """
    ys = set(ys)
    needed = max([_height(x)] + [_height(y) for y in ys])
    cap = needed + 1 if cap is None else max(cap, needed, 1)
    limit = oracle_max_cap() if max_cap is None else max_cap
    if cap > limit:
        raise ResourceLimitError(f"initial cap {cap} exceeds the oracle limit {limit}")
    prev = _bfs(x, cap, ys)
    result = {}
    pending = set(ys)
    while pending:
        cap *= 2
        if cap > limit:
            raise ResourceLimitError(
                f"Farey oracle did not stabilize for {len(pending)} target(s) below cap {limit}"
            )
        cur = _bfs(x, cap, pending)
        for y in list(pending):
            if y in cur and prev.get(y) == cur[y]:
                result[y] = cur[y]
                pending.discard(y)
        prev = cur
    return result


def farey_distance_oracle(x: Slope, y: Slope, cap: int | None = None,
                          max_cap: int | None = None) -> int:
    """Breadth first search distance with cap doubling until the value stabilizes."""
    return farey_distances_oracle(x, [y], cap=cap, max_cap=max_cap)[y]
