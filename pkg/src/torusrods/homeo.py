"""Deciding when two families of rods have homeomorphic complements.

For ``k <= 3`` rods with linearly independent directions the complements are
homeomorphic exactly when some ``A`` in GL3(Z) sends the line of each
direction ``v_i`` onto the line of ``w_i``.

Why ``A v_i = +-w_i``: ``A v_i = c w_i`` with ``c`` rational.  ``A`` is
integral, so ``A v_i`` is an integer vector and, ``w_i`` being primitive,
``c`` is an integer.  ``A^-1`` is integral as well and ``v_i = c A^-1 w_i``
is primitive, so ``c`` divides 1.  Hence the search is over the finitely
many sign patterns.  ``A`` and ``-A`` act identically on lines; in odd
dimension one of them has determinant +1, and that one is reported.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations, product
from typing import Sequence

from .errors import ConfigError, InvalidInputError, InvalidSlopeError, UnsupportedCaseError
from .farey import Moebius2
from .lattice import Rod, rods_coincide, rods_disjoint
from .unimodular import (
    IntMatrix3,
    complete_primitive_to_basis,
    complete_sublattice_to_basis,
    det3,
    dot,
    is_primitive,
    rank,
    saturate,
    solve_rational,
)

__all__ = [
    "DirectionFamily",
    "EquivalenceWitness",
    "HomeoReport",
    "equivalent",
    "equivalent_k1",
    "equivalent_k2",
    "equivalent_k3",
    "equivalent_pairs_2d",
    "brute_force_orbit_search",
    "homeo_decision",
]


@dataclass(frozen=True)
class DirectionFamily:
    vectors: tuple

    def __post_init__(self):
        vs = tuple(tuple(int(a) for a in v) for v in self.vectors)
        if not 1 <= len(vs) <= 3:
            raise UnsupportedCaseError(f"families of 1 to 3 directions are supported, got {len(vs)}")
        for v in vs:
            if len(v) != 3 or not is_primitive(v):
                raise InvalidInputError(f"{v} is not a primitive integer 3-vector")
        if rank(vs) != len(vs):
            raise UnsupportedCaseError(
                "directions are linearly dependent; the classification only covers "
                "linearly independent closed geodesics"
            )
        object.__setattr__(self, "vectors", vs)

    @property
    def k(self) -> int:
        return len(self.vectors)

    def __iter__(self):
        return iter(self.vectors)


@dataclass(frozen=True)
class EquivalenceWitness:
    matrix: IntMatrix3
    signs: tuple

    def verify(self, v: DirectionFamily, w: DirectionFamily) -> bool:
        if abs(det3(self.matrix)) != 1:
            return False
        return all(
            self.matrix.apply(vi) == tuple(s * c for c in wi)
            for vi, wi, s in zip(v, w, self.signs)
        )

    def to_json(self):
        return {
            "matrix": self.matrix.to_list(),
            "signs": list(self.signs),
            "det": det3(self.matrix),
        }


def _witness(matrix: IntMatrix3, v: DirectionFamily, w: DirectionFamily,
             normalize: bool = True) -> EquivalenceWitness:
    if normalize and det3(matrix) < 0:
        matrix = -matrix
    signs = []
    for vi, wi in zip(v, w):
        image = matrix.apply(vi)
        if image == wi:
            signs.append(1)
        elif image == tuple(-c for c in wi):
            signs.append(-1)
        else:
            raise AssertionError(f"witness does not send {vi} to +-{wi}")
    wit = EquivalenceWitness(matrix, tuple(signs))
    assert wit.verify(v, w)
    return wit


def _as_family(x) -> DirectionFamily:
    return x if isinstance(x, DirectionFamily) else DirectionFamily(tuple(x))


def _sign_patterns(k: int):
    # global sign is irrelevant: fix the first sign to +1
    for rest in product((1, -1), repeat=k - 1):
        yield (1,) + rest


def _integral_matrix(rows) -> IntMatrix3 | None:
    if any(Fraction(a).denominator != 1 for row in rows for a in row):
        return None
    return IntMatrix3(tuple(tuple(int(a) for a in row) for row in rows))


def equivalent_k3(v, w) -> EquivalenceWitness | None:
    v, w = _as_family(v), _as_family(w)
    if v.k != 3 or w.k != 3:
        raise InvalidInputError("equivalent_k3 needs two families of three directions")
    V = IntMatrix3.from_columns(*v.vectors)
    W = IntMatrix3.from_columns(*w.vectors)
    dv = det3(V)
    adj = V.adjugate()
    for eps in _sign_patterns(3):
        # A = W diag(eps) V^-1
        WE = IntMatrix3.from_columns(*(tuple(e * c for c in col) for e, col in zip(eps, W.columns)))
        prod_ = WE @ adj
        A = _integral_matrix([[Fraction(a, dv) for a in row] for row in prod_.rows])
        if A is not None and abs(det3(A)) == 1:
            return _witness(A, v, w)
    return None


def equivalent_k2(v, w) -> EquivalenceWitness | None:
    v, w = _as_family(v), _as_family(w)
    if v.k != 2 or w.k != 2:
        raise InvalidInputError("equivalent_k2 needs two families of two directions")
    sv, sw = saturate(v.vectors), saturate(w.vectors)
    # saturated basis vectors of the source plane in terms of v1, v2
    coeffs = [solve_rational(v.vectors, b) for b in sv.basis]
    bv = complete_sublattice_to_basis(sv)
    bw = complete_sublattice_to_basis(sw)
    bv_inv = bv.inverse()
    for eps in _sign_patterns(2):
        images = []
        for c in coeffs:
            img = tuple(sum(ci * e * wi[t] for ci, e, wi in zip(c, eps, w.vectors)) for t in range(3))
            images.append(img)
        # phi must map the saturated lattice onto the saturated lattice
        cols = [solve_rational(sw.basis, img) for img in images]
        if any(x.denominator != 1 for col in cols for x in col):
            continue
        lattice_det = cols[0][0] * cols[1][1] - cols[0][1] * cols[1][0]
        if abs(lattice_det) != 1:
            continue
        third = bw.columns[2]
        for sigma in (1, -1):
            target = IntMatrix3.from_columns(
                tuple(int(x) for x in images[0]),
                tuple(int(x) for x in images[1]),
                tuple(sigma * x for x in third),
            )
            A = target @ bv_inv
            if det3(A) == 1:
                return _witness(A, v, w)
    return None


def equivalent_k1(v, w) -> EquivalenceWitness:
    v, w = _as_family(v), _as_family(w)
    if v.k != 1 or w.k != 1:
        raise InvalidInputError("equivalent_k1 needs two single directions")
    bv = complete_primitive_to_basis(v.vectors[0])
    bw = complete_primitive_to_basis(w.vectors[0])
    return _witness(bw @ bv.inverse(), v, w)


def equivalent(v, w) -> EquivalenceWitness | None:
    """Ordered criterion for families of equal size, dispatching on ``k``."""
    v, w = _as_family(v), _as_family(w)
    if v.k != w.k:
        raise UnsupportedCaseError(f"families differ in size ({v.k} vs {w.k})")
    return {1: equivalent_k1, 2: equivalent_k2, 3: equivalent_k3}[v.k](v, w)


def brute_force_orbit_search(v, w, bound: int) -> EquivalenceWitness | None:
    """Exhaustive search over integer matrices with entries in ``[-bound, bound]``.

    The box is enumerated row by row: for a fixed sign pattern, row ``j`` of a
    witness must satisfy ``row . v_i = eps_i * w_i[j]`` for all ``i``, so only
    the rows passing that test are combined.  ``-A`` has the opposite signs,
    so the first sign is fixed to +1.  Sign patterns are tried with all signs
    positive first; the result is the lexicographically smallest (row-major)
    witness for the first pattern that has one, or None, which is conclusive
    only relative to ``bound``.
    """
    v, w = _as_family(v), _as_family(w)
    if bound < 1:
        raise InvalidInputError("bound must be at least 1")
    if v.k != w.k:
        return None
    box = list(product(range(-bound, bound + 1), repeat=3))
    for eps in _sign_patterns(v.k):
        candidates = []
        for j in range(3):
            want = [e * wi[j] for e, wi in zip(eps, w.vectors)]
            candidates.append([r for r in box if all(dot(r, vi) == t for vi, t in zip(v.vectors, want))])
        for rows in product(*candidates):
            if abs(det3(IntMatrix3(rows))) == 1:
                return _witness(IntMatrix3(rows), v, w, normalize=False)
    return None


@dataclass
class HomeoReport:
    homeomorphic: bool
    k: int
    matching: tuple | None = None
    witness: EquivalenceWitness | None = None
    checks: list = field(default_factory=list)
    oracle: dict | None = None

    def to_json(self):
        out = {
            "homeomorphic": self.homeomorphic,
            "k": self.k,
            "matching": list(self.matching) if self.matching is not None else None,
            "witness": self.witness.to_json() if self.witness else None,
            "verification": self.checks,
        }
        if self.oracle is not None:
            out["oracle"] = self.oracle
        return out


def _check_family(rods: Sequence[Rod], label: str) -> DirectionFamily:
    for i in range(len(rods)):
        for j in range(i + 1, len(rods)):
            if rods_coincide(rods[i], rods[j]) or not rods_disjoint(rods[i], rods[j]):
                raise ConfigError(f"{label}: rods {i} and {j} are not disjoint")
    return DirectionFamily(tuple(r.direction for r in rods))


def homeo_decision(a: Sequence[Rod], b: Sequence[Rod], allow_permutation: bool = False,
                   oracle_bound: int | None = None) -> HomeoReport:
    """Decide whether the complements of two rod families are homeomorphic.

    Components are matched in the given order unless ``allow_permutation``,
    in which case every matching is tried (identity first).
    """
    a, b = list(a), list(b)
    if len(a) != len(b):
        raise UnsupportedCaseError(f"families differ in size ({len(a)} vs {len(b)})")
    if not 1 <= len(a) <= 3:
        raise UnsupportedCaseError(
            f"k={len(a)}: the classification applies to at most three rods"
        )
    v = _check_family(a, "first family")
    w = _check_family(b, "second family")
    k = v.k
    orders = list(permutations(range(k))) if allow_permutation else [tuple(range(k))]
    report = HomeoReport(False, k)
    for order in orders:
        wp = DirectionFamily(tuple(w.vectors[i] for i in order))
        wit = equivalent(v, wp)
        if wit is not None:
            report.homeomorphic = True
            report.matching = order
            report.witness = wit
            report.checks = [
                {
                    "component": i,
                    "direction": list(vi),
                    "image": list(wit.matrix.apply(vi)),
                    "target": list(wi),
                    "sign": s,
                    "ok": wit.matrix.apply(vi) == tuple(s * c for c in wi),
                }
                for i, (vi, wi, s) in enumerate(zip(v, wp, wit.signs))
            ] + [{"det": det3(wit.matrix), "ok": abs(det3(wit.matrix)) == 1}]
            break
    if oracle_bound is not None:
        found = None
        for order in orders:
            wp = DirectionFamily(tuple(w.vectors[i] for i in order))
            hit = brute_force_orbit_search(v, wp, oracle_bound)
            if hit is not None:
                found = (order, hit)
                break
        report.oracle = {
            "bound": oracle_bound,
            "witness_found": found is not None,
            "matching": list(found[0]) if found else None,
            "witness": found[1].to_json() if found else None,
            "agrees": report.homeomorphic or found is None,
            "note": "a missing oracle witness is conclusive only up to the entry bound",
        }
    return report


def equivalent_pairs_2d(g: tuple, h: tuple) -> Moebius2 | None:
    """Unimodular ``A`` with ``A g_i = +-h_i`` for slope pairs ``g``, ``h``, or None."""
    g1, g2 = g
    h1, h2 = h
    if g1 == g2 or h1 == h2:
        raise InvalidSlopeError("each pair must consist of two distinct slopes")
    det_g = g1.p * g2.q - g2.p * g1.q
    for e2 in (1, -1):
        # columns of H diag(1, e2); A = H diag(eps) G^-1 with G^-1 = adj(G)/det_g
        ha, hb, hc, hd = h1.p, e2 * h2.p, h1.q, e2 * h2.q
        ia, ib, ic, id_ = g2.q, -g2.p, -g1.q, g1.p
        entries = [
            Fraction(ha * ia + hb * ic, det_g), Fraction(ha * ib + hb * id_, det_g),
            Fraction(hc * ia + hd * ic, det_g), Fraction(hc * ib + hd * id_, det_g),
        ]
        if all(x.denominator == 1 for x in entries):
            a, b_, c, d = (int(x) for x in entries)
            if abs(a * d - b_ * c) == 1:
                m = Moebius2(a, b_, c, d)
                assert m(g1) == h1 and m(g2) == h2
                return m
    return None
