"""Exact integer linear algebra in dimension three.

Convention: matrices act on column vectors, so the columns of a matrix are
the images of the standard basis vectors.  ``IntMatrix3`` stores its entries
row by row (which is also how witnesses are serialized) and offers
``from_columns``/``columns`` for the column view.  Everything here is plain
Python integers or ``Fraction``; no floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence

from .errors import InvalidInputError, NotPrimitiveError, NotSaturatedError

Vector = tuple  # tuple of three ints

__all__ = [
    "IntMatrix3",
    "Sublattice",
    "det3",
    "cross",
    "dot",
    "vector_gcd",
    "is_primitive",
    "primitive_part",
    "hnf",
    "rank",
    "saturate",
    "complete_primitive_to_basis",
    "complete_sublattice_to_basis",
    "solve_rational",
]


def dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def cross(u, v):
    return (
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    )


def vector_gcd(v) -> int:
    g = 0
    for a in v:
        g = gcd(g, a)
    return g


def is_primitive(v) -> bool:
    return vector_gcd(v) == 1


def primitive_part(v) -> Vector:
    g = vector_gcd(v)
    if g == 0:
        raise InvalidInputError("the zero vector has no primitive part")
    return tuple(a // g for a in v)


@dataclass(frozen=True)
class IntMatrix3:
    rows: tuple

    def __post_init__(self):
        rows = tuple(tuple(int(a) for a in row) for row in self.rows)
        if len(rows) != 3 or any(len(r) != 3 for r in rows):
            raise InvalidInputError("IntMatrix3 needs three rows of three entries")
        object.__setattr__(self, "rows", rows)

    @classmethod
    def from_columns(cls, c0, c1, c2) -> "IntMatrix3":
        return cls(tuple(zip(c0, c1, c2)))

    @classmethod
    def identity(cls) -> "IntMatrix3":
        return cls(((1, 0, 0), (0, 1, 0), (0, 0, 1)))

    @property
    def columns(self):
        return tuple(zip(*self.rows))

    def det(self) -> int:
        return det3(self)

    def is_unimodular(self) -> bool:
        return abs(det3(self)) == 1

    def apply(self, v) -> Vector:
        return tuple(dot(row, v) for row in self.rows)

    def __matmul__(self, other):
        if isinstance(other, IntMatrix3):
            cols = [self.apply(c) for c in other.columns]
            return IntMatrix3.from_columns(*cols)
        return self.apply(other)

    def __neg__(self):
        return IntMatrix3(tuple(tuple(-a for a in row) for row in self.rows))

    def transpose(self) -> "IntMatrix3":
        return IntMatrix3(self.columns)

    def adjugate(self) -> "IntMatrix3":
        m = self.rows
        cof = [[0] * 3 for _ in range(3)]
        for i in range(3):
            for j in range(3):
                r = [k for k in range(3) if k != i]
                c = [k for k in range(3) if k != j]
                minor = m[r[0]][c[0]] * m[r[1]][c[1]] - m[r[0]][c[1]] * m[r[1]][c[0]]
                cof[i][j] = (-1) ** (i + j) * minor
        # adjugate is the transposed cofactor matrix
        return IntMatrix3(tuple(zip(*cof)))

    def inverse(self) -> "IntMatrix3":
        """Integer inverse; only defined for unimodular matrices."""
        d = det3(self)
        if abs(d) != 1:
            raise InvalidInputError(f"matrix with det {d} has no integer inverse")
        adj = self.adjugate()
        return IntMatrix3(tuple(tuple(d * a for a in row) for row in adj.rows))

    def to_list(self):
        return [list(r) for r in self.rows]


def det3(m) -> int:
    if not isinstance(m, IntMatrix3):
        m = IntMatrix3(m)
    (a, b, c), (d, e, f), (g, h, i) = m.rows
    return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)


def hnf(columns: Sequence) -> list:
    """Hermite basis of the lattice spanned by ``columns``.

    Returned vectors ``h_1, h_2, ...`` have strictly increasing pivot
    (first nonzero coordinate), positive pivots, and in each pivot coordinate
    the entries of the earlier vectors are reduced into ``[0, pivot)``.
    """
    rows = [list(v) for v in columns if any(v)]
    if not rows:
        raise InvalidInputError("hnf of the zero lattice is undefined")
    dim = len(rows[0])
    out = []
    col = 0
    while rows and col < dim:
        # Euclid on the current coordinate until one vector carries it
        while True:
            nz = [r for r in rows if r[col] != 0]
            if len(nz) <= 1:
                break
            nz.sort(key=lambda r: abs(r[col]))
            pivot = nz[0]
            for r in nz[1:]:
                qt = r[col] // pivot[col]
                for k in range(dim):
                    r[k] -= qt * pivot[k]
        nz = [r for r in rows if r[col] != 0]
        if nz:
            pivot = nz[0]
            rows.remove(pivot)
            if pivot[col] < 0:
                pivot = [-a for a in pivot]
            for prev in out:
                qt = prev[col] // pivot[col]
                for k in range(dim):
                    prev[k] -= qt * pivot[k]
            out.append(pivot)
        rows = [r for r in rows if any(r)]
        col += 1
    return [tuple(v) for v in out]


def rank(columns: Sequence) -> int:
    vs = [v for v in columns if any(v)]
    if not vs:
        return 0
    return len(hnf(vs))


@dataclass(frozen=True)
class Sublattice:
    """Saturated sublattice of Z^3 given by a Hermite basis."""

    rank: int
    basis: tuple

    def __post_init__(self):
        object.__setattr__(self, "basis", tuple(tuple(v) for v in self.basis))
        if len(self.basis) != self.rank:
            raise InvalidInputError("basis size does not match rank")


def saturate(columns: Sequence) -> Sublattice:
    """Basis of ``Z^3 ∩ span_Q(columns)``, in Hermite form."""
    vs = [tuple(v) for v in columns if any(v)]
    if not vs:
        raise InvalidInputError("cannot saturate the zero span")
    r = rank(vs)
    if r == 1:
        return Sublattice(1, hnf([primitive_part(vs[0])]))
    if r == 3:
        return Sublattice(3, ((1, 0, 0), (0, 1, 0), (0, 0, 1)))
    basis = hnf(vs)
    normal = primitive_part(cross(basis[0], basis[1]))
    # the plane lattice is the kernel of the primitive normal row; columns
    # 2 and 3 of a unimodular completion of the normal's dual give it
    u = complete_primitive_to_basis(normal)
    dual = u.inverse().transpose()
    kernel = [dual.columns[1], dual.columns[2]]
    return Sublattice(2, hnf(kernel))


def _egcd(a: int, b: int):
    """Return ``(g, x, y)`` with ``a*x + b*y = g = gcd(a, b) >= 0``."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        qt, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - qt * x1
        y0, y1 = y1, y0 - qt * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def complete_primitive_to_basis(v) -> IntMatrix3:
    """Unimodular matrix with first column ``v`` and determinant +1.

    Signed unit vectors complete cyclically (``e3 -> (e3, e1, e2)``).
    Otherwise take ``b*e + c*f = d = gcd(b, c)`` and ``a*x + d*y = 1``; the
    columns ``(a, b, c), (-y, x*b/d, x*c/d), (0, -f, e)`` are the inverse of
    the two elementary gcd steps sending ``v`` to ``e1``.
    """
    v = tuple(v)
    if len(v) != 3 or not is_primitive(v):
        raise NotPrimitiveError(f"{v} is not a primitive integer 3-vector")
    a, b, c = v
    nz = [i for i in range(3) if v[i]]
    if len(nz) == 1:
        i = nz[0]
        e = [tuple(1 if k == j else 0 for k in range(3)) for j in range(3)]
        m = IntMatrix3.from_columns(v, e[(i + 1) % 3], e[(i + 2) % 3])
    else:
        d = gcd(b, c)
        if d == 0:
            raise AssertionError("unreachable: two nonzero entries required")
        _, e, f = _egcd(b, c)
        _, x, y = _egcd(a, d)
        m = IntMatrix3.from_columns(v, (-y, x * b // d, x * c // d), (0, -f, e))
    if det3(m) < 0:
        c0, c1, c2 = m.columns
        m = IntMatrix3.from_columns(c0, c1, tuple(-t for t in c2))
    assert abs(det3(m)) == 1
    return m


def complete_sublattice_to_basis(s: Sublattice) -> IntMatrix3:
    """Unimodular matrix whose first two columns are the basis of ``s``.

    The third column ``w`` solves ``n . w = +-1`` for the normal ``n = b1 x b2``;
    a standard unit vector is used when some entry of ``n`` is ``+-1``.
    """
    if s.rank != 2:
        raise InvalidInputError("expected a rank 2 sublattice")
    b1, b2 = s.basis
    n = cross(b1, b2)
    if vector_gcd(n) != 1:
        raise NotSaturatedError(f"basis {s.basis} does not span a saturated sublattice")
    unit = [i for i in range(3) if abs(n[i]) == 1]
    if unit:
        i = unit[0]
        w = tuple(1 if k == i else 0 for k in range(3))
    else:
        # n is primitive: complete it, the first row of the inverse pairs to 1
        u = complete_primitive_to_basis(n)
        w = u.inverse().rows[0]
    m = IntMatrix3.from_columns(b1, b2, w)
    assert abs(det3(m)) == 1
    return m


def solve_rational(columns: Sequence, target) -> tuple | None:
    """Coefficients ``c`` (as Fractions) with ``sum c_i columns_i = target``, or None.

    ``columns`` must be linearly independent.
    """
    cols = [list(map(Fraction, c)) for c in columns]
    k = len(cols)
    # augmented 3 x (k+1) system, Gauss-Jordan
    m = [[cols[j][i] for j in range(k)] + [Fraction(target[i])] for i in range(3)]
    piv_row = 0
    pivots = []
    for c in range(k):
        r = next((i for i in range(piv_row, 3) if m[i][c] != 0), None)
        if r is None:
            raise InvalidInputError("columns are linearly dependent")
        m[piv_row], m[r] = m[r], m[piv_row]
        pv = m[piv_row][c]
        m[piv_row] = [t / pv for t in m[piv_row]]
        for i in range(3):
            if i != piv_row and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[piv_row])]
        pivots.append(c)
        piv_row += 1
    for i in range(piv_row, 3):
        if m[i][k] != 0:
            return None
    return tuple(m[i][k] for i in range(k))
