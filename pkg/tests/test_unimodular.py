from fractions import Fraction
from itertools import combinations
from math import gcd

import pytest
from hypothesis import assume, given, strategies as st

from torusrods.errors import InvalidInputError, NotPrimitiveError, NotSaturatedError
from torusrods.unimodular import (
    IntMatrix3,
    Sublattice,
    complete_primitive_to_basis,
    complete_sublattice_to_basis,
    cross,
    det3,
    hnf,
    is_primitive,
    rank,
    saturate,
    solve_rational,
)

small = st.integers(-6, 6)
vec = st.tuples(small, small, small)
matrices = st.tuples(vec, vec, vec).map(IntMatrix3)
primitive = vec.filter(lambda v: any(v) and is_primitive(v))


def cols(*c):
    return IntMatrix3.from_columns(*c)


@pytest.mark.parametrize("m,expected", [
    (IntMatrix3.identity(), 1),
    (cols((1, 0, 0), (1, 1, 0), (0, 0, 1)), 1),
    (cols((1, 0, 0), (0, 1, 0), (1, 1, 2)), 2),
])
def test_det3_examples(m, expected):
    assert det3(m) == expected


@pytest.mark.parametrize("gens,expected", [
    ([(2, 0, 0), (3, 0, 0)], [(1, 0, 0)]),
    ([(1, 0, 0), (0, 2, 0)], [(1, 0, 0), (0, 2, 0)]),
    ([(1, 1, 2), (1, 0, 0)], [(1, 0, 0), (0, 1, 2)]),
])
def test_hnf_examples(gens, expected):
    assert hnf(gens) == expected


def test_hnf_zero():
    with pytest.raises(InvalidInputError):
        hnf([(0, 0, 0)])


@pytest.mark.parametrize("gens,r,basis", [
    ([(0, 2, 0)], 1, ((0, 1, 0),)),
    ([(1, 0, 0), (1, 0, 2)], 2, ((1, 0, 0), (0, 0, 1))),
    ([(1, 0, 0), (0, 1, 2)], 2, ((1, 0, 0), (0, 1, 2))),
])
def test_saturate_examples(gens, r, basis):
    s = saturate(gens)
    assert s.rank == r and s.basis == basis


def test_saturate_zero():
    with pytest.raises(InvalidInputError):
        saturate([(0, 0, 0)])


@pytest.mark.parametrize("v,expected", [
    ((1, 0, 0), IntMatrix3.identity()),
    ((0, 0, 1), cols((0, 0, 1), (1, 0, 0), (0, 1, 0))),
])
def test_complete_primitive_examples(v, expected):
    assert complete_primitive_to_basis(v) == expected


def test_complete_primitive_general():
    m = complete_primitive_to_basis((2, 3, 5))
    assert m.columns[0] == (2, 3, 5)
    assert abs(det3(m)) == 1


def test_complete_primitive_rejects():
    with pytest.raises(NotPrimitiveError):
        complete_primitive_to_basis((2, 4, 6))


@pytest.mark.parametrize("basis,expected", [
    (((1, 0, 0), (0, 1, 0)), IntMatrix3.identity()),
    (((1, 0, 0), (0, 1, 2)), cols((1, 0, 0), (0, 1, 2), (0, 0, 1))),
    (((1, 0, 0), (0, 0, 1)), cols((1, 0, 0), (0, 0, 1), (0, 1, 0))),
])
def test_complete_sublattice_examples(basis, expected):
    m = complete_sublattice_to_basis(Sublattice(2, basis))
    assert m == expected
    assert abs(det3(m)) == 1


def test_complete_sublattice_rejects_unsaturated():
    with pytest.raises(NotSaturatedError):
        complete_sublattice_to_basis(Sublattice(2, ((1, 0, 0), (0, 2, 0))))


@given(matrices, matrices)
def test_det_multiplicative(a, b):
    assert det3(a @ b) == det3(a) * det3(b)


def _elementary(i, j, c):
    rows = [[int(r == k) for k in range(3)] for r in range(3)]
    rows[i][j] += c
    return IntMatrix3(tuple(map(tuple, rows)))


unimodular = st.lists(
    st.tuples(st.integers(0, 2), st.integers(0, 2), st.integers(-3, 3)).filter(lambda t: t[0] != t[1]),
    max_size=6,
).map(lambda ops: _product([_elementary(*op) for op in ops]))


def _product(ms):
    out = IntMatrix3.identity()
    for m in ms:
        out = out @ m
    return out


@given(unimodular)
def test_inverse_of_unimodular(a):
    assert abs(det3(a)) == 1
    assert a @ a.inverse() == IntMatrix3.identity()
    assert a.inverse() @ a == IntMatrix3.identity()


def _in_lattice(v, basis):
    c = solve_rational(basis, v)
    return c is not None and all(Fraction(x).denominator == 1 for x in c)


@given(st.lists(vec, min_size=1, max_size=4))
def test_hnf_same_lattice(gens):
    assume(any(any(v) for v in gens))
    h = hnf(gens)
    assert len(h) == rank(gens)
    assert all(_in_lattice(v, h) for v in gens)
    # same covolume: gcd of the maximal minors agrees, so the lattices coincide
    assert _minor_gcd(gens, len(h)) == _minor_gcd(h, len(h))
    assert hnf(h) == h


def _minor_gcd(vectors, r):
    g = 0
    for vs in combinations(vectors, r):
        for rows in combinations(range(3), r):
            m = [[v[i] for v in vs] for i in rows]
            g = gcd(g, _det(m))
    return g


def _det(m):
    if len(m) == 1:
        return m[0][0]
    return sum((-1) ** j * m[0][j] * _det([row[:j] + row[j + 1:] for row in m[1:]])
               for j in range(len(m)))


@given(st.lists(vec, min_size=1, max_size=3))
def test_saturate_idempotent(gens):
    assume(any(any(v) for v in gens))
    s = saturate(gens)
    assert saturate(s.basis) == s
    assert s.rank == rank(gens)
    # every generator lies in the saturation
    assert all(_in_lattice(v, s.basis) for v in gens if any(v))


@given(primitive)
def test_completion_of_primitive(v):
    m = complete_primitive_to_basis(v)
    assert m.columns[0] == v
    assert det3(m) == 1


@given(primitive, primitive)
def test_completion_of_plane(u, v):
    assume(any(cross(u, v)))
    s = saturate([u, v])
    m = complete_sublattice_to_basis(s)
    assert m.columns[:2] == s.basis
    assert abs(det3(m)) == 1
