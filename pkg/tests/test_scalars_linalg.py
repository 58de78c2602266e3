from fractions import Fraction

import pytest
import sympy

from cosphere import linalg
from cosphere.scalars import QQ, LambdaRing, format_rational, parse_rational, parse_ring


def test_parse_rational():
    assert parse_rational("-3/6") == Fraction(-1, 2)
    assert parse_rational("4") == 4
    with pytest.raises(ZeroDivisionError):
        parse_rational("1/0")
    with pytest.raises(ValueError):
        parse_rational("x")


def test_format_rational():
    assert format_rational(Fraction(3, 1)) == "3"
    assert format_rational(Fraction(-2, 4)) == "-1/2"


def test_parse_ring_tags_round_trip():
    assert parse_ring("rational") == QQ
    R = parse_ring("lambda:1")
    assert R == LambdaRing(2)
    assert parse_ring(R.tag) == R
    with pytest.raises(ValueError):
        parse_ring("complex")


def test_lambda_ring_sphere_reduction():
    R = LambdaRing(3)
    l1, l2, l3 = R.gens
    assert R.reduce_sphere(l1**2 + l2**2 + l3**2) == R.one
    assert R.equal_on_sphere((l1**2 + l2**2 + l3**2) ** 2, R.one)
    assert not R.equal_on_sphere(l1, R.one)


def test_lambda_ring_specialize_and_terms():
    R = LambdaRing(2)
    l1, l2 = R.gens
    p = 3 * l1**2 - l1 * l2
    assert R.specialize(p, (2, 1)) == 10
    assert dict(R.terms(p)) == {(2, 0): 3, (1, 1): -1}
    assert R.parse(R.format(p)) == p
    assert R.from_json(R.to_json(p)) == p
    assert R.is_homogeneous(p, 2)


def test_solve_and_inverse_against_sympy():
    A = [[Fraction(2), Fraction(1), Fraction(0)], [Fraction(1), Fraction(3), Fraction(1)], [Fraction(0), Fraction(1), Fraction(4)]]
    b = [Fraction(1), Fraction(2), Fraction(3)]
    x = linalg.solve(A, b)
    ref = sympy.Matrix(A).LUsolve(sympy.Matrix(b))
    assert [Fraction(str(v)) for v in ref] == x
    inv = linalg.inverse(A)
    assert linalg.matmul(A, inv) == [[Fraction(int(i == j)) for j in range(3)] for i in range(3)]
    assert linalg.determinant(A) == Fraction(str(sympy.Matrix(A).det()))


def test_rank_and_nullspace():
    A = [[Fraction(1), Fraction(2), Fraction(3)], [Fraction(2), Fraction(4), Fraction(6)]]
    assert linalg.rank(A) == 1
    ns = linalg.nullspace(A)
    assert len(ns) == 2
    for v in ns:
        assert all(sum(a * x for a, x in zip(row, v)) == 0 for row in A)


def test_leading_minors():
    A = [[Fraction(2), Fraction(1)], [Fraction(1), Fraction(2)]]
    assert linalg.leading_minors(A) == [2, 3]
