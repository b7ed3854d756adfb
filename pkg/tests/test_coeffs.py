from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from mtakit.coeffs import (C, ONE, X, ZERO, Coefficient, DimensionMismatch, nullspace, poly_arith, rank,
                           reduced_fraction, solve_linear_system)

from conftest import c_sym, x_sym

rationals = st.fractions(min_value=-5, max_value=5, max_denominator=6)
monomials = st.tuples(st.integers(0, 3), st.integers(0, 2))
coefficients = st.dictionaries(monomials, rationals, max_size=4).map(Coefficient)


def test_additive_inverse():
    assert poly_arith(X, -X, "add") == ZERO
    assert not (X - X)


def test_monomial_product():
    assert poly_arith(X * 2, X, "mul") == Coefficient({(2, 0): 2})


def test_rational_scaling():
    assert poly_arith(C * Fraction(1, 12), Coefficient.const(6), "mul") == C * Fraction(1, 2)


def test_no_zero_terms_stored():
    co = Coefficient({(1, 0): 0, (0, 0): 3})
    assert co.terms == {(0, 0): Fraction(3)}


@given(coefficients, coefficients, coefficients)
def test_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert a + ZERO == a and a * ONE == a


@given(coefficients, coefficients)
def test_arithmetic_matches_sympy(a, b):
    sa, sb = a.to_sympy(), b.to_sympy()
    assert sp.expand((a * b).to_sympy() - sa * sb) == 0
    assert sp.expand((a - b).to_sympy() - (sa - sb)) == 0


@given(coefficients)
def test_json_round_trip(a):
    assert Coefficient.from_json(a.to_json()) == a


def test_json_shape():
    data = (X * Fraction(3, 2)).to_json()
    assert data == {"terms": [{"x": 1, "c": 0, "num": "3", "den": "2"}]}


@given(coefficients, coefficients)
def test_divmod_reconstructs(a, b):
    if not b:
        return
    q, r = divmod(a * b, b)
    assert q * b + r == a * b
    assert not r


def test_solve_polynomial():
    sol = solve_linear_system([[ONE]], [X])
    assert sol.polynomial and sol.values() == [X]


def test_solve_non_polynomial_certificate():
    sol = solve_linear_system([[X * 2]], [ONE])
    assert sol.consistent and not sol.polynomial
    (i, num, den), = sol.obstructions()
    assert i == 0 and num == ONE and den == X * 2


def test_solve_inconsistent():
    sol = solve_linear_system([[ZERO]], [ONE])
    assert sol.status == "inconsistent"
    assert sol.witness == {0: ONE} or sol.witness


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        solve_linear_system([[ONE, ONE]], [ONE, ONE])


small = st.dictionaries(st.tuples(st.integers(0, 2), st.integers(0, 1)), rationals, max_size=3).map(Coefficient)
square = st.integers(1, 3).flatmap(
    lambda n: st.tuples(st.lists(st.lists(small, min_size=n, max_size=n), min_size=n, max_size=n),
                        st.lists(small, min_size=n, max_size=n)))


@settings(max_examples=40)
@given(square)
def test_solution_substitutes_back(data):
    matrix, rhs = data
    sol = solve_linear_system(matrix, rhs)
    M = sp.Matrix([[e.to_sympy() for e in row] for row in matrix])
    b = sp.Matrix([e.to_sympy() for e in rhs])
    if sol.status == "inconsistent":
        # the witness combination kills every column but not the rhs
        assert M.rank(simplify=True) != M.row_join(b).rank(simplify=True)
        return
    vals = [n.to_sympy() / d.to_sympy() for n, d in zip(sol.numerators, sol.denominators)]
    residual = M * sp.Matrix(vals) - b
    assert all(sp.cancel(r) == 0 for r in residual)


@settings(max_examples=40)
@given(st.lists(st.lists(small, min_size=3, max_size=3), min_size=1, max_size=3))
def test_rank_and_nullspace_match_sympy(rows):
    sparse = [{j: v for j, v in enumerate(row) if v} for row in rows]
    M = sp.Matrix([[e.to_sympy() for e in row] for row in rows])
    assert rank(sparse, 3) == M.rank(simplify=True)
    kernel = nullspace(sparse, 3)
    assert len(kernel) == 3 - M.rank(simplify=True)
    for vec in kernel:
        out = M * sp.Matrix([v.to_sympy() for v in vec])
        assert all(sp.expand(e) == 0 for e in out)


def test_reduced_fraction_primitive_numerator():
    num, den = reduced_fraction(Coefficient.const(3) * (X + 1), X * X * 6 + X * 6)
    assert num == ONE and den == X * 2


def test_sympy_round_trip():
    co = X * X * C * Fraction(-2, 7) + 5
    assert Coefficient.from_sympy(co.to_sympy()) == co
    assert sp.expand(co.to_sympy() - (sp.Rational(-2, 7) * x_sym ** 2 * c_sym + 5)) == 0
