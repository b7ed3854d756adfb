from fractions import Fraction
from math import factorial

import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from mtakit.coeffs import X, Coefficient
from mtakit.liealg import HEISENBERG, VIRASORO
from mtakit.mta import (BidegreeError, MtaElement, epsilon, find_identity, left_act, matrix_unit, mta_basis,
                        mu, norm_coefficient, ostar, right_act, star, verify_heisenberg_table,
                        verify_splitting, verify_strong_identity)
from mtakit.partitions import annihilation_word, creation_word, partitions
from mtakit.pbw import AlgebraMismatch, EnvElement, normal_order, theta_env
from mtakit.zhu import ZhuElement, zhu_class, zhu_multiply

from conftest import fock_apply

H, V = HEISENBERG, VIRASORO


def scalar(z):
    return z.coefficient(((), ()))


def test_ostar_examples():
    assert scalar(ostar(EnvElement.mode(H, 1), EnvElement.mode(H, -1))) == 1
    assert scalar(ostar(EnvElement.mode(H, -1), EnvElement.mode(H, 1))) == 0
    assert scalar(ostar(EnvElement.mode(V, 1), EnvElement.mode(V, -1))) == X * 2
    assert scalar(ostar(EnvElement.mode(H, 2), EnvElement.mode(H, -1))) == 0


def test_norm_examples():
    for d in range(1, 8):
        assert norm_coefficient((1,) * d) == factorial(d)
        assert norm_coefficient((d,)) == d
    assert norm_coefficient((2, 1)) == 2


def fock_norm(r):
    # annihilation word applied to the creation monomial in the Fock space
    vec = fock_apply(creation_word(r), sp.Integer(1))
    return fock_apply(annihilation_word(r), vec)


@pytest.mark.parametrize("d", range(1, 7))
def test_norm_against_fock_and_contraction(d):
    for r in partitions(d):
        a = EnvElement(H, {annihilation_word(r): 1})
        b = EnvElement(H, {creation_word(r): 1})
        assert scalar(ostar(a, b)) == norm_coefficient(r) == fock_norm(r)


def test_star_examples():
    e = epsilon(H, (1,), (1,))
    assert star(e, e) == e
    f = epsilon(V, (1,), (1,))
    assert star(f, f) == f.scale(X * 2)
    with pytest.raises(AlgebraMismatch):
        star(e, f)


def test_basis_order_and_counts():
    got = [(k[0], k[1]) for b in mta_basis(H, 2, 2) for k in b.terms]
    assert got == [((-1, -1), (1, 1)), ((-1, -1), (2,)), ((-2,), (1, 1)), ((-2,), (2,))]
    assert mta_basis(H, 0, 0) == [MtaElement(H, {((), ()): 1})]
    assert len(mta_basis(H, 3, 3)) == 9
    assert len(mta_basis(H, 2, 3)) == 6


def test_identity_examples():
    assert find_identity(H, 0).identity == MtaElement(H, {((), ()): 1})
    i2 = find_identity(H, 2).identity
    half = Coefficient.const(Fraction(1, 2))
    assert i2 == epsilon(H, (1, 1), (1, 1), half) + epsilon(H, (2,), (2,), half)
    for b in mta_basis(H, 2, 2):
        assert star(i2, b) == b == star(b, i2)


def test_virasoro_no_identity():
    res = find_identity(V, 1)
    assert res.identity is None and res.status == "not-polynomial"
    assert res.certificate()["denominator"] == "2*x"


@pytest.mark.parametrize("d", range(0, 5))
def test_identity_is_inverse_norm_sum(d):
    want = MtaElement(H)
    for r in partitions(d):
        want = want + epsilon(H, r, r, Coefficient.const(Fraction(1, norm_coefficient(r))))
    assert find_identity(H, d).identity == want


def test_mu_examples():
    assert mu(epsilon(H, (1,), (1,)), 1) == zhu_class(normal_order(H, (-1, 1)), 1)
    assert mu(MtaElement(H, {((), ()): 1}), 0) == ZhuElement.one(H, 0)
    with pytest.raises(BidegreeError):
        mu(epsilon(H, (2,), (1, 1)), 1)


def test_bad_representative():
    with pytest.raises(ValueError):
        MtaElement(H, {((1,), (1,)): 1})


def homogeneous(alg=H, top=4):
    def build(spec):
        d1, d2, picks = spec
        basis = mta_basis(alg, d1, d2)
        out = MtaElement(alg)
        for i, k, m in picks:
            out = out + basis[i % len(basis)].scale(X ** m * k)
        return out
    pick = st.tuples(st.integers(0, 40), st.integers(-3, 3), st.integers(0, 2))
    return st.tuples(st.integers(0, top), st.integers(0, top), st.lists(pick, min_size=1, max_size=3)).map(build)


@settings(max_examples=200)
@given(homogeneous(), homogeneous(), homogeneous())
def test_star_associative(a, b, c):
    assert star(star(a, b), c) == star(a, star(b, c))


@settings(max_examples=50)
@given(homogeneous(V, 2), homogeneous(V, 2), homogeneous(V, 2))
def test_star_associative_virasoro(a, b, c):
    assert star(star(a, b), c) == star(a, star(b, c))


@given(homogeneous(), homogeneous())
def test_bidegree_law(a, b):
    prod = star(a, b)
    (d1, d2), = a.bidegrees() or {(0, 0)}
    (d3, d4), = b.bidegrees() or {(0, 0)}
    if d2 + d3 != 0:
        assert not prod
    else:
        assert prod.bidegrees() <= {(d1, d4)}


@pytest.mark.parametrize("d", range(0, 7))
def test_closed_form(d):
    assert verify_heisenberg_table(d)["ok"]


def test_bimodule_compatibility():
    for n in range(-3, 4):
        u = EnvElement.mode(H, n)
        for d1 in range(4):
            for d2 in range(4):
                for d3 in range(4):
                    for a in mta_basis(H, d1, d2):
                        for b in mta_basis(H, d2, d3):
                            assert left_act(u, star(a, b)) == star(left_act(u, a), b)
                            assert right_act(star(a, b), u) == star(a, right_act(b, u))


@given(st.lists(st.integers(1, 4), min_size=1, max_size=3), st.lists(st.integers(1, 4), min_size=1, max_size=3))
def test_theta_consistency(v_parts, w_parts):
    v = EnvElement(H, {tuple(sorted(v_parts)): 1})
    w = EnvElement(H, {tuple(sorted(-p for p in w_parts)): 1})
    assert ostar(theta_env(theta_env(v)), w) == ostar(v, w)


def test_strong_identity_small():
    rep = verify_strong_identity(H, 3, 3)
    assert rep["ok"]
    assert all(c["ok"] for c in rep["strong_identity_checks"])
    vir = verify_strong_identity(V, 1, 1)
    assert not vir["ok"] and vir["stage"] == "identity"


def test_n_zero_equation_trivial():
    i2 = find_identity(H, 2).identity
    h0 = EnvElement.mode(H, 0)
    assert left_act(h0, i2) == right_act(i2, h0) == i2.scale(X)


@pytest.mark.parametrize("d", [1, 2, 3])
def test_splitting(d):
    rep = verify_splitting(H, d)
    assert rep["ok"] and rep["splitting"]["attempted"]


def test_splitting_virasoro_exactness_only():
    rep = verify_splitting(V, 1)
    assert rep["checks"]["image_equals_kernel"] and rep["checks"]["mu_injective"]
    assert not rep["splitting"]["attempted"]


def test_mu_multiplicative_on_virasoro_monomials():
    g = epsilon(V, (1,), (1,))
    for a in range(4):
        for b in range(4):
            f1, f2 = g.scale(X ** a), g.scale(X ** b)
            assert mu(star(f1, f2), 1) == zhu_multiply(mu(f1, 1), mu(f2, 1))


def test_matrix_units():
    for d in range(1, 4):
        for r in partitions(d):
            for s in partitions(d):
                for t in partitions(d):
                    assert star(matrix_unit(H, r, s), matrix_unit(H, s, t)) == matrix_unit(H, r, t)


def test_json():
    data = epsilon(H, (2,), (1, 1)).to_json()
    assert data["terms"][0]["creation"] == ["H(-2)"]
    assert data["terms"][0]["annihilation"] == ["H(1)", "H(1)"]
