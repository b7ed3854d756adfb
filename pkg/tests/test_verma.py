import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from mtakit.coeffs import X, Coefficient
from mtakit.liealg import HEISENBERG, VIRASORO, WindowExceeded
from mtakit.mta import MtaElement, epsilon, find_identity, mta_basis, mu, norm_coefficient
from mtakit.partitions import creation_word, partition_count, partitions
from mtakit.pbw import AlgebraMismatch, EnvElement, normal_order
from mtakit.verma import DegreeMismatch, VermaModule, act, mta_act, singular_vectors

from conftest import fock_apply

H, V = HEISENBERG, VIRASORO


def test_basic_actions():
    m = VermaModule(H)
    assert act(EnvElement.mode(H, 1), m.basis_vector((-1,))) == m.highest()
    assert act(EnvElement.mode(H, 0), m.highest()) == m.highest().scale(X)
    v = VermaModule(V)
    assert act(EnvElement.mode(V, 1), v.basis_vector((-1,))) == v.highest().scale(X * 2)
    rational = VermaModule(V, "3/2", 0)
    assert act(EnvElement.mode(V, 1), rational.basis_vector((-1,))) == rational.highest().scale(3)


def test_virasoro_central_charge_specialized():
    v = VermaModule(V, 0, 5)
    got = act(EnvElement.mode(V, 2), v.basis_vector((-2,)))
    assert got == v.highest().scale(Coefficient.const(5) / 2)


@pytest.mark.parametrize("alg", [H, V], ids=lambda a: a.kind)
def test_dimensions(alg):
    m = VermaModule(alg)
    for d in range(9):
        assert m.dimension(d) == partition_count(d)
        assert all(len(set(w)) <= len(w) and sorted(w) == list(w) for w in m.basis(d))


def test_fock_model_agrees():
    # the Heisenberg module at formal lambda is the Fock space with H_0 = x
    m = VermaModule(H)
    for d in range(4):
        for b in m.basis(d):
            for word in [(1,), (2,), (-1, 1), (1, 1, -2), (0, 2)]:
                got = act(normal_order(H, word), m.basis_vector(b))
                want = fock_apply(word, fock_apply(b, sp.Integer(1)))
                mine = sum((co.to_sympy() * fock_apply(w, sp.Integer(1)) for w, co in got.terms.items()),
                           sp.Integer(0))
                assert sp.expand(mine - want) == 0


@settings(max_examples=60)
@given(st.sampled_from([H, V]), st.lists(st.integers(-3, 3), max_size=3), st.lists(st.integers(-3, 3), max_size=3),
       st.integers(0, 3))
def test_action_compatible_with_product(alg, w1, w2, d):
    m = VermaModule(alg)
    u1, u2 = normal_order(alg, w1), normal_order(alg, w2)
    for b in m.basis(d):
        v = m.basis_vector(b)
        assert act(u1, act(u2, v)) == act(u1 * u2, v)


def test_mta_act_examples():
    m = VermaModule(H)
    for d in range(1, 4):
        for r in partitions(d):
            for s in partitions(d):
                for t in partitions(d):
                    got = mta_act(epsilon(H, r, s), m.basis_vector(creation_word(t)))
                    want = m.basis_vector(creation_word(r)).scale(norm_coefficient(t) if s == t else 0)
                    assert got == want
    assert not mta_act(MtaElement(H), m.basis_vector((-1,)))
    with pytest.raises(DegreeMismatch):
        mta_act(epsilon(H, (1,), (1,)), m.basis_vector((-2,)))
    with pytest.raises(AlgebraMismatch):
        mta_act(epsilon(V, (1,), (1,)), m.basis_vector((-1,)))


@pytest.mark.parametrize("d", range(5))
def test_unital_action(d):
    m = VermaModule(H)
    ident = find_identity(H, d).identity
    for b in m.basis(d):
        assert mta_act(ident, m.basis_vector(b)) == m.basis_vector(b)


@pytest.mark.parametrize("d", range(1, 5))
def test_factored_route(d):
    # acting through the mode transition algebra equals acting with the lifted word in U
    m = VermaModule(H)
    for a in mta_basis(H, d, d):
        for mid in (Coefficient.const(1), X, X * X - 3):
            elem = a.scale(mid)
            lifted = mu(elem, d).rep
            for b in m.basis(d):
                v = m.basis_vector(b)
                assert mta_act(elem, v) == act(lifted, v)


def test_singular_heisenberg_trivial():
    for lam in ("formal", 0, "5/3"):
        m = VermaModule(H, lam)
        for d in range(1, 6):
            assert singular_vectors(m, d).kernel_dim == 0


def test_singular_virasoro():
    rep = singular_vectors(VermaModule(V, 0, "formal"), 1)
    assert rep.kernel_dim == 1
    (vec,) = rep.kernel
    assert set(vec.terms) == {(-1,)}
    assert singular_vectors(VermaModule(V), 1).kernel_dim == 0
    # L(-1)L(-1)w0 is not singular for generic c
    assert singular_vectors(VermaModule(V, 0, "formal"), 2).kernel_dim == 0


def test_singular_virasoro_degree_two_kac():
    # for c = 1/2 and h = 1/16 the Kac determinant vanishes at degree 2
    rep = singular_vectors(VermaModule(V, "1/16", "1/2"), 2)
    assert rep.kernel_dim == 1
    (vec,) = rep.kernel
    for n in (1, 2):
        assert not act(EnvElement.mode(V, n), vec)


def test_singular_errors():
    with pytest.raises(ValueError):
        singular_vectors(VermaModule(H), 0)
    with pytest.raises(WindowExceeded):
        singular_vectors(VermaModule(V.with_window(3)), 4)


def test_report_json():
    data = singular_vectors(VermaModule(V, 0, "formal"), 1).to_json()
    assert data["h"] == "0" and data["c"] == "c" and data["kernel_dim"] == 1
