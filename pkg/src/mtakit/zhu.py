"""Higher level Zhu algebras A_d: degree-zero words modulo N^{d+1}.

Elements are stored folded: each canonical degree-zero word C Z^k A is
recorded under the key (C, A) with the zero-mode power carried as x^k in
the coefficient.  For the Heisenberg algebra this is literally the
identification H_0 = x; for Virasoro it just fixes the middle position of
L_0^k, and products unfold back to words before normal ordering.
"""

from __future__ import annotations

from typing import Mapping

from .coeffs import ONE, ZERO, Coefficient, X, rank
from .liealg import AlgebraSpec, HEISENBERG, VIRASORO, bracket
from .partitions import annihilation_word, creation_word, partition_count, partitions
from .pbw import (AlgebraMismatch, EnvElement, _accumulate, annihilation_weight, fold, multiply, normal_order,
                  product_words, truncate_left, unfold, word_degree)

Key = tuple[tuple[int, ...], tuple[int, ...]]


class LevelMismatch(ValueError):
    pass


def key_weight(key: Key) -> int:
    return annihilation_weight(key[1])


def key_label(alg: AlgebraSpec, key: Key) -> str:
    cre, ann = key
    inner = "".join(alg.mode_label(n) for n in cre) + "|" + "".join(alg.mode_label(n) for n in ann)
    return f"[{inner}]"


class ZhuElement:
    """Class of a degree-zero element in A_d, kept in reduced folded form."""

    __slots__ = ("level", "algebra", "terms")

    def __init__(self, level: int, algebra: AlgebraSpec, terms: Mapping[Key, Coefficient]):
        self.level = level
        self.algebra = algebra
        self.terms = {k: v for k, v in terms.items() if v and key_weight(k) <= level}

    @classmethod
    def one(cls, algebra: AlgebraSpec, level: int) -> "ZhuElement":
        return cls(level, algebra, {((), ()): ONE})

    @classmethod
    def basis_element(cls, algebra: AlgebraSpec, level: int, key: Key,
                      coeff: Coefficient = ONE) -> "ZhuElement":
        return cls(level, algebra, {key: coeff})

    @property
    def rep(self) -> EnvElement:
        out: dict = {}
        for key, co in self.terms.items():
            for word, c2 in unfold(key, co).items():
                _accumulate(out, word, c2)
        return EnvElement._wrap(self.algebra, out)

    def _check(self, other: "ZhuElement") -> None:
        if self.algebra.kind != other.algebra.kind:
            raise AlgebraMismatch(f"{self.algebra.kind} vs {other.algebra.kind}")
        if self.level != other.level:
            raise LevelMismatch(f"level {self.level} vs {other.level}")

    def __add__(self, other: "ZhuElement") -> "ZhuElement":
        self._check(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            _accumulate(out, k, v)
        return ZhuElement(self.level, self.algebra, out)

    def __neg__(self):
        return ZhuElement(self.level, self.algebra, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, k: Coefficient | int) -> "ZhuElement":
        """Multiply every coefficient by ``k`` (x acts in the middle slot)."""
        k = Coefficient.coerce(k)
        return ZhuElement(self.level, self.algebra, {key: v * k for key, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, ZhuElement):
            return zhu_multiply(self, other)
        if isinstance(other, (Coefficient, int)):
            return self.scale(other)
        return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, ZhuElement):
            return NotImplemented
        return (self.algebra.kind == other.algebra.kind and self.level == other.level
                and self.terms == other.terms)

    def __bool__(self):
        return bool(self.terms)

    def coefficient(self, key: Key) -> Coefficient:
        return self.terms.get(key, ZERO)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: (key_weight(t[0]), t[0]))

    def __str__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"({co}){key_label(self.algebra, k)}" for k, co in self.sorted_terms())

    def __repr__(self):
        return f"ZhuElement[{self.algebra.kind}, level {self.level}]({self})"

    def to_json(self) -> dict:
        return {"level": self.level, "algebra": self.algebra.kind,
                "terms": [{"creation": [self.algebra.mode_label(n) for n in k[0]],
                           "annihilation": [self.algebra.mode_label(n) for n in k[1]],
                           "coeff": co.to_json()} for k, co in self.sorted_terms()]}


def zhu_class(a: EnvElement, d: int) -> ZhuElement:
    """[a]_d for a degree-zero element a."""
    if d < 0:
        raise ValueError("level must be non-negative")
    if any(word_degree(w) != 0 for w in a.terms):
        raise ValueError("zhu_class needs a degree-zero element")
    return ZhuElement(d, a.algebra, fold(truncate_left(a, d + 1).terms))


def zhu_multiply(a: ZhuElement, b: ZhuElement) -> ZhuElement:
    a._check(b)
    d = a.level
    alg = a.algebra
    out: dict = {}
    left = a.rep.terms
    right = b.rep.terms
    for u, p in left.items():
        for w, q in right.items():
            pq = p * q
            for word, co in product_words(alg, u, w).items():
                if annihilation_weight(word) <= d:
                    _accumulate(out, word, pq * co)
    return ZhuElement(d, alg, fold(out))


def pi_map(a: ZhuElement) -> ZhuElement:
    """Canonical projection A_d -> A_{d-1}."""
    if a.level == 0:
        raise ValueError("pi_map is undefined at level 0")
    return ZhuElement(a.level - 1, a.algebra, a.terms)


def lift(a: ZhuElement, level: int) -> ZhuElement:
    """The same reduced representative read at a higher level (a set-theoretic section)."""
    if level < a.level:
        raise ValueError("lift goes up in level")
    return ZhuElement(level, a.algebra, a.terms)


def zhu_basis(d: int) -> list[Key]:
    """Free C[x]-basis keys (r, s) with |r| = |s| = j <= d, layer by layer."""
    keys = []
    for j in range(d + 1):
        for r in partitions(j):
            for s in partitions(j):
                keys.append((creation_word(r), annihilation_word(s)))
    return keys


def coordinates(a: ZhuElement, basis: list[Key]) -> dict[int, Coefficient]:
    index = {k: i for i, k in enumerate(basis)}
    out = {}
    for k, v in a.terms.items():
        if k not in index:
            raise KeyError(f"{key_label(a.algebra, k)} is not in the basis")
        out[index[k]] = v
    return out


def multiplication_table(alg: AlgebraSpec, d: int, jobs: int = 1) -> list[list[ZhuElement]]:
    basis = zhu_basis(d)
    elems = [ZhuElement.basis_element(alg, d, k) for k in basis]
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_table_row, [(alg, d, i) for i in range(len(basis))]))
        return [[ZhuElement(d, alg, terms) for terms in row] for row in rows]
    return [[zhu_multiply(a, b) for b in elems] for a in elems]


def _table_row(args):
    alg, d, i = args
    basis = zhu_basis(d)
    a = ZhuElement.basis_element(alg, d, basis[i])
    return [zhu_multiply(a, ZhuElement.basis_element(alg, d, k)).terms for k in basis]


# ---------------------------------------------------------------------------
# Heisenberg structure theorem


def verify_heisenberg_structure(d: int, jobs: int = 1) -> dict:
    """Certify A_d(pi) = prod_{j<=d} Mat_{p(j)}(C[x]) by explicit matrix units."""
    from . import mta

    alg = HEISENBERG
    basis = zhu_basis(d)
    expected_rank = sum(partition_count(j) ** 2 for j in range(d + 1))
    table = multiplication_table(alg, d, jobs)
    failures: list[str] = []

    # every product of basis words lands in the span of the basis
    for row in table:
        for entry in row:
            for k in entry.terms:
                if k not in basis:
                    failures.append(f"product leaves basis: {key_label(alg, k)}")

    identities = {}
    for j in range(d + 1):
        res = mta.find_identity(alg, j)
        if res.identity is None:
            failures.append(f"no identity in layer {j}")
            return _structure_report(d, basis, expected_rank, {}, failures)
        identities[j] = res.identity

    one = ZhuElement.one(alg, d)
    units: dict[int, dict[tuple, ZhuElement]] = {}
    layer_idempotents: dict[int, ZhuElement] = {}
    for j in range(d + 1):
        layer = {}
        for r in partitions(j):
            for s in partitions(j):
                e = mta.mu(mta.matrix_unit(alg, r, s), j)
                for k in range(j + 1, d + 1):
                    top = mta.mu(identities[k], k)
                    e = zhu_multiply(lift(e, k), ZhuElement.one(alg, k) - top)
                layer[(r, s)] = e
        units[j] = layer
        total = ZhuElement(d, alg, {})
        for r in partitions(j):
            total = total + layer[(r, r)]
        layer_idempotents[j] = total

    # matrix-unit relations inside each layer
    for j, layer in units.items():
        for (r, s), e1 in layer.items():
            for (u, v), e2 in layer.items():
                prod = zhu_multiply(e1, e2)
                want = layer[(r, v)] if s == u else ZhuElement(d, alg, {})
                if prod != want:
                    failures.append(f"layer {j}: e[{r},{s}] e[{u},{v}] != expected")

    # central, orthogonal idempotents summing to one
    elems = [ZhuElement.basis_element(alg, d, k) for k in basis]
    total = ZhuElement(d, alg, {})
    for j, e in layer_idempotents.items():
        total = total + e
        for i, e2 in layer_idempotents.items():
            prod = zhu_multiply(e, e2)
            if prod != (e if i == j else ZhuElement(d, alg, {})):
                failures.append(f"idempotents {j},{i} not orthogonal")
        for b in elems:
            if zhu_multiply(e, b) != zhu_multiply(b, e):
                failures.append(f"layer idempotent {j} not central")
                break
    if total != one:
        failures.append("layer idempotents do not sum to 1")

    # the units form a free C[x]-basis: coordinate matrix has full rank and constant entries
    rows = []
    constant = True
    for layer in units.values():
        for e in layer.values():
            row = coordinates(e, basis)
            constant &= all(v.is_constant() for v in row.values())
            rows.append(row)
    unit_rank = rank(rows, len(basis))
    if unit_rank != len(basis) or not constant:
        failures.append(f"matrix units span rank {unit_rank}, constant={constant}")

    return _structure_report(d, basis, expected_rank, layer_idempotents, failures)


def _structure_report(d, basis, expected_rank, idempotents, failures) -> dict:
    return {
        "algebra": "heisenberg",
        "level": d,
        "rank": len(basis),
        "expected_rank": expected_rank,
        "layers": [partition_count(j) for j in range(d + 1)],
        "idempotents": [{"layer": j, "element": e.to_json()} for j, e in sorted(idempotents.items())],
        "ok": not failures and len(basis) == expected_rank,
        "failures": failures[:20],
    }


# ---------------------------------------------------------------------------
# Virasoro level one


def virasoro_iterate(alg: AlgebraSpec, bound: int) -> EnvElement:
    """Expansion of the zero mode of the normally ordered square of the conformal vector.

    The infinite tail sum_{n>=2} L_{-n} L_n is cut at n = bound; every tail
    word lies in N^2 so the cut is invisible at levels 0 and 1.
    """
    out = normal_order(alg, (-1, 1)) + normal_order(alg, (1, -1)) + normal_order(alg, (0, 0))
    for n in range(2, bound + 1):
        out = out + normal_order(alg, (-n, n)).scale(2)
    return out


def verify_virasoro_level1(degree_bound: int) -> dict:
    if degree_bound < 4:
        raise ValueError("degree bound must be at least 4")
    # products of two tail words reach index 2 * degree_bound
    alg = VIRASORO.with_window(2 * degree_bound)
    checks: dict[str, bool] = {}

    br = bracket(alg, 1, -1)
    checks["bracket_L1_Lm1_is_2L0"] = br.modes == {0: Coefficient.const(2)} and not br.central

    L = lambda *w: normal_order(alg, w)  # noqa: E731
    tail = EnvElement.zero(alg)
    for n in range(2, degree_bound + 1):
        tail = tail + L(-n, n).scale(2)
    iterate = virasoro_iterate(alg, degree_bound)
    checks["iterate_has_2_Lm1L1"] = iterate.coefficient((-1, 1)) == 2

    # the displayed chain, line by line
    chain = [
        tail + L(-1, 1) + L(1, -1) + L(0, 0) - L(0, 0) - L(0).scale(2),
        tail + L(-1, 1) + L(1, -1) - L(0).scale(2),
        tail + L(-1, 1).scale(2) + L(0).scale(2) - L(0).scale(2),
        tail + L(-1, 1).scale(2),
    ]
    y_tilde = iterate - L(0, 0) - L(0).scale(2)
    checks["chain_equalities"] = all(line == y_tilde for line in chain)
    residue = y_tilde - L(-1, 1).scale(2)
    checks["y_tilde_minus_2Lm1L1_in_N2"] = not truncate_left(residue, 2) and residue == tail

    gen = zhu_class(L(-1, 1), 1)
    checks["generator_in_kernel"] = not pi_map(gen)
    checks["generator_square_is_2x_generator"] = zhu_multiply(gen, gen) == gen.scale(X * 2)

    product_law = True
    for a in range(7):
        for b in range(7 - a):
            f = gen.scale(X ** a)
            g = gen.scale(X ** b)
            if zhu_multiply(f, g) != gen.scale(X ** (a + b + 1) * 2):
                product_law = False
    checks["kernel_product_law_2tfg"] = product_law

    # kernel of pi_1 in folded coordinates: exactly the keys of weight 1
    kernel_keys = [k for k in zhu_basis(1) if key_weight(k) == 1]
    checks["kernel_is_generator_span"] = kernel_keys == list(gen.terms)

    # presentation: with x -> L_0 and y -> the iterate, q0 vanishes at level 0 and X*Y at level 1
    x0 = L(0)
    y = iterate
    big_y = y - L(0, 0) - x0.scale(2)
    big_x = y - L(0, 0) - x0.scale(6) + EnvElement.one(alg).scale(4)
    checks["q0_vanishes_in_A0"] = not zhu_class(big_y, 0)
    checks["XY_vanishes_in_A1"] = not zhu_class(multiply(big_x, big_y), 1)
    checks["YX_vanishes_in_A1"] = not zhu_class(multiply(big_y, big_x), 1)

    return {
        "algebra": "virasoro",
        "level": 1,
        "degree_bound": degree_bound,
        "checks": checks,
        "y_tilde_class": zhu_class(y_tilde, 1).to_json(),
        "ok": all(checks.values()),
    }
