"""Mode transition algebras: creation coset (x) A_0 (x) annihilation coset.

An element is a combination of keys (u, v) where u is a pure creation word
and v a pure annihilation word; the A_0 = C[x] middle factor is folded into
the coefficient.  The product contracts the inner annihilation word
against the next creation word through the level-zero class of their
product.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Mapping

from .coeffs import ONE, ZERO, Coefficient, LinearSolution, nullspace, rank, solve_sparse
from .liealg import AlgebraSpec
from .partitions import Partition, annihilation_word, creation_word, norm_coefficient, partitions
from .pbw import (AlgebraMismatch, EnvElement, _accumulate, annihilation_weight, creation_weight,
                  product_words, split_word, word_degree)
from .zhu import ZhuElement, lift, pi_map, zhu_basis, zhu_class, zhu_multiply, coordinates

__all__ = [
    "MtaElement", "ostar", "norm_coefficient", "star", "mta_basis", "epsilon", "matrix_unit",
    "find_identity", "IdentityResult", "left_act", "right_act", "verify_strong_identity",
    "mu", "verify_splitting", "verify_heisenberg_table", "basis_keys",
]

Key = tuple[tuple[int, ...], tuple[int, ...]]


class BidegreeError(ValueError):
    pass


def _check_key(key: Key) -> None:
    cre, ann = key
    if any(n >= 0 for n in cre) or any(n <= 0 for n in ann):
        raise ValueError(f"bad coset representative {key}")
    if list(cre) != sorted(cre) or list(ann) != sorted(ann):
        raise ValueError(f"non-canonical coset representative {key}")


class MtaElement:
    __slots__ = ("algebra", "terms")

    def __init__(self, algebra: AlgebraSpec, terms: Mapping[Key, Coefficient] | None = None):
        self.algebra = algebra
        clean = {}
        for key, co in (terms or {}).items():
            key = (tuple(key[0]), tuple(key[1]))
            _check_key(key)
            co = Coefficient.coerce(co)
            if co:
                clean[key] = co
        self.terms = clean

    @classmethod
    def _wrap(cls, algebra: AlgebraSpec, terms: dict) -> "MtaElement":
        obj = cls.__new__(cls)
        obj.algebra = algebra
        obj.terms = terms
        return obj

    def bidegrees(self) -> set[tuple[int, int]]:
        return {(creation_weight(u), -annihilation_weight(v)) for u, v in self.terms}

    def __add__(self, other: "MtaElement") -> "MtaElement":
        _same(self, other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            _accumulate(out, k, v)
        return MtaElement._wrap(self.algebra, out)

    def __neg__(self):
        return MtaElement._wrap(self.algebra, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, k: Coefficient | int) -> "MtaElement":
        k = Coefficient.coerce(k)
        if not k:
            return MtaElement(self.algebra)
        return MtaElement._wrap(self.algebra, {key: v * k for key, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, MtaElement):
            return star(self, other)
        if isinstance(other, (Coefficient, int)):
            return self.scale(other)
        return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, MtaElement):
            return NotImplemented
        return self.algebra.kind == other.algebra.kind and self.terms == other.terms

    def __bool__(self):
        return bool(self.terms)

    def coefficient(self, key: Key) -> Coefficient:
        return self.terms.get(key, ZERO)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: (len(t[0][0]) + len(t[0][1]), t[0]))

    def __str__(self):
        if not self.terms:
            return "0"
        lab = self.algebra.mode_label
        parts = []
        for (u, v), co in self.sorted_terms():
            left = "".join(lab(n) for n in u) or "1"
            right = "".join(lab(n) for n in v) or "1"
            parts.append(f"{left} (x) ({co}) (x) {right}")
        return " + ".join(parts)

    def __repr__(self):
        return f"MtaElement[{self.algebra.kind}]({self})"

    def to_json(self) -> dict:
        lab = self.algebra.mode_label
        return {"algebra": self.algebra.kind,
                "terms": [{"creation": [lab(n) for n in u], "middle": co.to_json(),
                           "annihilation": [lab(n) for n in v]} for (u, v), co in self.sorted_terms()]}


def _same(a, b) -> None:
    if a.algebra.kind != b.algebra.kind:
        raise AlgebraMismatch(f"{a.algebra.kind} vs {b.algebra.kind}")


# ---------------------------------------------------------------------------
# contraction and product


@lru_cache(maxsize=None)
def _ostar_words(alg: AlgebraSpec, u: tuple[int, ...], w: tuple[int, ...]) -> Coefficient:
    if word_degree(u) + word_degree(w) != 0:
        return ZERO
    out = ZERO
    for word, co in product_words(alg, u, w).items():
        cre, k, ann = split_word(word)
        if not cre and not ann:
            out = out + co * Coefficient.monomial(k, 0)
    return out


def ostar(alpha: EnvElement, beta: EnvElement) -> ZhuElement:
    """Contraction into A_0: zero on degree mismatch, otherwise [alpha beta]_0."""
    if alpha.algebra.kind != beta.algebra.kind:
        raise AlgebraMismatch(f"{alpha.algebra.kind} vs {beta.algebra.kind}")
    total = ZERO
    for u, p in alpha.terms.items():
        for w, q in beta.terms.items():
            k = _ostar_words(alpha.algebra, u, w)
            if k:
                total = total + p * q * k
    return ZhuElement(0, alpha.algebra, {((), ()): total})


def ostar_scalar(alpha: EnvElement, beta: EnvElement) -> Coefficient:
    return ostar(alpha, beta).coefficient(((), ()))


def star(a: MtaElement, b: MtaElement) -> MtaElement:
    _same(a, b)
    alg = a.algebra
    by_cre: dict[tuple, list] = {}
    for (cre, v), q in b.terms.items():
        by_cre.setdefault(cre, []).append((v, q))
    out: dict = {}
    for (u, ann), p in a.terms.items():
        for cre, rest in by_cre.items():
            k = _ostar_words(alg, ann, cre)
            if not k:
                continue
            pk = p * k
            for v, q in rest:
                _accumulate(out, (u, v), pk * q)
    return MtaElement._wrap(alg, out)


def epsilon(alg: AlgebraSpec, r: Partition, s: Partition, coeff: Coefficient | int = 1) -> MtaElement:
    """The basis element with creation word indexed by r and annihilation word by s."""
    return MtaElement(alg, {(creation_word(r), annihilation_word(s)): Coefficient.coerce(coeff)})


def matrix_unit(alg: AlgebraSpec, r: Partition, s: Partition) -> MtaElement:
    """epsilon(r, s) / ||s||; these multiply like matrix units in the Heisenberg case."""
    return epsilon(alg, r, s, Coefficient.const(Fraction(1, norm_coefficient(s))))


def mta_basis(alg: AlgebraSpec, d1: int, d2: int) -> list[MtaElement]:
    """C[x]-basis of the (d1, -d2) component, pairs in lexicographic partition order."""
    if d1 < 0 or d2 < 0:
        raise BidegreeError("degrees are given as non-negative sizes")
    return [epsilon(alg, r, s) for r in partitions(d1) for s in partitions(d2)]


def basis_keys(d1: int, d2: int) -> list[Key]:
    return [(creation_word(r), annihilation_word(s)) for r in partitions(d1) for s in partitions(d2)]


# ---------------------------------------------------------------------------
# identity elements


@dataclass
class IdentityResult:
    algebra: str
    degree: int
    identity: MtaElement | None
    solution: LinearSolution
    basis: list[Key] = field(default_factory=list)

    @property
    def status(self) -> str:
        if self.identity is not None:
            return "found"
        return "inconsistent" if self.solution.status == "inconsistent" else "not-polynomial"

    def certificate(self) -> dict:
        if self.identity is not None:
            return {}
        if self.solution.status == "inconsistent":
            return {"reason": "inconsistent",
                    "witness_rhs": str(self.solution.witness_rhs),
                    "witness_rows": len(self.solution.witness or {})}
        obs = self.solution.obstructions()
        return {"reason": "no polynomial solution",
                "obstructions": [{"unknown": _key_json(self.basis[i], self.algebra),
                                  "numerator": str(n), "denominator": str(d)} for i, n, d in obs],
                "denominator": str(obs[0][2]) if obs else None}

    def to_json(self) -> dict:
        return {"algebra": self.algebra, "degree": self.degree, "status": self.status,
                "identity": self.identity.to_json() if self.identity is not None else None,
                "certificate": self.certificate()}


def _key_json(key: Key, kind: str) -> dict:
    sym = "H" if kind == "heisenberg" else "L"
    return {"creation": [f"{sym}({n})" for n in key[0]], "annihilation": [f"{sym}({n})" for n in key[1]]}


def find_identity(alg: AlgebraSpec, d: int) -> IdentityResult:
    """Solve e*b = b = b*e over the C[x]-basis of the d-th algebra, then check polynomiality."""
    keys = basis_keys(d, d)
    index = {k: i for i, k in enumerate(keys)}
    n = len(keys)
    # contraction table between annihilation parts and creation parts
    anns = [annihilation_word(s) for s in partitions(d)]
    cres = [creation_word(r) for r in partitions(d)]
    table = {(a, c): _ostar_words(alg, a, c) for a in anns for c in cres}
    rows_by_eq: dict[tuple, dict[int, Coefficient]] = {}
    rhs_by_eq: dict[tuple, Coefficient] = {}
    for kb, (bc, ba) in enumerate(keys):
        # left: sum_j e_j (B_j * b) = b ; B_j * b = table[ann_j, bc] (cre_j, ba)
        for j, (jc, ja) in enumerate(keys):
            t = table[(ja, bc)]
            if t:
                row = rows_by_eq.setdefault(("L", kb, index[(jc, ba)]), {})
                row[j] = row.get(j, ZERO) + t
            # right: sum_j e_j (b * B_j) = b ; b * B_j = table[ba, jc] (bc, ja)
            t = table[(ba, jc)]
            if t:
                row = rows_by_eq.setdefault(("R", kb, index[(bc, ja)]), {})
                row[j] = row.get(j, ZERO) + t
        rhs_by_eq[("L", kb, kb)] = ONE
        rhs_by_eq[("R", kb, kb)] = ONE
        rows_by_eq.setdefault(("L", kb, kb), {})
        rows_by_eq.setdefault(("R", kb, kb), {})
    eqs = sorted(rows_by_eq)
    rows = [rows_by_eq[e] for e in eqs]
    rhs = [rhs_by_eq.get(e, ZERO) for e in eqs]
    sol = solve_sparse(rows, rhs, n)
    identity = None
    if sol.polynomial:
        identity = MtaElement(alg, {keys[j]: v for j, v in enumerate(sol.values()) if v})
    return IdentityResult(alg.kind, d, identity, sol, keys)


# ---------------------------------------------------------------------------
# bimodule structure


def left_act(u: EnvElement, a: MtaElement) -> MtaElement:
    """u . a: multiply into the creation factor; words keeping annihilation modes die."""
    _same(u, a)
    alg = a.algebra
    out: dict = {}
    for (cre, ann), p in a.terms.items():
        for w, q in u.terms.items():
            for word, co in product_words(alg, w, cre).items():
                c2, k, a2 = split_word(word)
                if a2:
                    continue
                mid = co * Coefficient.monomial(k, 0) if k else co
                _accumulate(out, (c2, ann), p * q * mid)
    return MtaElement._wrap(alg, out)


def right_act(a: MtaElement, u: EnvElement) -> MtaElement:
    """a . u: multiply into the annihilation factor; words keeping creation modes die."""
    _same(a, u)
    alg = a.algebra
    out: dict = {}
    for (cre, ann), p in a.terms.items():
        for w, q in u.terms.items():
            for word, co in product_words(alg, ann, w).items():
                c2, k, a2 = split_word(word)
                if c2:
                    continue
                mid = co * Coefficient.monomial(k, 0) if k else co
                _accumulate(out, (cre, a2), p * q * mid)
    return MtaElement._wrap(alg, out)


def identities_up_to(alg: AlgebraSpec, top: int) -> dict[int, IdentityResult]:
    return {d: find_identity(alg, d) for d in range(top + 1)}


def verify_strong_identity(alg: AlgebraSpec, d_max: int, n_window: int) -> dict:
    """Check J_n I_d = I_{d-n} J_n and I_n * a = a = a * I_m on bases."""
    top = d_max + n_window
    found = identities_up_to(alg, top)
    missing = [d for d, res in found.items() if res.identity is None]
    report = {"algebra": alg.kind, "d_max": d_max, "n_window": n_window,
              "identity_levels": sorted(found), "strong_identity_checks": [], "unit_checks": []}
    if missing:
        report.update(ok=False, stage="identity", missing_levels=missing,
                      certificate=found[missing[0]].certificate())
        return report
    ident = {d: res.identity for d, res in found.items()}
    ok = True
    for n in range(-n_window, n_window + 1):
        for d in range(max(n, 0), d_max + 1):
            j = EnvElement.mode(alg, n)
            lhs = left_act(j, ident[d])
            rhs = right_act(ident[d - n], j)
            good = lhs == rhs
            ok &= good
            report["strong_identity_checks"].append({"n": n, "d": d, "ok": good})
    for n in range(d_max + 1):
        for m in range(d_max + 1):
            good = all(star(ident[n], b) == b and star(b, ident[m]) == b for b in mta_basis(alg, n, m))
            ok &= good
            report["unit_checks"].append({"n": n, "m": m, "ok": good})
    report["ok"] = ok
    report["stage"] = "equations"
    return report


# ---------------------------------------------------------------------------
# the map to the Zhu algebra and the splitting


def mu(a: MtaElement, d: int) -> ZhuElement:
    """u (x) m (x) v  ->  [u m v]_d."""
    if any(bd != (d, -d) for bd in a.bidegrees()):
        raise BidegreeError(f"mu_{d} needs bidegree ({d}, {-d}), got {sorted(a.bidegrees())}")
    alg = a.algebra
    terms: dict = {}
    for (u, v), co in a.terms.items():
        for (i, j), q in co.items():
            for word, c2 in product_words(alg, u + (0,) * i, v).items():
                _accumulate(terms, word, c2 * Coefficient.monomial(0, j, q))
    return zhu_class(EnvElement._wrap(alg, terms), d)


def _span_equal(rows_a, rows_b, ncols) -> bool:
    ra, rb = rank(rows_a, ncols), rank(rows_b, ncols)
    return ra == rb == rank(list(rows_a) + list(rows_b), ncols)


def verify_splitting(alg: AlgebraSpec, d: int) -> dict:
    """Exactness of A_d-mode algebra -> A_d -> A_{d-1}, and the ring splitting when a unit exists."""
    if d < 1:
        raise ValueError("splitting needs d >= 1")
    basis = zhu_basis(d)
    ncols = len(basis)
    mta_b = mta_basis(alg, d, d)
    images = [mu(b, d) for b in mta_b]
    image_rows = [coordinates(im, basis) for im in images]

    lower = zhu_basis(d - 1)
    lower_index = {k: i for i, k in enumerate(lower)}
    # pi_d as a matrix: rows indexed by lower basis, columns by basis
    pi_rows: list[dict[int, Coefficient]] = [dict() for _ in lower]
    for col, key in enumerate(basis):
        img = pi_map(ZhuElement.basis_element(alg, d, key))
        for k, v in img.terms.items():
            pi_rows[lower_index[k]][col] = v
    kernel = nullspace(pi_rows, ncols)
    kernel_rows = [{i: v for i, v in enumerate(vec) if v} for vec in kernel]

    checks: dict[str, bool] = {}
    checks["mu_injective"] = rank(image_rows, ncols) == len(mta_b)
    checks["image_equals_kernel"] = _span_equal(image_rows, kernel_rows, ncols)
    mult = True
    for a in mta_b:
        for b in mta_b:
            if mu(star(a, b), d) != zhu_multiply(mu(a, d), mu(b, d)):
                mult = False
    checks["mu_multiplicative"] = mult

    report = {"algebra": alg.kind, "d": d, "rank_A_d": ncols, "rank_mta_d": len(mta_b),
              "kernel_rank": len(kernel_rows), "checks": checks}
    ident = find_identity(alg, d)
    if ident.identity is None:
        report["splitting"] = {"attempted": False, "reason": "no identity", "certificate": ident.certificate()}
        report["ok"] = all(checks.values())
        return report

    e = mu(ident.identity, d)
    one = ZhuElement.one(alg, d)
    elems = [ZhuElement.basis_element(alg, d, k) for k in basis]
    split: dict[str, bool] = {}
    split["idempotent"] = zhu_multiply(e, e) == e
    split["central"] = all(zhu_multiply(e, b) == zhu_multiply(b, e) for b in elems)

    # A_d e  ->  mode algebra: express b e through the image of mu
    index_rows = image_rows
    back_ok = True
    for b in elems:
        be = zhu_multiply(b, e)
        target = coordinates(be, basis)
        pre = _preimage(index_rows, target, ncols, len(mta_b))
        if pre is None:
            back_ok = False
            continue
        a = MtaElement(alg, {})
        for j, v in pre.items():
            a = a + mta_b[j].scale(v)
        back_ok &= mu(a, d) == be
    split["A_d_e_in_image"] = back_ok

    # A_d (1 - e)  <->  A_{d-1}
    comp = one - e
    lower_elems = [ZhuElement.basis_element(alg, d - 1, k) for k in lower]
    section = [zhu_multiply(lift(a, d), comp) for a in lower_elems]
    split["section_right_inverse"] = all(pi_map(s) == a for s, a in zip(section, lower_elems))
    sec_mult = True
    for i, a in enumerate(lower_elems):
        for j, b in enumerate(lower_elems):
            ab = zhu_multiply(a, b)
            s_ab = zhu_multiply(lift(ab, d), comp)
            if s_ab != zhu_multiply(section[i], section[j]):
                sec_mult = False
    split["section_multiplicative"] = sec_mult
    split["complement_recovered"] = all(
        zhu_multiply(lift(pi_map(zhu_multiply(b, comp)), d), comp) == zhu_multiply(b, comp) for b in elems)
    report["splitting"] = {"attempted": True, "identity": ident.identity.to_json(),
                           "central_idempotent": e.to_json(), "checks": split}
    report["ok"] = all(checks.values()) and all(split.values())
    return report


def _preimage(rows, target, ncols, nvars):
    """Solve sum_j y_j rows[j] = target for polynomial y."""
    eq_rows = [dict() for _ in range(ncols)]
    for j, row in enumerate(rows):
        for col, v in row.items():
            eq_rows[col][j] = v
    rhs = [target.get(col, ZERO) for col in range(ncols)]
    sol = solve_sparse(eq_rows, rhs, nvars)
    if not sol.polynomial:
        return None
    return {j: v for j, v in enumerate(sol.values()) if v}


def verify_heisenberg_table(d: int) -> dict:
    """Every basis product in degree d against ||r|| delta_{s,r}, plus matrix-unit relations."""
    from .liealg import HEISENBERG as alg

    parts = partitions(d)
    failures = []
    for r1 in parts:
        for s in parts:
            left = epsilon(alg, r1, s)
            for r in parts:
                for s1 in parts:
                    got = star(left, epsilon(alg, r, s1))
                    want = epsilon(alg, r1, s1, norm_coefficient(r) if s == r else 0)
                    if got != want:
                        failures.append({"left": [list(r1), list(s)], "right": [list(r), list(s1)]})
                    e = star(matrix_unit(alg, r1, s), matrix_unit(alg, r, s1))
                    if e != (matrix_unit(alg, r1, s1) if s == r else MtaElement(alg)):
                        failures.append({"units": [list(r1), list(s), list(r), list(s1)]})
    return {"algebra": "heisenberg", "d": d, "basis_size": len(parts) ** 2,
            "ok": not failures, "failures": failures[:20]}
