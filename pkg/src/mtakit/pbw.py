"""Enveloping-algebra elements in PBW normal form.

A word is a tuple of mode indices.  It is canonical when the indices weakly
increase left to right, so creation modes (negative index) come first, zero
modes sit in the middle and annihilation modes (positive index) finish the
word.  Rewriting swaps adjacent out-of-order modes and adds the bracket,
which shortens the word, so it terminates.
"""

from __future__ import annotations

import os
from typing import Iterable, Mapping

from .coeffs import ONE, ZERO, Coefficient
from .liealg import AlgebraSpec, structure

Word = tuple[int, ...]


class AlgebraMismatch(ValueError):
    pass


class TermLimitExceeded(MemoryError):
    """More terms than MTAKIT_MAX_TERMS allows."""


def max_terms() -> int | None:
    raw = os.environ.get("MTAKIT_MAX_TERMS")
    return int(raw) if raw else None


def _check_terms(n: int) -> None:
    cap = max_terms()
    if cap is not None and n > cap:
        raise TermLimitExceeded(f"{n} terms exceeds MTAKIT_MAX_TERMS={cap}")


def is_canonical(word: Word) -> bool:
    return all(word[i] <= word[i + 1] for i in range(len(word) - 1))


def split_word(word: Word) -> tuple[Word, int, Word]:
    """Canonical word -> (creation part, number of zero modes, annihilation part)."""
    i = 0
    while i < len(word) and word[i] < 0:
        i += 1
    j = i
    while j < len(word) and word[j] == 0:
        j += 1
    return word[:i], j - i, word[j:]


def creation_weight(word: Word) -> int:
    return -sum(n for n in word if n < 0)


def annihilation_weight(word: Word) -> int:
    return sum(n for n in word if n > 0)


def word_degree(word: Word) -> int:
    return -sum(word)


def _accumulate(out: dict, word: Word, coeff: Coefficient) -> None:
    s = out.get(word)
    s = coeff if s is None else s + coeff
    if s:
        out[word] = s
    else:
        out.pop(word, None)


_INSERT_CACHE: dict[str, dict[tuple[int, Word], dict[Word, Coefficient]]] = {}


def _insert(kind: str, a: int, w: Word) -> dict[Word, Coefficient]:
    """Normal form of the mode ``a`` placed in front of the canonical word ``w``."""
    cache = _INSERT_CACHE.setdefault(kind, {})
    key = (a, w)
    hit = cache.get(key)
    if hit is not None:
        return hit
    if not w or a <= w[0]:
        result = {(a,) + w: ONE}
    else:
        b, rest = w[0], w[1:]
        result: dict[Word, Coefficient] = {}
        # a b rest = b (a rest) + [a, b] rest
        for word, co in _insert(kind, a, rest).items():
            for word2, co2 in _insert(kind, b, word).items():
                _accumulate(result, word2, co * co2)
        modes, central = structure(kind, a, b)
        for m, k in modes:
            for word, co in _insert(kind, m, rest).items():
                _accumulate(result, word, k * co)
        if central:
            _accumulate(result, rest, central)
    cache[key] = result
    return result


def _product_words(kind: str, u: Word, w: Word) -> dict[Word, Coefficient]:
    """Normal form of canonical ``u`` times canonical ``w``."""
    current: dict[Word, Coefficient] = {w: ONE}
    for a in reversed(u):
        nxt: dict[Word, Coefficient] = {}
        for word, co in current.items():
            for word2, co2 in _insert(kind, a, word).items():
                _accumulate(nxt, word2, co * co2)
        current = nxt
    return current


_PRODUCT_CACHE: dict[tuple[str, Word, Word], dict[Word, Coefficient]] = {}


def product_words(alg: AlgebraSpec, u: Word, w: Word) -> dict[Word, Coefficient]:
    """Normal form of a product of two canonical words (cached; do not mutate)."""
    if not u or not w or u[-1] <= w[0]:
        return {u + w: ONE}
    key = (alg.kind, u, w)
    hit = _PRODUCT_CACHE.get(key)
    if hit is None:
        hit = _PRODUCT_CACHE[key] = _product_words(alg.kind, u, w)
    return hit


def fold(terms: Mapping[Word, Coefficient]) -> dict[tuple[Word, Word], Coefficient]:
    """Collapse the zero modes of each canonical word into a power of x."""
    out: dict[tuple[Word, Word], Coefficient] = {}
    for word, co in terms.items():
        cre, k, ann = split_word(word)
        _accumulate(out, (cre, ann), co * Coefficient.monomial(k, 0) if k else co)
    return out


def unfold(key: tuple[Word, Word], coeff: Coefficient) -> dict[Word, Coefficient]:
    """Inverse of :func:`fold` for one (creation, annihilation) key."""
    cre, ann = key
    out: dict[Word, Coefficient] = {}
    for (i, j), q in coeff.items():
        _accumulate(out, cre + (0,) * i + ann, Coefficient.monomial(0, j, q))
    return out


class EnvElement:
    """Finite Q[x, c]-combination of canonical words in one algebra."""

    __slots__ = ("algebra", "terms")

    def __init__(self, algebra: AlgebraSpec, terms: Mapping[Word, Coefficient] | None = None):
        self.algebra = algebra
        clean: dict[Word, Coefficient] = {}
        for word, co in (terms or {}).items():
            word = tuple(word)
            if not is_canonical(word):
                raise ValueError(f"word {word} is not canonical; use normal_order")
            co = Coefficient.coerce(co)
            if co:
                clean[word] = co
        _check_terms(len(clean))
        self.terms = clean

    @classmethod
    def _wrap(cls, algebra: AlgebraSpec, terms: dict[Word, Coefficient]) -> "EnvElement":
        obj = cls.__new__(cls)
        obj.algebra = algebra
        obj.terms = terms
        _check_terms(len(terms))
        return obj

    @classmethod
    def one(cls, algebra: AlgebraSpec) -> "EnvElement":
        return cls._wrap(algebra, {(): ONE})

    @classmethod
    def zero(cls, algebra: AlgebraSpec) -> "EnvElement":
        return cls._wrap(algebra, {})

    @classmethod
    def mode(cls, algebra: AlgebraSpec, n: int, coeff: Coefficient | int = 1) -> "EnvElement":
        return cls(algebra, {(n,): Coefficient.coerce(coeff)})

    @classmethod
    def word(cls, algebra: AlgebraSpec, word: Iterable[int]) -> "EnvElement":
        return normal_order(algebra, tuple(word))

    def __add__(self, other: "EnvElement") -> "EnvElement":
        _same(self, other)
        out = dict(self.terms)
        for word, co in other.terms.items():
            _accumulate(out, word, co)
        return EnvElement._wrap(self.algebra, out)

    def __neg__(self):
        return EnvElement._wrap(self.algebra, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, k: Coefficient | int) -> "EnvElement":
        k = Coefficient.coerce(k)
        if not k:
            return EnvElement.zero(self.algebra)
        return EnvElement._wrap(self.algebra, {w: c * k for w, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, EnvElement):
            return multiply(self, other)
        if isinstance(other, (Coefficient, int)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (Coefficient, int)):
            return self.scale(other)
        return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, EnvElement):
            return NotImplemented
        return self.algebra.kind == other.algebra.kind and self.terms == other.terms

    def __bool__(self):
        return bool(self.terms)

    def degrees(self) -> set[int]:
        return {word_degree(w) for w in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def degree(self) -> int:
        degs = self.degrees()
        if len(degs) != 1:
            raise ValueError(f"element is not homogeneous (degrees {sorted(degs)})")
        return degs.pop()

    def coefficient(self, word: Iterable[int]) -> Coefficient:
        return self.terms.get(tuple(word), ZERO)

    def sorted_terms(self) -> list[tuple[Word, Coefficient]]:
        return sorted(self.terms.items(), key=lambda t: (len(t[0]), t[0]))

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for word, co in self.sorted_terms():
            label = "".join(self.algebra.mode_label(n) for n in word)
            if not label:
                parts.append(str(co))
            elif co == 1:
                parts.append(label)
            else:
                parts.append(f"({co})*{label}")
        return " + ".join(parts)

    def __repr__(self):
        return f"EnvElement[{self.algebra.kind}]({self})"

    def to_json(self) -> dict:
        return {"algebra": self.algebra.kind,
                "terms": [{"word": [self.algebra.mode_label(n) for n in word], "coeff": co.to_json()}
                          for word, co in self.sorted_terms()]}


def _same(a: EnvElement, b: EnvElement) -> None:
    if a.algebra.kind != b.algebra.kind:
        raise AlgebraMismatch(f"{a.algebra.kind} vs {b.algebra.kind}")


def normal_order(alg: AlgebraSpec, word: Iterable[int]) -> EnvElement:
    """Rewrite an arbitrary product of modes into PBW canonical form."""
    word = tuple(int(n) for n in word)
    alg.check_word(word)
    current: dict[Word, Coefficient] = {(): ONE}
    for a in reversed(word):
        nxt: dict[Word, Coefficient] = {}
        for w, co in current.items():
            for w2, co2 in _insert(alg.kind, a, w).items():
                _accumulate(nxt, w2, co * co2)
        current = nxt
        _check_terms(len(current))
    for w in current:
        alg.check_word(w)
    return EnvElement._wrap(alg, current)


def multiply(a: EnvElement, b: EnvElement) -> EnvElement:
    _same(a, b)
    alg = a.algebra
    out: dict[Word, Coefficient] = {}
    for u, p in a.terms.items():
        for w, q in b.terms.items():
            pq = p * q
            for word, co in product_words(alg, u, w).items():
                _accumulate(out, word, pq * co)
        _check_terms(len(out))
    for w in out:
        alg.check_word(w)
    return EnvElement._wrap(alg, out)


def truncate_left(a: EnvElement, n: int) -> EnvElement:
    """Representative modulo the left ideal generated by degree <= -n elements."""
    if n <= 0:
        raise ValueError("truncation level must be positive")
    return EnvElement._wrap(a.algebra, {w: c for w, c in a.terms.items() if annihilation_weight(w) < n})


def truncate_right(a: EnvElement, n: int) -> EnvElement:
    """Representative modulo the right ideal generated by degree >= n elements."""
    if n <= 0:
        raise ValueError("truncation level must be positive")
    return EnvElement._wrap(a.algebra, {w: c for w, c in a.terms.items() if creation_weight(w) < n})


def theta_env(a: EnvElement) -> EnvElement:
    """Extend the mode anti-involution to an anti-automorphism of the enveloping algebra."""
    sign = -1 if a.algebra.is_heisenberg else 1
    out = EnvElement.zero(a.algebra)
    for word, co in a.terms.items():
        image = tuple(-n for n in reversed(word))
        out = out + normal_order(a.algebra, image).scale(co * (sign ** len(word)))
    return out
