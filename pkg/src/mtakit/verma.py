"""Generalized Verma modules induced from a one-dimensional degree-zero space.

The degree-zero space is spanned by w0 with the zero mode acting by a scalar
(the Heisenberg charge lambda or the Virasoro weight h), either a rational
number or the formal variable x.  Degree d has basis the creation words of
the partitions of d applied to w0.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .coeffs import C, ZERO, X, Coefficient, nullspace
from .liealg import AlgebraSpec, WindowExceeded
from .mta import MtaElement, _ostar_words
from .partitions import creation_word, partitions
from .pbw import AlgebraMismatch, EnvElement, _accumulate, creation_weight, product_words, split_word

Word = tuple[int, ...]


class DegreeMismatch(ValueError):
    pass


def _param(value, formal: Coefficient) -> Coefficient:
    if value is None or value == "formal":
        return formal
    if isinstance(value, Coefficient):
        return value
    return Coefficient.const(Fraction(value))


class VermaModule:
    """The induced module; ``eigenvalue`` and ``central_charge`` accept a rational, "formal" or None."""

    def __init__(self, algebra: AlgebraSpec, eigenvalue=None, central_charge=None):
        self.algebra = algebra
        self.eigenvalue = _param(eigenvalue, X)
        if algebra.is_heisenberg:
            self.central_charge = None
        else:
            self.central_charge = _param(central_charge, C)
        self._bases: dict[int, tuple[Word, ...]] = {}

    def basis(self, d: int) -> tuple[Word, ...]:
        if d < 0:
            return ()
        hit = self._bases.get(d)
        if hit is None:
            hit = self._bases[d] = tuple(creation_word(r) for r in partitions(d))
        return hit

    def dimension(self, d: int) -> int:
        return len(self.basis(d))

    def evaluate(self, co: Coefficient, zero_modes: int = 0) -> Coefficient:
        """Coefficient with the zero-mode power applied to w0 and c specialized."""
        out = co
        if self.central_charge is not None and self.central_charge != C:
            out = out.subs(c=self.central_charge)
        if zero_modes:
            out = out * self.eigenvalue ** zero_modes
        return out

    def vector(self, terms: Mapping[Word, Coefficient | int]) -> "VermaVector":
        return VermaVector(self, terms)

    def basis_vector(self, word: Word) -> "VermaVector":
        return VermaVector(self, {word: 1})

    def highest(self) -> "VermaVector":
        return VermaVector(self, {(): 1})

    def describe(self) -> dict:
        out = {"algebra": self.algebra.kind}
        key = "lambda" if self.algebra.is_heisenberg else "h"
        out[key] = str(self.eigenvalue)
        if self.central_charge is not None:
            out["c"] = str(self.central_charge)
        return out


class VermaVector:
    __slots__ = ("module", "terms")

    def __init__(self, module: VermaModule, terms: Mapping[Word, Coefficient | int] | None = None):
        self.module = module
        clean = {}
        for w, co in (terms or {}).items():
            w = tuple(w)
            if any(n >= 0 for n in w) or list(w) != sorted(w):
                raise ValueError(f"{w} is not a creation basis word")
            co = Coefficient.coerce(co)
            if co:
                clean[w] = co
        self.terms = clean

    @classmethod
    def _wrap(cls, module, terms):
        obj = cls.__new__(cls)
        obj.module = module
        obj.terms = terms
        return obj

    def degrees(self) -> set[int]:
        return {creation_weight(w) for w in self.terms}

    def component(self, d: int) -> list[Coefficient]:
        return [self.terms.get(w, ZERO) for w in self.module.basis(d)]

    def __add__(self, other: "VermaVector") -> "VermaVector":
        out = dict(self.terms)
        for w, co in other.terms.items():
            _accumulate(out, w, co)
        return VermaVector._wrap(self.module, out)

    def __neg__(self):
        return VermaVector._wrap(self.module, {w: -co for w, co in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, k) -> "VermaVector":
        k = Coefficient.coerce(k)
        return VermaVector(self.module, {w: co * k for w, co in self.terms.items()})

    def __eq__(self, other):
        if not isinstance(other, VermaVector):
            return NotImplemented
        return self.terms == other.terms

    def __bool__(self):
        return bool(self.terms)

    def __str__(self):
        if not self.terms:
            return "0"
        lab = self.module.algebra.mode_label
        return " + ".join(f"({co})*{''.join(lab(n) for n in w)}w0"
                          for w, co in sorted(self.terms.items(), key=lambda t: (len(t[0]), t[0])))

    def __repr__(self):
        return f"VermaVector({self})"

    def to_json(self) -> dict:
        lab = self.module.algebra.mode_label
        return {"terms": [{"word": [lab(n) for n in w], "coeff": co.to_json()}
                          for w, co in sorted(self.terms.items(), key=lambda t: (len(t[0]), t[0]))]}


def act(u: EnvElement, v: VermaVector) -> VermaVector:
    """u . v: normal order each product; annihilation modes kill w0, zero modes give the eigenvalue."""
    m = v.module
    if u.algebra.kind != m.algebra.kind:
        raise AlgebraMismatch(f"{u.algebra.kind} vs {m.algebra.kind}")
    out: dict = {}
    for w, p in u.terms.items():
        for b, q in v.terms.items():
            for word, co in product_words(m.algebra, w, b).items():
                cre, k, ann = split_word(word)
                if ann:
                    continue
                _accumulate(out, cre, m.evaluate(p * q * co, k))
    return VermaVector._wrap(m, out)


def mta_act(a: MtaElement, v: VermaVector) -> VermaVector:
    """Action of the degree-d mode transition algebra on the degree-d component."""
    m = v.module
    if a.algebra.kind != m.algebra.kind:
        raise AlgebraMismatch(f"{a.algebra.kind} vs {m.algebra.kind}")
    bideg = a.bidegrees()
    vdeg = v.degrees()
    if len(bideg) > 1 or len(vdeg) > 1:
        raise DegreeMismatch("mta_act needs homogeneous data")
    if bideg and vdeg:
        (d1, d2), = bideg
        (d,) = vdeg
        if d1 != d or -d2 != d:
            raise DegreeMismatch(f"bidegree ({d1}, {d2}) cannot act on degree {d}")
    out: dict = {}
    for (cre, ann), p in a.terms.items():
        for b, q in v.terms.items():
            k = _ostar_words(m.algebra, ann, b)
            if not k:
                continue
            mid = p * k
            if m.eigenvalue != X:
                mid = mid.subs(x=m.eigenvalue)
            _accumulate(out, cre, m.evaluate(mid) * q)
    return VermaVector._wrap(m, out)


@dataclass
class SingularReport:
    module: VermaModule
    degree: int
    kernel: list[VermaVector]

    @property
    def kernel_dim(self) -> int:
        return len(self.kernel)

    def to_json(self) -> dict:
        out = self.module.describe()
        out.update(degree=self.degree, kernel_dim=self.kernel_dim,
                   kernel_basis=[v.to_json() for v in self.kernel])
        return out


def singular_vectors(m: VermaModule, d: int) -> SingularReport:
    """Vectors of degree d killed by every positive mode 1..d, as a polynomial kernel basis."""
    if d < 1:
        raise ValueError("degree must be positive")
    window = m.algebra.window
    if window is not None and d > window.max_index:
        raise WindowExceeded(f"degree {d} outside window {window.max_index}")
    basis = m.basis(d)
    rows: list[dict[int, Coefficient]] = []
    for n in range(1, d + 1):
        mode = EnvElement.mode(m.algebra, n)
        target = {w: i for i, w in enumerate(m.basis(d - n))}
        block = [dict() for _ in target]
        for j, b in enumerate(basis):
            image = act(mode, m.basis_vector(b))
            for w, co in image.terms.items():
                block[target[w]][j] = co
        rows.extend(block)
    kernel = nullspace(rows, len(basis))
    vectors = [VermaVector(m, {basis[j]: co for j, co in enumerate(vec) if co}) for vec in kernel]
    return SingularReport(m, d, vectors)
