"""Exact coefficients in Q[x, c] and linear systems over Q(x, c).

``x`` is the generator of the level-zero Zhu algebra (or a formal module
eigenvalue) and ``c`` is the Virasoro central charge.  Nothing here ever
touches a float.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterable, Mapping, Sequence, Union

import sympy

Scalar = Union[int, Fraction]
Monomial = tuple[int, int]  # (exponent of x, exponent of c)


class Coefficient:
    """Immutable sparse polynomial in x and c with rational coefficients."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Scalar] | None = None):
        clean: dict[Monomial, Fraction] = {}
        if terms:
            for mono, q in terms.items():
                if q:
                    i, j = mono
                    if i < 0 or j < 0:
                        raise ValueError(f"negative exponent in {mono}")
                    clean[(int(i), int(j))] = Fraction(q)
        self._terms = clean
        self._hash = None

    @classmethod
    def _wrap(cls, terms: dict[Monomial, Fraction]) -> "Coefficient":
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def const(cls, q: Scalar) -> "Coefficient":
        return cls._wrap({(0, 0): Fraction(q)} if q else {})

    @classmethod
    def monomial(cls, i: int = 0, j: int = 0, q: Scalar = 1) -> "Coefficient":
        return cls({(i, j): q})

    @classmethod
    def coerce(cls, value: "Coefficient | Scalar") -> "Coefficient":
        if isinstance(value, Coefficient):
            return value
        if isinstance(value, (int, Fraction)):
            return cls.const(value)
        raise TypeError(f"cannot coerce {type(value).__name__} to Coefficient")

    # -- inspection -------------------------------------------------------

    @property
    def terms(self) -> dict[Monomial, Fraction]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_constant(self) -> bool:
        return not self._terms or set(self._terms) == {(0, 0)}

    def constant(self) -> Fraction:
        """Rational value of a constant coefficient."""
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self._terms.get((0, 0), Fraction(0))

    def degree_x(self) -> int:
        return max((i for i, _ in self._terms), default=-1)

    def leading(self) -> tuple[Monomial, Fraction]:
        mono = max(self._terms)
        return mono, self._terms[mono]

    def content(self) -> Fraction:
        """Positive rational gcd of the coefficients, signed like the leading one."""
        if not self._terms:
            return Fraction(0)
        nums = 0
        dens = 1
        for q in self._terms.values():
            nums = gcd(nums, q.numerator)
            dens = dens * q.denominator // gcd(dens, q.denominator)
        g = Fraction(nums, dens)
        return g if self.leading()[1] > 0 else -g

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, Coefficient):
            if isinstance(other, (int, Fraction)):
                other = Coefficient.const(other)
            else:
                return NotImplemented
        if not other._terms:
            return self
        if not self._terms:
            return other
        out = dict(self._terms)
        for mono, q in other._terms.items():
            s = out.get(mono, 0) + q
            if s:
                out[mono] = s
            else:
                out.pop(mono, None)
        return Coefficient._wrap(out)

    __radd__ = __add__

    def __neg__(self):
        return Coefficient._wrap({m: -q for m, q in self._terms.items()})

    def __sub__(self, other):
        if not isinstance(other, Coefficient):
            if isinstance(other, (int, Fraction)):
                other = Coefficient.const(other)
            else:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Coefficient):
            if isinstance(other, (int, Fraction)):
                if not other:
                    return ZERO
                f = Fraction(other)
                return Coefficient._wrap({m: q * f for m, q in self._terms.items()})
            return NotImplemented
        a, b = self._terms, other._terms
        if not a or not b:
            return ZERO
        if len(b) == 1 and (0, 0) in b:
            f = b[(0, 0)]
            return Coefficient._wrap({m: q * f for m, q in a.items()})
        if len(a) == 1 and (0, 0) in a:
            f = a[(0, 0)]
            return Coefficient._wrap({m: q * f for m, q in b.items()})
        out: dict[Monomial, Fraction] = {}
        for (i1, j1), q1 in a.items():
            for (i2, j2), q2 in b.items():
                mono = (i1 + i2, j1 + j2)
                s = out.get(mono, 0) + q1 * q2
                if s:
                    out[mono] = s
                else:
                    out.pop(mono, None)
        return Coefficient._wrap(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                raise ZeroDivisionError("division by zero")
            return self * (1 / Fraction(other))
        if isinstance(other, Coefficient):
            quotient, remainder = divmod(self, other)
            if remainder:
                raise ValueError(f"{other} does not divide {self}")
            return quotient
        return NotImplemented

    def __divmod__(self, other: "Coefficient"):
        """Multivariate division by a single divisor (lex order, x before c).

        The remainder is zero exactly when ``other`` divides ``self``.
        """
        if not other:
            raise ZeroDivisionError("division by zero polynomial")
        (li, lj), lq = other.leading()
        quotient: dict[Monomial, Fraction] = {}
        rem: dict[Monomial, Fraction] = {}
        work = Coefficient._wrap(dict(self._terms))
        while work:
            (i, j), q = work.leading()
            if i >= li and j >= lj:
                t = Coefficient._wrap({(i - li, j - lj): q / lq})
                quotient[(i - li, j - lj)] = quotient.get((i - li, j - lj), 0) + q / lq
                work = work - t * other
            else:
                rem[(i, j)] = q
                work = Coefficient._wrap({m: v for m, v in work._terms.items() if m != (i, j)})
        return Coefficient(quotient), Coefficient(rem)

    def divides(self, other: "Coefficient") -> bool:
        return not divmod(other, self)[1]

    # -- evaluation -------------------------------------------------------

    def subs(self, x: "Coefficient | Scalar | None" = None,
             c: "Coefficient | Scalar | None" = None) -> "Coefficient":
        """Substitute values (or other coefficients) for x and/or c."""
        if x is None and c is None:
            return self
        xs = Coefficient.coerce(x) if x is not None else X
        cs = Coefficient.coerce(c) if c is not None else C
        out = ZERO
        for (i, j), q in self._terms.items():
            out = out + (xs ** i) * (cs ** j) * q
        return out

    # -- comparison / hashing ----------------------------------------------

    def __eq__(self, other):
        if isinstance(other, Coefficient):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self._terms == ({(0, 0): Fraction(other)} if other else {})
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # -- display / serialization --------------------------------------------

    def sorted_terms(self) -> list[tuple[Monomial, Fraction]]:
        return sorted(self._terms.items())

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for (i, j), q in sorted(self._terms.items(), reverse=True):
            factors = []
            if i:
                factors.append("x" if i == 1 else f"x^{i}")
            if j:
                factors.append("c" if j == 1 else f"c^{j}")
            mag = abs(q)
            if factors:
                body = "*".join(factors)
                if mag != 1:
                    body = f"{mag}*{body}"
            else:
                body = str(mag)
            parts.append(("-" if q < 0 else "+", body))
        sign, body = parts[0]
        text = ("-" if sign == "-" else "") + body
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self):
        return f"Coefficient({self})"

    def to_json(self) -> dict:
        return {"terms": [{"x": i, "c": j, "num": str(q.numerator), "den": str(q.denominator)}
                          for (i, j), q in self.sorted_terms()]}

    @classmethod
    def from_json(cls, data: Mapping) -> "Coefficient":
        return cls({(int(t["x"]), int(t["c"])): Fraction(int(t["num"]), int(t["den"]))
                    for t in data["terms"]})

    def to_sympy(self):
        xs, cs = sympy.symbols("x c")
        return sum((sympy.Rational(q.numerator, q.denominator) * xs ** i * cs ** j
                    for (i, j), q in self._terms.items()), sympy.Integer(0))

    @classmethod
    def from_sympy(cls, expr) -> "Coefficient":
        xs, cs = sympy.symbols("x c")
        poly = sympy.Poly(sympy.expand(expr), xs, cs)
        return cls({mono: Fraction(int(q.p), int(q.q)) for mono, q in poly.terms()})


ZERO = Coefficient._wrap({})
ONE = Coefficient.const(1)
X = Coefficient.monomial(1, 0)
C = Coefficient.monomial(0, 1)


def poly_arith(a: Coefficient, b: Coefficient, op: str) -> Coefficient:
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")


def reduced_fraction(num: Coefficient, den: Coefficient) -> tuple[Coefficient, Coefficient]:
    """Cancel the polynomial gcd of num/den, scaling so the numerator is primitive."""
    if not num:
        return ZERO, ONE
    n, d = sympy.fraction(sympy.cancel(num.to_sympy() / den.to_sympy()))
    n, d = Coefficient.from_sympy(n), Coefficient.from_sympy(d)
    g = n.content()
    return n / g, d / g


# ---------------------------------------------------------------------------
# Linear systems


class DimensionMismatch(ValueError):
    pass


SparseRow = dict[int, Coefficient]


@dataclass
class LinearSolution:
    """Outcome of :func:`solve_linear_system`.

    ``status`` is one of ``"polynomial"``, ``"rational"`` or ``"inconsistent"``.
    For solvable systems ``numerators[i] / denominators[i]`` is the value of
    unknown ``i`` (free unknowns are set to zero).  ``witness`` maps original
    row indices to multipliers whose combination reads ``0 = witness_rhs``.
    """

    status: str
    numerators: list[Coefficient] = field(default_factory=list)
    denominators: list[Coefficient] = field(default_factory=list)
    free_columns: list[int] = field(default_factory=list)
    witness: dict[int, Coefficient] | None = None
    witness_rhs: Coefficient | None = None

    @property
    def consistent(self) -> bool:
        return self.status != "inconsistent"

    @property
    def polynomial(self) -> bool:
        return self.status == "polynomial"

    def values(self) -> list[Coefficient]:
        """Polynomial solution values; raises if the solution is not polynomial."""
        if self.status != "polynomial":
            raise ValueError(f"solution is {self.status}")
        return [n / d for n, d in zip(self.numerators, self.denominators)]

    def obstructions(self) -> list[tuple[int, Coefficient, Coefficient]]:
        """(unknown, reduced numerator, reduced denominator) for non-polynomial entries."""
        out = []
        for i, (n, d) in enumerate(zip(self.numerators, self.denominators)):
            if n and not d.divides(n):
                rn, rd = reduced_fraction(n, d)
                out.append((i, rn, rd))
        return out


_RING = None


def _ring():
    global _RING
    if _RING is None:
        from sympy.polys.domains import QQ
        from sympy.polys.rings import ring
        _RING = ring("x,c", QQ)[0]
    return _RING


def _to_ring(co: Coefficient):
    R = _ring()
    return R.from_dict({k: R.domain.convert(v) for k, v in co._terms.items()})


def _from_ring(p) -> Coefficient:
    return Coefficient({k: Fraction(int(v.numerator), int(v.denominator)) for k, v in p.items()})


def _poly_gcd(values: Iterable[Coefficient]) -> Coefficient | None:
    """Non-constant gcd of the given polynomials, or None when it is a unit."""
    g = None
    for v in values:
        if v.is_constant():
            return None
        g = _to_ring(v) if g is None else g.gcd(_to_ring(v))
        if g.is_ground:
            return None
    return None if g is None else _from_ring(g)


def _strip_gcd(row: SparseRow, combo: SparseRow | None):
    vals = list(row.values()) + (list(combo.values()) if combo else [])
    g = _poly_gcd(vals)
    if g is None:
        return row, combo
    gr = _to_ring(g)
    row = {k: _from_ring(_to_ring(v).exquo(gr)) for k, v in row.items()}
    if combo is not None:
        combo = {k: _from_ring(_to_ring(v).exquo(gr)) for k, v in combo.items()}
    return row, combo


def _normalize(row: SparseRow, combo: SparseRow | None):
    row, combo = _strip_gcd(row, combo)
    g = None
    for v in row.values():
        cg = v.content()
        g = abs(cg) if g is None else Fraction(gcd(g.numerator, cg.numerator),
                                                 g.denominator * cg.denominator // gcd(g.denominator, cg.denominator))
    if g and g != 1:
        inv = 1 / g
        row = {k: v * inv for k, v in row.items()}
        if combo is not None:
            combo = {k: v * inv for k, v in combo.items()}
    return row, combo


def _combine(a: Coefficient, r: SparseRow, b: Coefficient, p: SparseRow) -> SparseRow:
    """Return a*r - b*p, dropping zeros."""
    out: SparseRow = {}
    for k, v in r.items():
        out[k] = a * v
    for k, v in p.items():
        s = out.get(k, ZERO) - b * v
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return {k: v for k, v in out.items() if v}


def _pick_pivot(row: SparseRow, rhs_col: int) -> int:
    def cost(k):
        v = row[k]
        return (0 if v.is_constant() else 1, len(v._terms), k)
    return min((k for k in row if k != rhs_col), key=cost)


def _echelon(rows: Sequence[SparseRow], ncols: int, track: bool):
    """Fraction-free Gauss-Jordan elimination on sparse rows.

    Column ``ncols`` holds the right-hand side.  Returns (pivots, bad) where
    ``pivots`` maps column -> (row, combo) and ``bad`` is the first
    inconsistent (row, combo) or None.
    """
    pivots: dict[int, tuple[SparseRow, SparseRow | None]] = {}
    seen: set[frozenset] = set()
    for idx, original in enumerate(rows):
        if not original:
            continue
        key = frozenset(original.items())
        if key in seen and not track:
            continue
        seen.add(key)
        row: SparseRow = dict(original)
        combo: SparseRow | None = {idx: ONE} if track else None
        while True:
            hit = next((k for k in row if k in pivots), None)
            if hit is None:
                break
            prow, pcombo = pivots[hit]
            a, b = prow[hit], row[hit]
            row = _combine(a, row, b, prow)
            if track:
                combo = _combine(a, combo, b, pcombo)
            row, combo = _normalize(row, combo)
        if not row:
            continue
        if set(row) == {ncols}:
            return pivots, (row, combo)
        col = _pick_pivot(row, ncols)
        row, combo = _normalize(row, combo)
        for pc, (prow, pcombo) in list(pivots.items()):
            if col in prow:
                a, b = row[col], prow[col]
                nrow = _combine(a, prow, b, row)
                ncombo = _combine(a, pcombo, b, combo) if track else None
                pivots[pc] = _normalize(nrow, ncombo)
        pivots[col] = (row, combo)
    return pivots, None


def solve_sparse(rows: Sequence[SparseRow], rhs: Sequence[Coefficient], ncols: int) -> LinearSolution:
    """Solve ``rows . y = rhs`` where each row maps column index -> entry."""
    if len(rows) != len(rhs):
        raise DimensionMismatch(f"{len(rows)} rows but {len(rhs)} right-hand sides")
    for row in rows:
        if any(k < 0 or k >= ncols for k in row):
            raise DimensionMismatch("column index out of range")
    aug = []
    for row, b in zip(rows, rhs):
        r = {k: v for k, v in row.items() if v}
        b = Coefficient.coerce(b)
        if b:
            r[ncols] = b
        aug.append(r)
    pivots, bad = _echelon(aug, ncols, track=False)
    if bad is not None:
        _, bad = _echelon(aug, ncols, track=True)
        row, combo = bad
        return LinearSolution("inconsistent", witness=combo, witness_rhs=row[ncols])
    nums = [ZERO] * ncols
    dens = [ONE] * ncols
    for col, (row, _) in pivots.items():
        nums[col] = row.get(ncols, ZERO)
        dens[col] = row[col]
    free = [k for k in range(ncols) if k not in pivots]
    poly = all(not n or d.divides(n) for n, d in zip(nums, dens))
    return LinearSolution("polynomial" if poly else "rational", nums, dens, free)


def solve_linear_system(matrix: Sequence[Sequence[Coefficient | Scalar]],
                        rhs: Sequence[Coefficient | Scalar]) -> LinearSolution:
    """Dense front end to :func:`solve_sparse`."""
    if len(matrix) != len(rhs):
        raise DimensionMismatch(f"{len(matrix)} rows but {len(rhs)} right-hand sides")
    ncols = len(matrix[0]) if matrix else 0
    rows = []
    for r in matrix:
        if len(r) != ncols:
            raise DimensionMismatch("ragged matrix")
        rows.append({j: Coefficient.coerce(v) for j, v in enumerate(r) if v})
    return solve_sparse(rows, [Coefficient.coerce(b) for b in rhs], ncols)


def nullspace(rows: Sequence[SparseRow], ncols: int) -> list[list[Coefficient]]:
    """Polynomial basis of the kernel over Q(x, c) of a sparse matrix."""
    pivots, _ = _echelon([{k: v for k, v in r.items() if v} for r in rows], ncols, track=False)
    basis = []
    for f in range(ncols):
        if f in pivots:
            continue
        involved = [(col, row) for col, (row, _) in pivots.items() if f in row]
        scale = ONE
        for col, row in involved:
            scale = scale * row[col]
        vec = [ZERO] * ncols
        vec[f] = scale
        for col, row in involved:
            vec[col] = -(row[f] * scale / row[col])
        basis.append(_dense(_normalize({i: v for i, v in enumerate(vec) if v}, None)[0], ncols))
    return basis


def _dense(row: SparseRow, n: int) -> list[Coefficient]:
    return [row.get(i, ZERO) for i in range(n)]


def rank(rows: Iterable[SparseRow], ncols: int) -> int:
    pivots, _ = _echelon([{k: v for k, v in r.items() if v} for r in rows], ncols, track=False)
    return len(pivots)
