"""The two graded Lie algebras of modes: Heisenberg H_n and Virasoro L_n.

A mode is identified by its integer index; its degree is minus the index.
The Heisenberg central element is set to 1, the Virasoro one to the formal
central charge ``c``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .coeffs import C, ONE, ZERO, Coefficient

HEISENBERG_KIND = "heisenberg"
VIRASORO_KIND = "virasoro"
KINDS = (HEISENBERG_KIND, VIRASORO_KIND)
_SYMBOLS = {HEISENBERG_KIND: "H", VIRASORO_KIND: "L"}


class WindowExceeded(ArithmeticError):
    """A computation left the declared index/length window."""


@dataclass(frozen=True)
class Window:
    max_index: int
    max_length: int

    def check_word(self, word: tuple[int, ...]) -> None:
        if len(word) > self.max_length:
            raise WindowExceeded(f"word length {len(word)} exceeds {self.max_length}")
        for n in word:
            if abs(n) > self.max_index:
                raise WindowExceeded(f"mode index {n} outside [-{self.max_index}, {self.max_index}]")


@dataclass(frozen=True)
class AlgebraSpec:
    kind: str
    window: Window | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown algebra {self.kind!r}; expected one of {KINDS}")

    @property
    def symbol(self) -> str:
        return _SYMBOLS[self.kind]

    @property
    def central(self) -> Coefficient:
        return ONE if self.kind == HEISENBERG_KIND else C

    @property
    def is_heisenberg(self) -> bool:
        return self.kind == HEISENBERG_KIND

    def with_window(self, max_index: int, max_length: int | None = None) -> "AlgebraSpec":
        return AlgebraSpec(self.kind, Window(max_index, max_length if max_length is not None else 4 * max_index))

    def check_word(self, word: tuple[int, ...]) -> None:
        if self.window is not None:
            self.window.check_word(word)

    def mode_label(self, n: int) -> str:
        return f"{self.symbol}({n})"


HEISENBERG = AlgebraSpec(HEISENBERG_KIND)
VIRASORO = AlgebraSpec(VIRASORO_KIND, Window(32, 32))


def algebra(name: str, window: int | None = None) -> AlgebraSpec:
    name = name.lower()
    if name not in KINDS:
        raise ValueError(f"unknown algebra {name!r}; expected one of {KINDS}")
    spec = HEISENBERG if name == HEISENBERG_KIND else VIRASORO
    if window is not None and name == VIRASORO_KIND:
        spec = spec.with_window(window)
    return spec


@dataclass(frozen=True, order=True)
class Mode:
    index: int

    @property
    def degree(self) -> int:
        return -self.index

    def label(self, alg: AlgebraSpec) -> str:
        return alg.mode_label(self.index)


_MODE_RE = re.compile(r"^\s*([HL])\(\s*(-?\d+)\s*\)\s*$")


def parse_mode(text: str) -> tuple[str, int]:
    """Parse ``"H(-2)"`` / ``"L(3)"`` into (kind, index)."""
    m = _MODE_RE.match(text)
    if not m:
        raise ValueError(f"bad mode label {text!r}")
    kind = HEISENBERG_KIND if m.group(1) == "H" else VIRASORO_KIND
    return kind, int(m.group(2))


def _index(a: Mode | int) -> int:
    return a.index if isinstance(a, Mode) else int(a)


@lru_cache(maxsize=None)
def structure(kind: str, m: int, n: int) -> tuple[tuple[tuple[int, Coefficient], ...], Coefficient]:
    """Raw bracket [m, n] as (mode terms, central scalar)."""
    if kind == HEISENBERG_KIND:
        return (), (Coefficient.const(m) if m + n == 0 and m else ZERO)
    modes = ((m + n, Coefficient.const(m - n)),) if m != n else ()
    central = C * Fraction(m ** 3 - m, 12) if m + n == 0 else ZERO
    return modes, central


class LieElement:
    """Finite combination of modes plus a central scalar."""

    __slots__ = ("modes", "central")

    def __init__(self, modes: dict[int, Coefficient] | None = None, central: Coefficient = ZERO):
        self.modes = {n: Coefficient.coerce(v) for n, v in (modes or {}).items() if v}
        self.central = Coefficient.coerce(central)

    @classmethod
    def mode(cls, n: int, coeff: Coefficient | int = 1) -> "LieElement":
        return cls({n: Coefficient.coerce(coeff)})

    def __add__(self, other: "LieElement") -> "LieElement":
        modes = dict(self.modes)
        for n, v in other.modes.items():
            modes[n] = modes.get(n, ZERO) + v
        return LieElement(modes, self.central + other.central)

    def __neg__(self):
        return LieElement({n: -v for n, v in self.modes.items()}, -self.central)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, k: Coefficient | int) -> "LieElement":
        return LieElement({n: v * k for n, v in self.modes.items()}, self.central * k)

    def is_zero(self) -> bool:
        return not self.modes and not self.central

    def __eq__(self, other):
        if not isinstance(other, LieElement):
            return NotImplemented
        return self.modes == other.modes and self.central == other.central

    def degrees(self) -> set[int]:
        return {-n for n in self.modes}

    def __repr__(self):
        parts = [f"({v})*m{n}" for n, v in sorted(self.modes.items())]
        if self.central:
            parts.append(f"({self.central})*K")
        return "LieElement(" + (" + ".join(parts) or "0") + ")"


def bracket(alg: AlgebraSpec, a: Mode | int, b: Mode | int) -> LieElement:
    """[a, b] in the presented algebra, central part already evaluated."""
    modes, central = structure(alg.kind, _index(a), _index(b))
    return LieElement(dict(modes), central)


def bracket_elements(alg: AlgebraSpec, u: LieElement, v: LieElement) -> LieElement:
    out = LieElement()
    for m, p in u.modes.items():
        for n, q in v.modes.items():
            out = out + bracket(alg, m, n).scale(p * q)
    return out


def theta(alg: AlgebraSpec, a: Mode | int) -> tuple[int, Mode]:
    """The anti-involution on modes: H_n -> -H_{-n}, L_n -> L_{-n}."""
    n = _index(a)
    sign = -1 if alg.is_heisenberg else 1
    return sign, Mode(-n)


def theta_element(alg: AlgebraSpec, u: LieElement) -> LieElement:
    sign = -1 if alg.is_heisenberg else 1
    return LieElement({-n: v * sign for n, v in u.modes.items()}, u.central)
