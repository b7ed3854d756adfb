"""Shared oracles that do not go through the package's rewriting engine."""

from __future__ import annotations

from fractions import Fraction

import sympy as sp
from hypothesis import settings

settings.register_profile("default", deadline=None)
settings.load_profile("default")

c_sym, x_sym = sp.symbols("c x")


def naive_bracket(kind, m, n):
    """[m, n] as a list of (coeff, word) with the central element evaluated."""
    if kind == "heisenberg":
        return [(sp.Integer(m), ())] if m + n == 0 and m else []
    out = []
    if m != n:
        out.append((sp.Integer(m - n), (m + n,)))
    if m + n == 0:
        val = sp.Rational(m ** 3 - m, 12) * c_sym
        if val != 0:
            out.append((val, ()))
    return out


def naive_normal_order(kind, word):
    """Bubble sort with brackets until every word is weakly increasing; returns {word: sympy expr}."""
    todo = [(sp.Integer(1), tuple(word))]
    done: dict = {}
    while todo:
        co, w = todo.pop()
        for i in range(len(w) - 1):
            if w[i] > w[i + 1]:
                swapped = w[:i] + (w[i + 1], w[i]) + w[i + 2:]
                todo.append((co, swapped))
                for k, mid in naive_bracket(kind, w[i], w[i + 1]):
                    todo.append((co * k, w[:i] + mid + w[i + 2:]))
                break
        else:
            done[w] = sp.expand(done.get(w, 0) + co)
    return {w: v for w, v in done.items() if v != 0}


def coeff_to_sympy(co):
    return sp.expand(co.to_sympy())


def env_to_sympy(elem):
    return {w: coeff_to_sympy(co) for w, co in elem.terms.items()}


def fock_apply(word, poly, lam=x_sym):
    """Heisenberg modes on C[p_1, p_2, ...]: H_n = n d/dp_n, H_-n = p_n, H_0 = lam."""
    for n in reversed(word):
        if n > 0:
            poly = n * sp.diff(poly, sp.Symbol(f"p{n}"))
        elif n < 0:
            poly = sp.Symbol(f"p{-n}") * poly
        else:
            poly = lam * poly
    return sp.expand(poly)


def fock_apply_element(terms, poly, lam=x_sym):
    return sp.expand(sum((coeff_to_sympy(co) * fock_apply(w, poly, lam) for w, co in terms.items()), sp.Integer(0)))


def frac(q):
    return Fraction(q)


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        terminalreporter.write_line(results[n])
