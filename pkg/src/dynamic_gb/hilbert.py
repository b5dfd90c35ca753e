"""Hilbert series of monomial ideals and the candidate comparator.

Univariate integer polynomials in ``t`` are lists of coefficients indexed by
degree.  The numerator ``N(t)`` of a monomial ideal ``I`` in ``n`` variables
satisfies ``sum_d dim (R/I)_d t^d = N(t) / (1 - t)^n``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import comb, factorial
from typing import Iterable, Sequence

from .polycore import Term, divides, term_div, term_lcm


def _trim(p: list) -> list:
    while p and p[-1] == 0:
        p.pop()
    return p


def _add(p: Sequence[int], q: Sequence[int], sign: int = 1) -> list:
    out = [0] * max(len(p), len(q))
    for i, c in enumerate(p):
        out[i] += c
    for i, c in enumerate(q):
        out[i] += sign * c
    return _trim(out)


def _mul(p: Sequence[int], q: Sequence[int]) -> list:
    if not p or not q:
        return []
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return _trim(out)


def _shift(p: Sequence[int], k: int) -> list:
    return [0] * k + list(p) if p else []


def _one_minus_t_pow(a: int) -> list:
    if a == 0:
        return []
    return [1] + [0] * (a - 1) + [-1]


def minimalize(gens: Iterable[Term]) -> tuple:
    """Minimal generators: drop duplicates and every proper multiple."""
    out: list = []
    for g in sorted(set(gens), key=sum):
        if not any(divides(h, g) for h in out):
            out.append(g)
    return tuple(sorted(out))


class MonomialIdeal:
    """Monomial ideal stored by its minimal generators."""

    __slots__ = ("gens", "n")

    def __init__(self, gens: Iterable[Term], n: int | None = None):
        gens = [tuple(g) for g in gens]
        if n is None:
            if not gens:
                raise ValueError("n is required for the zero ideal")
            n = len(gens[0])
        if any(len(g) != n for g in gens):
            raise ValueError("generator length does not match n")
        self.gens = minimalize(gens)
        self.n = n

    def __repr__(self):
        return f"MonomialIdeal({list(self.gens)}, n={self.n})"

    def __eq__(self, other):
        return isinstance(other, MonomialIdeal) and self.n == other.n and self.gens == other.gens

    def __hash__(self):
        return hash((self.gens, self.n))

    def __contains__(self, t: Term) -> bool:
        return any(divides(g, t) for g in self.gens)

    def plus(self, t: Term) -> "MonomialIdeal":
        return MonomialIdeal(self.gens + (tuple(t),), self.n)

    def colon(self, t: Term) -> "MonomialIdeal":
        return MonomialIdeal([term_div(term_lcm(g, t), t) for g in self.gens], self.n)


def _numerator(gens: tuple, n: int) -> list:
    if not gens:
        return [1]
    nonpure = [g for g in gens if sum(1 for e in g if e) > 1]
    if not nonpure:
        out = [1]
        for g in gens:
            out = _mul(out, _one_minus_t_pow(sum(g)))
        return out
    if len(nonpure) == 1:
        # I = J + <m> with J generated by pure powers
        m = nonpure[0]
        rest = tuple(g for g in gens if g != m)
        colon = minimalize(term_div(term_lcm(g, m), m) for g in rest)
        return _add(_numerator(rest, n), _shift(_numerator(colon, n), sum(m)), -1)
    # pivot on the variable occurring in the most non-pure generators
    counts = [sum(1 for g in nonpure if g[i]) for i in range(n)]
    i = max(range(n), key=lambda k: counts[k])
    exps = sorted(g[i] for g in nonpure if g[i])
    e = exps[len(exps) // 2]
    p = tuple(e if k == i else 0 for k in range(n))
    plus = minimalize(gens + (p,))
    colon = minimalize(term_div(term_lcm(g, p), p) for g in gens)
    return _add(_numerator(plus, n), _shift(_numerator(colon, n), e))


def hilbert_numerator(I: MonomialIdeal) -> list:
    """Numerator of the Hilbert series of R/I over ``(1 - t)^n``."""
    return _numerator(I.gens, I.n)


def extend_numerator(I: MonomialIdeal, numerator: Sequence[int], t: Term) -> list:
    """Numerator of ``I + <t>`` from the numerator of ``I``.

    Uses ``N(I + t) = N(I) - t^deg(t) N(I : t)``.
    """
    return _add(numerator, _shift(hilbert_numerator(I.colon(t)), sum(t)), -1)


@dataclass(frozen=True)
class HilbertData:
    n: int
    numerator: tuple
    reduced: tuple  # numerator after cancelling every factor (1 - t)
    dim: int  # pole order at t = 1 (Krull dimension of R/I)
    hp_degree: int
    hp_coeffs: tuple  # Hilbert polynomial coefficients in d, ascending
    regularity: int  # H(d) equals the Hilbert polynomial for d >= regularity

    def series(self, upto: int) -> list:
        """Coefficients ``dim (R/I)_d`` for ``d = 0..upto``."""
        out = []
        n = self.n
        for d in range(upto + 1):
            if n == 0:
                out.append(self.numerator[d] if d < len(self.numerator) else 0)
            else:
                out.append(sum(c * comb(d - i + n - 1, n - 1) for i, c in enumerate(self.numerator) if i <= d))
        return out

    def hilbert_polynomial(self, d: int) -> Fraction:
        return sum((c * d ** k for k, c in enumerate(self.hp_coeffs)), Fraction(0))

    @property
    def leading_coefficient(self) -> Fraction:
        return self.hp_coeffs[-1] if self.hp_coeffs else Fraction(0)


def _poly_in_d_binomial(shift: int, D: int) -> list:
    """Coefficients (ascending in d) of ``C(d - shift + D - 1, D - 1)``."""
    coeffs = [Fraction(1)]
    for j in range(1, D):
        # multiply by (d - shift + j)
        a = j - shift
        new = [Fraction(0)] * (len(coeffs) + 1)
        for k, c in enumerate(coeffs):
            new[k] += c * a
            new[k + 1] += c
        coeffs = new
    f = factorial(D - 1)
    return [c / f for c in coeffs]


def hilbert_data_from_numerator(numerator: Sequence[int], n: int) -> HilbertData:
    N = _trim(list(numerator))
    q = list(N)
    k = 0
    while q and sum(q) == 0:
        # synthetic division by (1 - t)
        out, acc = [], 0
        for c in q[:-1]:
            acc += c
            out.append(acc)
        q = _trim(out)
        k += 1
    D = n - k if q else 0
    if not q or D <= 0:
        reg = len(q)  # series is zero past deg q
        return HilbertData(n, tuple(N), tuple(q), max(D, 0), -1, (), max(reg, 0))
    hp = [Fraction(0)] * D
    for i, c in enumerate(q):
        for j, b in enumerate(_poly_in_d_binomial(i, D)):
            hp[j] += c * b
    while hp and hp[-1] == 0:
        hp.pop()
    reg = max(0, len(q) - 1 - D + 1)
    return HilbertData(n, tuple(N), tuple(q), D, D - 1, tuple(hp), reg)


def hilbert_data(I: MonomialIdeal) -> HilbertData:
    return hilbert_data_from_numerator(hilbert_numerator(I), I.n)


class Verdict(Enum):
    A_BETTER = "a"
    B_BETTER = "b"
    TIE = "tie"


def compare_candidates(a: HilbertData, b: HilbertData) -> Verdict:
    """Prefer the quotient whose Hilbert function is smaller in the long run.

    Lower Hilbert-polynomial degree wins, then a smaller leading coefficient,
    then the first smaller coefficient of the series.
    """
    if a.n != b.n:
        raise ValueError("Hilbert data from rings of different dimension")
    if a.hp_degree != b.hp_degree:
        return Verdict.A_BETTER if a.hp_degree < b.hp_degree else Verdict.B_BETTER
    if a.leading_coefficient != b.leading_coefficient:
        return Verdict.A_BETTER if a.leading_coefficient < b.leading_coefficient else Verdict.B_BETTER
    # agreeing on this many consecutive degrees past regularity forces equal polynomials
    upto = max(a.regularity, b.regularity) + max(a.hp_degree, 0) + 1
    for x, y in zip(a.series(upto), b.series(upto)):
        if x != y:
            return Verdict.A_BETTER if x < y else Verdict.B_BETTER
    return Verdict.TIE


def standard_monomial_count(I: MonomialIdeal, d: int) -> int:
    """Brute-force count of degree-``d`` terms outside ``I``."""
    if d < 0:
        raise ValueError("degree must be non-negative")
    n = I.n
    count = 0
    for cut in itertools.combinations(range(d + n - 1), n - 1):
        # stars and bars
        prev = -1
        t = []
        for c in cut:
            t.append(c - prev - 1)
            prev = c
        t.append(d + n - 1 - prev - 1)
        if tuple(t) not in I:
            count += 1
    return count
