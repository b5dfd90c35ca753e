"""Exact multivariate polynomials over the rationals and admissible term orderings.

Terms are plain tuples of non-negative exponents.  Polynomials map terms to
nonzero ``gmpy2.mpq`` coefficients.  Orderings compare terms by an integer
weight vector first and fall through to a tie-break (grevlex, lex, or explicit
matrix rows).
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from enum import IntEnum
from fractions import Fraction
from numbers import Rational
from operator import add, le, sub
from typing import Callable, Iterable, Mapping, Sequence, Union

import numpy as np
from gmpy2 import gcd, lcm, mpq, mpz

Term = tuple
Coefficient = Union[int, Fraction, "mpq"]


def coerce(c) -> mpq:
    if isinstance(c, str):
        return mpq(Fraction(c))
    if isinstance(c, (int, Rational)) or type(c) is type(mpq(0)):
        return mpq(c)
    raise TypeError(f"coefficient must be rational, got {type(c).__name__}")


# --- term arithmetic -------------------------------------------------------

def one(n: int) -> Term:
    return (0,) * n


def term_mul(t: Term, u: Term) -> Term:
    return tuple(map(add, t, u))


def term_div(t: Term, u: Term) -> Term:
    """Quotient t/u; caller guarantees u | t."""
    return tuple(map(sub, t, u))


def divides(u: Term, t: Term) -> bool:
    return all(map(le, u, t))


def term_lcm(t: Term, u: Term) -> Term:
    return tuple(map(max, t, u))


def coprime(t: Term, u: Term) -> bool:
    return not any(a and b for a, b in zip(t, u))


def degree(t: Term) -> int:
    return sum(t)


def support_mask(t: Term) -> int:
    """Bitmask of the variables occurring in t (fast divisibility pre-check)."""
    m = 0
    for i, e in enumerate(t):
        if e:
            m |= 1 << i
    return m


# --- orderings --------------------------------------------------------------

class Cmp(IntEnum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


def _is_admissible_matrix(rows: Sequence[Sequence[int]]) -> bool:
    m = np.array(rows, dtype=float)
    if np.linalg.matrix_rank(m) < m.shape[1]:
        return False
    for col in m.T:
        nz = col[col != 0]
        if len(nz) == 0 or nz[0] < 0:
            return False
    return True


@dataclass(frozen=True)
class TermOrdering:
    """Weight vector refined by a tie-break.

    ``tiebreak`` is ``"grevlex"``, ``"lex"`` or a tuple of integer rows.  Two
    terms are compared by their weighted degrees and then by the tie-break.
    """

    weight: tuple
    tiebreak: Union[str, tuple] = "grevlex"
    _keys: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        w = tuple(int(x) for x in self.weight)
        object.__setattr__(self, "weight", w)
        if any(x < 0 for x in w):
            raise ValueError(f"weights must be non-negative: {w}")
        tb = self.tiebreak
        if isinstance(tb, str):
            if tb not in ("grevlex", "lex"):
                raise ValueError(f"unknown tie-break {tb!r}")
            if tb == "grevlex" and not all(w):
                raise ValueError("grevlex tie-break needs strictly positive weights")
        else:
            tb = tuple(tuple(int(x) for x in row) for row in tb)
            object.__setattr__(self, "tiebreak", tb)
            if any(len(row) != len(w) for row in tb):
                raise ValueError("tie-break rows must match the weight length")
            if not _is_admissible_matrix((w,) + tb):
                raise ValueError("matrix ordering is not admissible")

    @classmethod
    def grevlex(cls, n: int) -> "TermOrdering":
        return cls((1,) * n, "grevlex")

    @classmethod
    def lex(cls, n: int) -> "TermOrdering":
        # zero weight: the lex tie-break decides everything
        return cls((0,) * n, "lex")

    @classmethod
    def matrix(cls, rows: Sequence[Sequence[int]]) -> "TermOrdering":
        rows = [tuple(r) for r in rows]
        return cls(rows[0], tuple(rows[1:]))

    @property
    def nvars(self) -> int:
        return len(self.weight)

    def weighted_degree(self, t: Term) -> int:
        return sum(a * b for a, b in zip(self.weight, t))

    def key(self, t: Term) -> tuple:
        """Sort key: larger key means larger term."""
        k = self._keys.get(t)
        if k is None:
            if len(t) != len(self.weight):
                raise ValueError(f"term {t} has {len(t)} variables, ordering has {len(self.weight)}")
            w = sum(a * b for a, b in zip(self.weight, t))
            tb = self.tiebreak
            if tb == "grevlex":
                k = (w,) + tuple(-e for e in reversed(t))
            elif tb == "lex":
                k = (w,) + t
            else:
                k = (w,) + tuple(sum(a * b for a, b in zip(row, t)) for row in tb)
            self._keys[t] = k
        return k

    def compare(self, u: Term, v: Term) -> Cmp:
        ku, kv = self.key(u), self.key(v)
        if ku == kv:
            return Cmp.EQUAL
        return Cmp.GREATER if ku > kv else Cmp.LESS

    def matrix_rows(self) -> list:
        """The ordering as an explicit list of integer rows."""
        n = self.nvars
        if self.tiebreak == "grevlex":
            rest = [tuple(-1 if j == n - 1 - i else 0 for j in range(n)) for i in range(n)]
        elif self.tiebreak == "lex":
            rest = [tuple(1 if j == i else 0 for j in range(n)) for i in range(n)]
        else:
            rest = list(self.tiebreak)
        return [self.weight] + rest


def compare_terms(o: TermOrdering, u: Term, v: Term) -> Cmp:
    if len(u) != o.nvars or len(v) != o.nvars:
        raise ValueError("dimension mismatch between terms and ordering")
    return o.compare(u, v)


# --- polynomials ------------------------------------------------------------

class Polynomial:
    """Sparse polynomial with exact rational coefficients.

    Treat instances as immutable; arithmetic returns new objects.
    """

    __slots__ = ("terms", "nvars", "_hash", "_ints")

    def __init__(self, terms: Mapping[Term, Coefficient] = (), nvars: int | None = None):
        items = terms.items() if isinstance(terms, Mapping) else terms
        d = {}
        for t, c in items:
            t = tuple(int(e) for e in t)
            c = coerce(c)
            if c:
                d[t] = d.get(t, 0) + c
                if not d[t]:
                    del d[t]
        if nvars is None:
            if not d:
                raise ValueError("nvars is required for the zero polynomial")
            nvars = len(next(iter(d)))
        for t in d:
            if len(t) != nvars or any(e < 0 for e in t):
                raise ValueError(f"bad exponent vector {t} for {nvars} variables")
        self.terms = d
        self.nvars = nvars
        self._hash = None
        self._ints = None

    @classmethod
    def _raw(cls, terms: dict, nvars: int) -> "Polynomial":
        """Wrap a dict that already satisfies the invariants (no copy)."""
        p = cls.__new__(cls)
        p.terms = terms
        p.nvars = nvars
        p._hash = None
        p._ints = None
        return p

    @classmethod
    def zero(cls, n: int) -> "Polynomial":
        return cls._raw({}, n)

    @classmethod
    def constant(cls, c: Coefficient, n: int) -> "Polynomial":
        return cls({one(n): c}, n)

    @classmethod
    def variable(cls, i: int, n: int) -> "Polynomial":
        t = [0] * n
        t[i] = 1
        return cls._raw({tuple(t): mpq(1)}, n)

    @classmethod
    def monomial(cls, t: Term, c: Coefficient = 1) -> "Polynomial":
        return cls({tuple(t): c}, len(t))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self):
        return len(self.terms)

    def support(self) -> list:
        return list(self.terms)

    def degree(self) -> int:
        if not self.terms:
            return -1
        return max(map(sum, self.terms))

    def is_homogeneous(self) -> bool:
        return len({sum(t) for t in self.terms}) <= 1

    def coefficient(self, t: Term) -> mpq:
        return self.terms.get(tuple(t), mpq(0))

    def integer_form(self) -> dict:
        """Coprime integer coefficients proportional to this polynomial (cached)."""
        if self._ints is None:
            self._ints = primitive_part(self.terms)[0]
        return self._ints

    def _check(self, other: "Polynomial"):
        if self.nvars != other.nvars:
            raise ValueError("polynomials live in rings of different dimension")

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.nvars == other.nvars and self.terms == other.terms
        if isinstance(other, (int, Rational)) or type(other) is type(mpq(0)):
            return self == Polynomial.constant(other, self.nvars)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    def __neg__(self):
        return Polynomial._raw({t: -c for t, c in self.terms.items()}, self.nvars)

    def _lift(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        return Polynomial.constant(other, self.nvars)

    def __add__(self, other):
        other = self._lift(other)
        d = dict(self.terms)
        for t, c in other.terms.items():
            s = d.get(t, 0) + c
            if s:
                d[t] = s
            else:
                d.pop(t, None)
        return Polynomial._raw(d, self.nvars)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            c = coerce(other)
            if not c:
                return Polynomial.zero(self.nvars)
            return Polynomial._raw({t: c * a for t, a in self.terms.items()}, self.nvars)
        self._check(other)
        d: dict = {}
        for t, a in self.terms.items():
            for u, b in other.terms.items():
                v = term_mul(t, u)
                s = d.get(v, 0) + a * b
                if s:
                    d[v] = s
                else:
                    del d[v]
        return Polynomial._raw(d, self.nvars)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result = Polynomial.constant(1, self.nvars)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def mul_term(self, t: Term, c: Coefficient = 1) -> "Polynomial":
        c = coerce(c)
        if not c:
            return Polynomial.zero(self.nvars)
        return Polynomial._raw({term_mul(t, u): c * a for u, a in self.terms.items()}, self.nvars)

    def monic(self, order: TermOrdering) -> "Polynomial":
        if not self.terms:
            return self
        _, lc = leading_term(order, self)
        return self * (1 / lc)

    def to_string(self, names: Sequence[str] | None = None, order: TermOrdering | None = None) -> str:
        if not self.terms:
            return "0"
        names = names or [f"x{i + 1}" for i in range(self.nvars)]
        order = order or TermOrdering.grevlex(self.nvars)
        parts = []
        for t in sorted(self.terms, key=order.key, reverse=True):
            c = self.terms[t]
            sign = "-" if c < 0 else "+"
            c = abs(c)
            factors = []
            for name, e in zip(names, t):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            if c != 1 or not factors:
                factors.insert(0, str(c))
            parts.append((sign, "*".join(factors)))
        head = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        return " ".join([head] + [f"{s} {m}" for s, m in parts[1:]])

    def __repr__(self):
        return f"Polynomial({self.to_string()!r}, nvars={self.nvars})"

    __str__ = to_string


@dataclass(frozen=True)
class TrackedPolynomial:
    """A polynomial together with its sugar (degree of the homogenized computation)."""

    poly: Polynomial
    sugar: int

    def __post_init__(self):
        if self.poly and self.sugar < self.poly.degree():
            raise ValueError(f"sugar {self.sugar} below degree {self.poly.degree()}")


# --- core operations --------------------------------------------------------

def leading_term(o: TermOrdering, p: Polynomial) -> tuple:
    if not p.terms:
        raise ValueError("the zero polynomial has no leading term")
    t = max(p.terms, key=o.key)
    return t, p.terms[t]


def s_polynomial(o: TermOrdering, f: Polynomial, g: Polynomial) -> Polynomial:
    if not f and not g:
        raise ValueError("S-polynomial of two zero polynomials is undefined")
    if not g:
        return f
    if not f:
        return g
    f._check(g)
    tf, cf = leading_term(o, f)
    tg, cg = leading_term(o, g)
    m = term_lcm(tf, tg)
    return f.mul_term(term_div(m, tf), cg) - g.mul_term(term_div(m, tg), cf)


def primitive_part(terms: Mapping[Term, Coefficient]) -> tuple:
    """``(ints, scale)`` with coprime integer coefficients and ``terms = scale * ints``."""
    den = mpz(1)
    for c in terms.values():
        den = lcm(den, mpq(c).denominator)
    ints = {t: mpz(c * den) for t, c in terms.items()}
    g = mpz(0)
    for c in ints.values():
        g = gcd(g, c)
        if g == 1:
            break
    if g > 1:
        ints = {t: c // g for t, c in ints.items()}
    return ints, mpq(g, den) if ints else mpq(1)


CONTENT_PERIOD = 32  # reduction steps between content removals


def reduce_terms(
    p: dict,
    reducers: Sequence[tuple],
    key: Callable[[Term], tuple],
    full: bool = True,
    sugar: int | None = None,
    sugar_degree: Callable[[Term], int] | None = None,
):
    """Reduce the term dict ``p`` by ``reducers`` and return ``(remainder, sugar)``.

    Each reducer is ``(lt, mask, lc, terms, sugar)`` where ``terms`` has
    integer coefficients, ``lc = terms[lt]`` and ``mask`` is
    ``support_mask(lt)``.  The work is fraction-free: ``p`` is kept as an
    integer polynomial times a rational scale, which avoids a gcd on every
    coefficient operation.  The remainder has rational coefficients and is the
    exact remainder of the input.  With ``full`` false, reduction stops at the
    first irreducible term and the rest is copied verbatim.
    """
    p, scale = primitive_part(p)
    heap = [(_neg(key(t)), t) for t in p]
    heapq.heapify(heap)
    out = {}
    steps = 0
    while heap:
        _, t = heapq.heappop(heap)
        c = p.pop(t, None)
        if c is None:
            continue
        tm = support_mask(t)
        for lt, mask, lc, gterms, gsugar in reducers:
            if mask & ~tm or not divides(lt, t):
                continue
            q = term_div(t, lt)
            h = gcd(c, lc)
            mult, f = lc // h, c // h
            if mult != 1:
                # p <- mult * p so that the cancellation stays integral
                for u in p:
                    p[u] *= mult
                for u in out:
                    out[u] *= mult
                scale /= mult
            for u, a in gterms.items():
                if u == lt:
                    continue
                v = term_mul(u, q)
                old = p.get(v)
                if old is None:
                    p[v] = -f * a
                    heapq.heappush(heap, (_neg(key(v)), v))
                else:
                    s = old - f * a
                    if s:
                        p[v] = s
                    else:
                        del p[v]
            if sugar is not None:
                sugar = max(sugar, sugar_degree(q) + gsugar)
            steps += 1
            if steps % CONTENT_PERIOD == 0:
                scale *= _remove_content(p, out)
            break
        else:
            out[t] = c
            if not full:
                out.update(p)
                break
    return {t: scale * c for t, c in out.items()}, sugar


def _remove_content(*dicts) -> mpz:
    g = mpz(0)
    for d in dicts:
        for c in d.values():
            g = gcd(g, c)
            if g == 1:
                return g
    if g > 1:
        for d in dicts:
            for u in d:
                d[u] //= g
    return g or mpz(1)


def _neg(k: tuple) -> tuple:
    return tuple(-x for x in k)


def make_reducer(o: TermOrdering, g: Polynomial, sugar: int = 0, lt: Term | None = None) -> tuple:
    """Reducer tuple for :func:`reduce_terms`; ``lt`` skips the leading-term search."""
    if lt is None:
        lt = leading_term(o, g)[0]
    ints = g.integer_form()
    return (lt, support_mask(lt), ints[lt], ints, sugar)


def reduce(o: TermOrdering, p: Polynomial, G: Iterable[Polynomial], full: bool = True) -> Polynomial:
    """Remainder of p modulo G.

    With ``full`` (the default) no term of the result is divisible by a
    leading term of G; otherwise only the leading term is guaranteed
    irreducible.
    """
    reducers = []
    for g in G:
        if not g:
            raise ValueError("cannot reduce modulo the zero polynomial")
        p._check(g)
        reducers.append(make_reducer(o, g))
    r, _ = reduce_terms(dict(p.terms), reducers, o.key, full=full)
    return Polynomial._raw(r, p.nvars)


def homogenize(p: Polynomial) -> Polynomial:
    """Append a homogenizing variable as the last coordinate."""
    d = p.degree()
    return Polynomial._raw({t + (d - sum(t),): c for t, c in p.terms.items()}, p.nvars + 1)
