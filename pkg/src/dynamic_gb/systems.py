"""Benchmark generators and the plain-text polynomial system format.

File grammar::

    # comment
    vars: x y z
    x^2 + y^2 - 4
    1/2*x*y - 1

One polynomial per line.  A monomial is a product of an optional integer or
``a/b`` coefficient and variables with optional ``^e`` exponents; ``*`` may
be omitted between factors.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .polycore import Polynomial, homogenize


class SystemParseError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


@dataclass
class SystemFile:
    variables: tuple
    polynomials: list

    def __post_init__(self):
        self.variables = tuple(self.variables)
        for p in self.polynomials:
            if p.nvars != len(self.variables):
                raise ValueError("polynomial does not match the declared variables")


def _vars(prefix: str, indices) -> tuple:
    return tuple(f"{prefix}{i}" for i in indices)


def generate_cyclic(n: int) -> SystemFile:
    """Cyclic-n: the elementary cyclic sums of degree 1..n-1 and x1...xn - 1."""
    if n < 2:
        raise ValueError("cyclic systems need n >= 2")
    polys = []
    for k in range(1, n):
        terms = {}
        for i in range(n):
            t = [0] * n
            for j in range(k):
                t[(i + j) % n] += 1
            t = tuple(t)
            terms[t] = terms.get(t, 0) + 1
        polys.append(Polynomial(terms, n))
    polys.append(Polynomial({(1,) * n: 1, (0,) * n: -1}, n))
    return SystemFile(_vars("x", range(1, n + 1)), polys)


def generate_katsura(n: int) -> SystemFile:
    """Katsura-n in the n+1 variables x0..xn."""
    if n < 1:
        raise ValueError("katsura systems need n >= 1")
    nv = n + 1

    def var(i):
        i = abs(i)
        return i if i <= n else None

    polys = []
    for m in range(n):
        terms: dict = {}
        for i in range(-n, n + 1):
            a, b = var(i), var(m - i)
            if a is None or b is None:
                continue
            t = [0] * nv
            t[a] += 1
            t[b] += 1
            t = tuple(t)
            terms[t] = terms.get(t, 0) + 1
        t = [0] * nv
        t[m] = 1
        t = tuple(t)
        terms[t] = terms.get(t, 0) - 1
        polys.append(Polynomial(terms, nv))
    lin = {}
    for i in range(-n, n + 1):
        t = [0] * nv
        t[abs(i)] = 1
        t = tuple(t)
        lin[t] = lin.get(t, 0) + 1
    lin[(0,) * nv] = -1
    polys.append(Polynomial(lin, nv))
    return SystemFile(_vars("x", range(nv)), polys)


def homogenize_system(sf: SystemFile) -> SystemFile:
    name = "h"
    while name in sf.variables:
        name += "_"
    return SystemFile(sf.variables + (name,), [homogenize(p) for p in sf.polynomials])


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^]))")


def _parse_poly(text: str, names: dict, lineno: int, offset: int) -> Polynomial:
    n = len(names)
    pos = 0
    tokens = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            col = pos + offset + 1 + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise SystemParseError(f"unexpected character {text[pos:].lstrip()[:1]!r}", lineno, col)
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind) + offset + 1))
        pos = m.end()
    if not tokens:
        raise SystemParseError("empty polynomial", lineno, offset + 1)

    terms: dict = {}
    k = 0

    def peek():
        return tokens[k] if k < len(tokens) else (None, None, len(text) + offset + 1)

    def expect_int():
        nonlocal k
        kind, val, col = peek()
        if kind != "num":
            raise SystemParseError("malformed exponent" if tokens[k - 1][1] == "^" else "expected a number", lineno, col)
        k += 1
        return int(val)

    first = True
    while k < len(tokens):
        sign = 1
        kind, val, col = peek()
        if kind == "op" and val in "+-":
            sign = -1 if val == "-" else 1
            k += 1
        elif not first:
            raise SystemParseError(f"expected '+' or '-', found {val!r}", lineno, col)
        first = False
        coeff = Fraction(sign)
        expo = [0] * n
        factors = 0
        while True:
            kind, val, col = peek()
            if kind == "num":
                k += 1
                c = Fraction(int(val))
                if peek()[0] == "op" and peek()[1] == "/":
                    k += 1
                    den = expect_int()
                    if den == 0:
                        raise SystemParseError("zero denominator", lineno, col)
                    c /= den
                coeff *= c
            elif kind == "name":
                if val not in names:
                    raise SystemParseError(f"unknown variable {val}", lineno, col)
                k += 1
                e = 1
                if peek()[0] == "op" and peek()[1] == "^":
                    k += 1
                    e = expect_int()
                expo[names[val]] += e
            else:
                raise SystemParseError(f"expected a coefficient or variable, found {val!r}" if val else "unexpected end of line", lineno, col)
            factors += 1
            kind, val, col = peek()
            if kind == "op" and val == "*":
                k += 1
                continue
            if kind in ("num", "name"):
                continue
            break
        t = tuple(expo)
        terms[t] = terms.get(t, 0) + coeff
    return Polynomial({t: c for t, c in terms.items() if c}, n)


def parse_system(text: str) -> SystemFile:
    variables = None
    names: dict = {}
    polys = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        stripped = line.lstrip()
        offset = len(line) - len(stripped)
        if variables is None:
            m = re.match(r"vars\s*:", stripped)
            if not m:
                raise SystemParseError("expected 'vars:' declaration", lineno, offset + 1)
            decl = stripped[m.end():].replace(",", " ").split()
            if not decl:
                raise SystemParseError("no variables declared", lineno, offset + m.end() + 1)
            for v in decl:
                if not re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", v):
                    raise SystemParseError(f"invalid variable name {v!r}", lineno, offset + stripped.find(v) + 1)
                if v in names:
                    raise SystemParseError(f"duplicate variable {v}", lineno, offset + stripped.find(v) + 1)
                names[v] = len(names)
            variables = tuple(decl)
            continue
        p = _parse_poly(line, names, lineno, 0)
        if p:
            polys.append(p)
    if variables is None:
        raise SystemParseError("missing 'vars:' declaration", 1, 1)
    if not polys:
        raise SystemParseError("empty system", max(1, len(text.splitlines())), 1)
    return SystemFile(variables, polys)


def render_system(sf: SystemFile, order=None) -> str:
    lines = ["vars: " + " ".join(sf.variables)]
    lines += [p.to_string(sf.variables, order) for p in sf.polynomials]
    return "\n".join(lines) + "\n"


def load_system(spec: str, homogenized: bool = False) -> tuple:
    """Resolve ``cyclic-N``, ``katsura-N`` or a file path to ``(name, SystemFile)``."""
    m = re.fullmatch(r"(cyclic|katsura)-(\d+)", spec)
    if m:
        kind, k = m.group(1), int(m.group(2))
        sf = generate_cyclic(k) if kind == "cyclic" else generate_katsura(k)
        name = f"{kind.capitalize()}-{k}"
    else:
        with open(spec, encoding="utf-8") as fh:
            sf = parse_system(fh.read())
        name = spec
    if homogenized:
        sf = homogenize_system(sf)
        name += " hom."
    return name, sf


def polys(sf: SystemFile | Sequence[Polynomial]) -> list:
    return list(sf.polynomials) if isinstance(sf, SystemFile) else list(sf)
