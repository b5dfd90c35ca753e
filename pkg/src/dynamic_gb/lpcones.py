"""Linear programs over term-order cones.

A cone of weight vectors is described by integer constraint vectors ``c``
meaning ``c . y > 0`` together with ``y_k > 0``.  Feasibility is decided on the
perturbed program where every strict inequality becomes ``>= epsilon``; both
programs are feasible together (scale any strict solution far enough).

The solver is a dense two-phase tableau simplex with Bland's rule.  It runs in
floating point by default and over exact rationals when asked.
"""

from __future__ import annotations

import logging
import math
from collections import OrderedDict
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np
from gmpy2 import mpq

from .polycore import Polynomial, Term

log = logging.getLogger(__name__)

Constraint = tuple

EPSILON = 1
DEDUP_TOL = 1e-7
FLOAT_TOL = 1e-9
SCALE_EXPONENTS = (3, 6, 12)


def canonicalize(c: Sequence[int]) -> Constraint:
    """Divide an integer vector by the gcd of its entries."""
    c = tuple(int(x) for x in c)
    g = math.gcd(*c)
    if g == 0:
        raise ValueError("the zero vector is not a constraint")
    return tuple(x // g for x in c)


def constraints_for(t: Term, r: Polynomial, against: Iterable[Term] | None = None) -> frozenset:
    """Constraints forcing ``t`` above every other term of ``r``.

    ``against`` restricts the competitors to a subset of ``supp(r)`` (the
    terms that survive the candidate filters).  Vectors with no negative entry
    are implied by positivity and dropped.
    """
    if t not in r.terms:
        raise ValueError(f"{t} is not a term of the polynomial")
    others = r.terms if against is None else against
    out = set()
    for u in others:
        if u == t:
            continue
        diff = tuple(a - b for a, b in zip(t, u))
        if all(x >= 0 for x in diff):
            continue
        out.add(canonicalize(diff))
    return frozenset(out)


class ConstraintSystem:
    """Deduplicated, insertion-ordered set of canonical constraints."""

    __slots__ = ("n", "epsilon", "_rows")

    def __init__(self, n: int, constraints: Iterable[Sequence[int]] = (), epsilon=EPSILON):
        self.n = n
        self.epsilon = epsilon
        self._rows: dict = {}
        for c in constraints:
            c = canonicalize(c)
            if len(c) != n:
                raise ValueError(f"constraint {c} has wrong length for n={n}")
            self._rows[c] = None

    def __len__(self):
        return len(self._rows)

    def __iter__(self):
        return iter(self._rows)

    def __contains__(self, c):
        return c in self._rows

    def __repr__(self):
        return f"ConstraintSystem(n={self.n}, {list(self._rows)}, epsilon={self.epsilon})"

    def __eq__(self, other):
        if not isinstance(other, ConstraintSystem):
            return NotImplemented
        return self.n == other.n and set(self._rows) == set(other._rows) and self.epsilon == other.epsilon

    def as_set(self) -> frozenset:
        return frozenset(self._rows)

    def extend(self, new: Iterable[Sequence[int]]) -> "ConstraintSystem":
        out = ConstraintSystem(self.n, epsilon=self.epsilon)
        out._rows = dict(self._rows)
        for c in sorted(canonicalize(c) for c in new):
            out._rows[c] = None
        return out

    def closure(self) -> "ConstraintSystem":
        """The same constraints with the perturbation removed (``>= 0``)."""
        return ConstraintSystem(self.n, self._rows, epsilon=0)

    def strictly_satisfied(self, w: Sequence) -> bool:
        """Exact check of ``c . w > 0`` for every constraint and ``w_k > 0``."""
        if any(x <= 0 for x in w):
            return False
        return all(sum(a * b for a, b in zip(c, w)) > 0 for c in self._rows)


class Status(Enum):
    FEASIBLE = "feasible"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class SimplexOutcome:
    status: Status
    point: tuple | None = None
    objective_value: float | Fraction | None = None

    @property
    def feasible(self) -> bool:
        return self.status is Status.FEASIBLE


# --- tableau simplex ------------------------------------------------------------

def _pivot(T, r, c):
    T[r] = T[r] / T[r, c]
    col = T[:, c].copy()
    col[r] = 0
    T -= np.outer(col, T[r])


def _bland(T, basis, ncols, tol):
    """Iterate until optimal.  Return False if the objective is unbounded."""
    m = T.shape[0] - 1
    while True:
        obj = T[-1, :ncols]
        entering = next((j for j in range(ncols) if obj[j] < -tol), None)
        if entering is None:
            return True
        col = T[:m, entering]
        best = None
        for i in range(m):
            if col[i] > tol:
                ratio = T[i, -1] / col[i]
                if best is None or ratio < best[0] - tol or (abs(ratio - best[0]) <= tol and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            return False
        _pivot(T, best[1], entering)
        basis[best[1]] = entering


def _simplex(A_ge, b_ge, A_eq, b_eq, cost, exact):
    """Minimize ``cost . z`` over ``A_ge z >= b_ge, A_eq z = b_eq, z >= 0``."""
    n = len(cost)
    tol = 0 if exact else FLOAT_TOL
    dtype = object if exact else float
    num = mpq if exact else float
    m_ge, m_eq = len(A_ge), len(A_eq)
    m = m_ge + m_eq

    rows, rhs, needs_art = [], [], []
    for a, b in zip(A_ge, b_ge):
        if b <= 0:
            rows.append(([-x for x in a], 1))
            rhs.append(-b)
            needs_art.append(False)
        else:
            rows.append((list(a), -1))
            rhs.append(b)
            needs_art.append(True)
    for a, b in zip(A_eq, b_eq):
        if b < 0:
            rows.append(([-x for x in a], 0))
            rhs.append(-b)
        else:
            rows.append((list(a), 0))
            rhs.append(b)
        needs_art.append(True)

    n_art = sum(needs_art)
    ncols = n + m_ge + n_art
    T = np.zeros((m + 1, ncols + 1), dtype=dtype)
    if exact:
        T[:] = mpq(0)
    basis = [0] * m
    art = n + m_ge
    for i, ((a, slack_sign), b) in enumerate(zip(rows, rhs)):
        T[i, :n] = [num(x) for x in a]
        T[i, -1] = num(b)
        if i < m_ge:
            T[i, n + i] = num(slack_sign)
        if needs_art[i]:
            T[i, art] = num(1)
            basis[i] = art
            art += 1
        else:
            basis[i] = n + i

    # phase 1
    if n_art:
        for i in range(m):
            if needs_art[i]:
                T[-1, :] -= T[i, :]
        for j in range(n + m_ge, ncols):
            T[-1, j] = num(0)
        _bland(T, basis, ncols, tol)
        if -T[-1, -1] > (0 if exact else 1e-7):
            return Status.INFEASIBLE, None, None
        keep = []
        for i in range(m):
            if basis[i] >= n + m_ge:
                j = next((j for j in range(n + m_ge) if abs(T[i, j]) > tol), None)
                if j is None:
                    continue  # redundant equality
                _pivot(T, i, j)
                basis[i] = j
            keep.append(i)
        T = np.vstack([T[keep], T[-1:]])
        T = np.hstack([T[:, : n + m_ge], T[:, -1:]])
        basis = [basis[i] for i in keep]
        ncols = n + m_ge
        m = len(keep)

    # phase 2
    T[-1, :] = num(0)
    for j in range(n):
        T[-1, j] = num(cost[j])
    for i, bj in enumerate(basis):
        if bj < n and cost[bj]:
            T[-1, :] -= num(cost[bj]) * T[i, :]
    if not _bland(T, basis, ncols, tol):
        return Status.UNBOUNDED, None, None
    z = [num(0)] * n
    for i, bj in enumerate(basis):
        if bj < n:
            z[bj] = T[i, -1]
    if not exact:
        z = [max(0.0, float(x)) for x in z]
    return Status.FEASIBLE, z, sum(num(c) * x for c, x in zip(cost, z))


def solve(
    sys: ConstraintSystem,
    objective: Sequence,
    sense: str = "min",
    extra_equality: tuple | None = None,
    exact: bool = False,
) -> SimplexOutcome:
    """Optimize ``objective . y`` over ``{c . y >= eps} u {y_k >= eps}``.

    ``extra_equality`` is an optional ``(vector, rhs)`` pair.  ``sense`` is
    ``"min"`` or ``"max"``.
    """
    if sense not in ("min", "max"):
        raise ValueError(f"sense must be 'min' or 'max', not {sense!r}")
    n = sys.n
    if len(objective) != n:
        raise ValueError("objective has wrong length")
    conv = mpq if exact else float
    eps = conv(sys.epsilon)
    obj = [conv(x) for x in objective]
    cost = obj if sense == "min" else [-x for x in obj]

    # substitute y = z + eps so that z >= 0
    A_ge = [list(c) for c in sys]
    b_ge = [eps - eps * sum(c) for c in sys]
    A_eq, b_eq = [], []
    if extra_equality is not None:
        v, rhs = extra_equality
        A_eq.append(list(v))
        b_eq.append(conv(rhs) - eps * sum(v))

    status, z, _ = _simplex(A_ge, b_ge, A_eq, b_eq, cost, exact)
    if status is not Status.FEASIBLE:
        return SimplexOutcome(status)
    y = tuple(x + eps for x in z)
    value = sum(a * b for a, b in zip(obj, y))
    return SimplexOutcome(Status.FEASIBLE, y, value)


def _integerize(y: Sequence[float], k: int) -> tuple:
    scale = 10 ** k
    w = [int(round(x * scale)) for x in y]
    g = math.gcd(*w)
    return tuple(x // g for x in w) if g else tuple(w)


def infeasibility_certificate(sys: ConstraintSystem) -> tuple | None:
    """Multipliers ``u >= 0, u != 0`` with ``sum u_j c_j <= 0``, checked exactly.

    Such ``u`` proves the strict system empty: any ``y > 0`` would give
    ``0 < sum u_j (c_j . y) = (sum u_j c_j) . y <= 0``.  Returns None when no
    certificate was recovered (which does not prove feasibility).
    """
    rows = list(sys)
    if not rows:
        return None
    n, m = sys.n, len(rows)
    A_ge = [[-rows[j][k] for j in range(m)] for k in range(n)]
    status, u, _ = _simplex(A_ge, [0.0] * n, [[1.0] * m], [1.0], [0.0] * m, exact=False)
    if status is not Status.FEASIBLE:
        return None
    q = tuple(Fraction(x).limit_denominator(10 ** 6) for x in u)
    if any(x < 0 for x in q) or not any(q):
        return None
    for k in range(n):
        if sum(q[j] * rows[j][k] for j in range(m)) > 0:
            return None
    return q


def feasible_weight(sys: ConstraintSystem) -> tuple | None:
    """A strictly positive integer weight vector in the open cone, or None.

    Both verdicts are exact: a returned vector has been checked against every
    constraint in integer arithmetic, and None is backed either by a verified
    infeasibility certificate or by the rational simplex.
    """
    n = sys.n
    if len(sys) == 0:
        return (1,) * n
    out = solve(sys, [1] * n)
    if out.feasible:
        for k in SCALE_EXPONENTS:
            w = _integerize(out.point, k)
            if sys.strictly_satisfied(w):
                return w
        log.debug("rounded weights failed the exact check; falling back to rational simplex")
    elif out.status is Status.INFEASIBLE and infeasibility_certificate(sys) is not None:
        return None
    exact = solve(sys, [1] * n, exact=True)
    if not exact.feasible:
        return None
    den = math.lcm(*(int(x.denominator) for x in exact.point))
    w = [int(x * den) for x in exact.point]
    g = math.gcd(*w)
    w = tuple(x // g for x in w)
    if not sys.strictly_satisfied(w):  # pragma: no cover - exact arithmetic
        raise AssertionError("rational simplex returned a point outside the cone")
    return w


# --- boundary vectors --------------------------------------------------------

@dataclass(frozen=True)
class BoundaryVectorSet:
    vectors: tuple
    level_d: float

    def __len__(self):
        return len(self.vectors)

    def __iter__(self):
        return iter(self.vectors)

    @classmethod
    def standard_basis(cls, n: int) -> "BoundaryVectorSet":
        return cls(tuple(tuple(1.0 if i == k else 0.0 for i in range(n)) for k in range(n)), 1.0)


def compute_boundary_vectors(sys: ConstraintSystem, tau: Sequence, d: float | None = None) -> BoundaryVectorSet:
    """Approximate the extreme points of the cone's cross-section ``sum(y) = d``.

    For each coordinate, the points maximizing and minimizing it are kept
    (at most ``2n`` vectors, near-duplicates removed).
    """
    n = sys.n
    if d is None:
        d = 1 + sum(float(x) for x in tau)
    eq = ((1,) * n, d)
    found: list = []
    for k in range(n):
        e = [0] * n
        e[k] = 1
        for sense in ("max", "min"):
            out = solve(sys, e, sense, extra_equality=eq)
            if not out.feasible:
                out = solve(sys, e, sense, extra_equality=eq, exact=True)
            if not out.feasible:
                raise RuntimeError(f"boundary-vector program is {out.status.value} (d={d})")
            v = tuple(float(x) for x in out.point)
            if not any(max(abs(a - b) for a, b in zip(v, f)) <= DEDUP_TOL for f in found):
                found.append(v)
    return BoundaryVectorSet(tuple(found), float(d))


def filter_by_boundary_vectors(psi: BoundaryVectorSet | Iterable, t: Term, U: Iterable[Term]) -> set:
    """Keep ``t`` and every ``u`` that some boundary vector weighs above ``t``."""
    vectors = list(psi)
    kept = {t}
    for u in U:
        diff = [a - b for a, b in zip(u, t)]
        if any(sum(p * x for p, x in zip(psi_v, diff)) > FLOAT_TOL for psi_v in vectors):
            kept.add(u)
    return kept


# --- rejects -----------------------------------------------------------------

class RejectRegistry:
    """Constraint sets known to be inconsistent with the current program lineage.

    Bounded; the oldest entry is evicted first.
    """

    def __init__(self, capacity: int = 1024):
        self.capacity = capacity
        self._stored: OrderedDict = OrderedDict()

    def __len__(self):
        return len(self._stored)

    def __iter__(self):
        return iter(self._stored)

    def __contains__(self, item):
        return frozenset(canonicalize(c) for c in item) in self._stored

    def register(self, failed: Iterable[Sequence[int]]) -> "RejectRegistry":
        key = frozenset(canonicalize(c) for c in failed)
        if not key:
            raise ValueError("an empty extension of a consistent program cannot be infeasible")
        if key not in self._stored:
            self._stored[key] = None
            if len(self._stored) > self.capacity:
                self._stored.popitem(last=False)
        return self

    def is_rejected(self, candidate: Iterable[Sequence[int]], base: ConstraintSystem | Iterable = ()) -> bool:
        cand = {canonicalize(c) for c in candidate}
        base_rows = base if isinstance(base, ConstraintSystem) else {canonicalize(c) for c in base}
        return any(all(c in cand or c in base_rows for c in stored) for stored in self._stored)


def register_reject(reg: RejectRegistry, failed: Iterable[Sequence[int]]) -> RejectRegistry:
    return reg.register(failed)


def is_rejected(reg: RejectRegistry, candidate: Iterable[Sequence[int]], base: ConstraintSystem | Iterable = ()) -> bool:
    return reg.is_rejected(candidate, base)
