"""Static and dynamic Buchberger drivers.

The dynamic driver refines a weight ordering as new basis elements arrive.
Each new polynomial's leading term is picked by the Hilbert heuristic from the
terms that survive two filters (boundary vectors, then divisibility); the
choice is made consistent with earlier ones by extending a linear program, and
``monitor_lts`` makes sure no earlier leading term moves.
"""

from __future__ import annotations

import functools
import logging
import random
from dataclasses import dataclass, field, fields
from typing import Sequence

from . import hilbert as hb
from .lpcones import (
    BoundaryVectorSet,
    ConstraintSystem,
    RejectRegistry,
    canonicalize,
    compute_boundary_vectors,
    constraints_for,
    feasible_weight,
    filter_by_boundary_vectors,
)
from .polycore import (
    Polynomial,
    Term,
    TermOrdering,
    TrackedPolynomial,
    coprime,
    divides,
    leading_term,
    make_reducer,
    reduce,
    reduce_terms,
    s_polynomial,
    term_div,
    term_lcm,
    term_mul,
)

log = logging.getLogger(__name__)

STRATEGIES = ("sugar", "normal", "mindeg")


@dataclass
class StrategyConfig:
    static_mode: bool = False
    strategy: str = "normal"
    weighted_sugar: bool = False
    use_boundary_vectors: bool = True
    use_disjoint_cones: bool = True
    seed: int = 0
    check_invariants: bool = True
    # only terms of top total degree may lead; keeps affine runs degree-compatible
    graded_candidates: bool = True

    def __post_init__(self):
        if self.strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy {self.strategy!r}; expected one of {STRATEGIES}")


@dataclass
class Stats:
    rejected_by_corners: int = 0
    rejected_by_disjoint_cones: int = 0
    lps_solved: int = 0
    lps_failed: int = 0
    constraint_count: int = 0
    spolys_processed: int = 0
    zero_reductions: int = 0
    # not reported in the table, kept for diagnostics
    monitor_resolves: int = 0
    kept_without_lp: int = 0

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


@dataclass
class CriticalPair:
    i: int
    j: int  # -1 marks an input pair (f_i, 0)
    lcm: Term
    sugar: int
    age: int

    @property
    def is_input(self) -> bool:
        return self.j < 0


@dataclass
class GBState:
    n: int
    order: TermOrdering
    G: list = field(default_factory=list)  # TrackedPolynomial, monic w.r.t. recorded_lts
    recorded_lts: list = field(default_factory=list)
    active: list = field(default_factory=list)  # indices whose leads are minimal
    inputs: list = field(default_factory=list)
    pairs: list = field(default_factory=list)
    lp: ConstraintSystem | None = None
    psi: BoundaryVectorSet | None = None
    rejects: RejectRegistry = field(default_factory=RejectRegistry)
    stats: Stats = field(default_factory=Stats)
    rng: random.Random = field(default_factory=random.Random)
    lt_ideal: hb.MonomialIdeal | None = None
    lt_numerator: list = field(default_factory=lambda: [1])
    _age: int = 0

    def __post_init__(self):
        if self.lp is None:
            self.lp = ConstraintSystem(self.n)
        if self.psi is None:
            self.psi = BoundaryVectorSet.standard_basis(self.n)
        if self.lt_ideal is None:
            self.lt_ideal = hb.MonomialIdeal([], self.n)

    def next_age(self) -> int:
        self._age += 1
        return self._age

    def sugar_degree(self, weighted: bool):
        if weighted:
            return self.order.weighted_degree
        return sum

    def check_leads(self, order: TermOrdering | None = None) -> bool:
        order = order or self.order
        return all(leading_term(order, g.poly)[0] == t for g, t in zip(self.G, self.recorded_lts))


@dataclass
class GBResult:
    basis: list
    order: TermOrdering
    stats: Stats
    leads: list  # recorded leading term of every basis element
    state: GBState | None = None

    def __iter__(self):
        # unpacks as (G, order, stats)
        return iter((self.basis, self.order, self.stats))


# --- pairs -----------------------------------------------------------------------

def _pair_sugar(state: GBState, i: int, j: int, lcm: Term, deg) -> int:
    gi, gj = state.G[i], state.G[j]
    ti, tj = state.recorded_lts[i], state.recorded_lts[j]
    return max(gi.sugar - deg(ti), gj.sugar - deg(tj)) + deg(lcm)


def update_pairs_gm(state: GBState, new_index: int, cfg: StrategyConfig | None = None) -> GBState:
    """Gebauer-Moeller update after ``G[new_index]`` joined the basis."""
    cfg = cfg or StrategyConfig()
    deg = state.sugar_degree(cfg.weighted_sugar)
    lts = state.recorded_lts
    h = lts[new_index]

    cand = [(i, term_lcm(lts[i], h)) for i in state.active]
    kept = []
    for k, (i, L) in enumerate(cand):
        if coprime(lts[i], h):
            kept.append((i, L))
            continue
        later = cand[k + 1:]
        if any(divides(M, L) for _, M in later) or any(divides(M, L) for _, M in kept):
            continue
        kept.append((i, L))
    new_pairs = [(i, L) for i, L in kept if not coprime(lts[i], h)]

    def survives(p: CriticalPair) -> bool:
        if p.is_input or not divides(h, p.lcm):
            return True
        return term_lcm(lts[p.i], h) == p.lcm or term_lcm(lts[p.j], h) == p.lcm

    state.pairs = [p for p in state.pairs if survives(p)]
    for i, L in new_pairs:
        state.pairs.append(CriticalPair(i, new_index, L, _pair_sugar(state, i, new_index, L, deg), state.next_age()))
    state.active = [i for i in state.active if not divides(h, lts[i])] + [new_index]
    return state


def _pair_lcm(state: GBState, p: CriticalPair) -> Term:
    if p.is_input:
        return leading_term(state.order, state.inputs[p.i])[0]
    return p.lcm


def select_pair(state: GBState, cfg: StrategyConfig) -> CriticalPair:
    """Remove and return the next pair according to the strategy."""
    if not state.pairs:
        raise IndexError("no critical pairs left")
    order = state.order
    deg = order.weighted_degree if cfg.weighted_sugar else sum

    if cfg.strategy == "sugar":
        def key(p):
            L = _pair_lcm(state, p)
            return (p.sugar, deg(L), order.key(L), p.age)
    elif cfg.strategy == "normal":
        def key(p):
            return (order.key(_pair_lcm(state, p)), p.age)
    else:
        def key(p):
            L = _pair_lcm(state, p)
            return (deg(L), order.key(L), p.age)

    best = min(range(len(state.pairs)), key=lambda k: key(state.pairs[k]))
    return state.pairs.pop(best)


# --- reduction -------------------------------------------------------------------

def _reducers(state: GBState) -> list:
    return [make_reducer(state.order, state.G[i].poly, state.G[i].sugar, state.recorded_lts[i]) for i in state.active]


def _spoly_terms(state: GBState, p: CriticalPair, deg) -> tuple:
    if p.is_input:
        f = state.inputs[p.i]
        return dict(f.terms), max(map(deg, f.terms))
    gi, gj = state.G[p.i], state.G[p.j]
    qi = term_div(p.lcm, state.recorded_lts[p.i])
    qj = term_div(p.lcm, state.recorded_lts[p.j])
    d = {}
    for u, a in gi.poly.terms.items():
        d[term_mul(u, qi)] = a
    for u, a in gj.poly.terms.items():
        v = term_mul(u, qj)
        s = d.get(v, 0) - a
        if s:
            d[v] = s
        else:
            d.pop(v, None)
    return d, p.sugar


def _reduce_pair(state: GBState, p: CriticalPair, cfg: StrategyConfig) -> TrackedPolynomial | None:
    deg = state.sugar_degree(cfg.weighted_sugar)
    terms, sugar = _spoly_terms(state, p, deg)
    r, sugar = reduce_terms(terms, _reducers(state), state.order.key, full=True, sugar=sugar, sugar_degree=deg)
    if not r:
        return None
    return TrackedPolynomial(Polynomial._raw(r, state.n), max(sugar, max(map(sum, r))))


# --- choosing the leading term -------------------------------------------------

def possible_lts(state: GBState, r: Polynomial, cfg: StrategyConfig) -> list:
    """Candidate leading terms of ``r``, best first by the Hilbert heuristic."""
    if not r:
        raise ValueError("the zero polynomial has no leading term")
    t = leading_term(state.order, r)[0]
    terms = set(r.terms)
    pool = terms
    if cfg.graded_candidates:
        top = max(map(sum, terms))
        pool = {u for u in terms if sum(u) == top}
        t = max(pool, key=state.order.key)
    if cfg.use_boundary_vectors and len(pool) > 1:
        kept = filter_by_boundary_vectors(state.psi, t, pool - {t})
        state.stats.rejected_by_corners += len(pool) - len(kept)
        pool = kept
    # a term properly dividing another one can never lead
    survivors = [u for u in pool if not any(v != u and divides(u, v) for v in terms)]
    if len(survivors) == 1:
        return survivors
    return _rank_by_hilbert(state, survivors, t, cfg)


def _rank_by_hilbert(state: GBState, candidates: Sequence[Term], t_sigma: Term, cfg: StrategyConfig) -> list:
    n = state.n
    data = {
        u: hb.hilbert_data_from_numerator(hb.extend_numerator(state.lt_ideal, state.lt_numerator, u), n)
        for u in candidates
    }
    if cfg.seed:
        noise = {u: state.rng.random() for u in sorted(candidates)}
        tie = lambda u: (noise[u],)  # noqa: E731
    else:
        tie = lambda u: (sum(u), tuple(-k for k in state.order.key(u)))  # noqa: E731

    def cmp(a, b):
        v = hb.compare_candidates(data[a], data[b])
        if v is hb.Verdict.A_BETTER:
            return -1
        if v is hb.Verdict.B_BETTER:
            return 1
        ka, kb = tie(a), tie(b)
        return (ka > kb) - (ka < kb)

    return sorted(candidates, key=functools.cmp_to_key(cmp))


def monitor_lts(
    state: GBState,
    tau: Sequence[int],
    lp_candidate: ConstraintSystem,
    pending: tuple | None = None,
) -> tuple:
    """Repair a candidate weight so that no recorded leading term changes.

    ``pending`` is an optional ``(polynomial, intended_lead)`` pair for the
    element being added.  Returns ``(accepted, weight, program)``.
    """
    watched = [(g.poly, t) for g, t in zip(state.G, state.recorded_lts)]
    if pending is not None:
        watched.append(pending)
    mu = tuple(tau)
    L = lp_candidate
    while True:
        order = TermOrdering(mu, "grevlex")
        fixes = set()
        for g, t in watched:
            u = leading_term(order, g)[0]
            if u != t:
                fixes.add(canonicalize(a - b for a, b in zip(t, u)))
        if not fixes:
            return True, mu, L
        L = L.extend(fixes)
        state.stats.monitor_resolves += 1
        mu = feasible_weight(L)
        if mu is None:
            return False, None, L


def _commit(state: GBState, weight: Sequence[int], lp: ConstraintSystem, cfg: StrategyConfig):
    changed_lp = len(lp) != len(state.lp)
    if tuple(weight) != state.order.weight:
        state.order = TermOrdering(tuple(weight), "grevlex")
    state.lp = lp
    state.stats.constraint_count = len(lp)
    if changed_lp and cfg.use_boundary_vectors:
        state.psi = compute_boundary_vectors(lp, state.order.weight)


def choose_an_ordering(state: GBState, r: Polynomial, cfg: StrategyConfig) -> Term:
    """Pick the leading term of ``r`` and refine the ordering to match.

    Returns the chosen term.  ``state.order``, ``state.lp`` and
    ``state.psi`` are updated in place.
    """
    t_sigma = leading_term(state.order, r)[0]
    ranked = possible_lts(state, r, cfg)
    survivors = set(ranked)
    base = state.lp
    for u in ranked:
        new = constraints_for(u, r, against=survivors)
        added = [c for c in new if c not in base]
        if u == t_sigma and ConstraintSystem(state.n, added).strictly_satisfied(state.order.weight):
            # current weight already separates u from every competitor
            state.stats.kept_without_lp += 1
            _commit(state, state.order.weight, base.extend(added), cfg)
            return u
        if cfg.use_disjoint_cones and state.rejects.is_rejected(added, base):
            state.stats.rejected_by_disjoint_cones += 1
            continue
        L = base.extend(added)
        w = feasible_weight(L)
        if w is None:
            state.stats.lps_failed += 1
            state.rejects.register(added)
            continue
        ok, mu, L = monitor_lts(state, w, L, pending=(r, u))
        if not ok:
            state.stats.lps_failed += 1
            state.rejects.register(c for c in L if c not in base)
            continue
        state.stats.lps_solved += 1
        _commit(state, mu, L, cfg)
        return u
    # unreachable while the state invariants hold: the current lead is always consistent
    log.warning("no candidate leading term accepted; keeping the current ordering")
    return t_sigma


# --- drivers -----------------------------------------------------------------

def _add_to_basis(state: GBState, r: TrackedPolynomial, lead: Term, cfg: StrategyConfig):
    lc = r.poly.terms[lead]
    poly = r.poly if lc == 1 else Polynomial._raw({t: c / lc for t, c in r.poly.terms.items()}, state.n)
    state.G.append(TrackedPolynomial(poly, r.sugar))
    state.recorded_lts.append(lead)
    k = len(state.G) - 1
    state.lt_numerator = hb.extend_numerator(state.lt_ideal, state.lt_numerator, lead)
    state.lt_ideal = state.lt_ideal.plus(lead)
    update_pairs_gm(state, k, cfg)
    return k


def _seed(state: GBState, F: Sequence[Polynomial]):
    F = [f for f in F]
    if not F:
        raise ValueError("need at least one input polynomial")
    for k, f in enumerate(F):
        if not f:
            raise ValueError("input polynomials must be nonzero")
        if f.nvars != state.n:
            raise ValueError("input polynomials live in different rings")
        state.inputs.append(f)
        deg = max(map(sum, f.terms))
        state.pairs.append(CriticalPair(k, -1, (), deg, state.next_age()))


def _buchberger(state: GBState, cfg: StrategyConfig):
    while state.pairs:
        p = select_pair(state, cfg)
        state.stats.spolys_processed += 1
        r = _reduce_pair(state, p, cfg)
        if r is None:
            state.stats.zero_reductions += 1
            continue
        if cfg.static_mode:
            lead = leading_term(state.order, r.poly)[0]
        else:
            lead = choose_an_ordering(state, r.poly, cfg)
            if cfg.check_invariants:
                _assert_invariants(state, r.poly, lead)
        _add_to_basis(state, r, lead, cfg)


def _assert_invariants(state: GBState, r: Polynomial, lead: Term):
    if not state.check_leads():
        raise AssertionError("a recorded leading term changed under the committed ordering")
    if leading_term(state.order, r)[0] != lead:
        raise AssertionError("the new polynomial does not lead with the chosen term")
    if not state.lp.strictly_satisfied(state.order.weight):
        raise AssertionError("committed weight violates the accumulated constraints")


def interreduce(state: GBState) -> tuple:
    """Reduced basis (monic, tails reduced) from the active elements."""
    idx = sorted(state.active, key=lambda i: state.order.key(state.recorded_lts[i]))
    basis, leads = [], []
    for i in idx:
        t = state.recorded_lts[i]
        others = [make_reducer(state.order, state.G[j].poly, 0, state.recorded_lts[j]) for j in idx if j != i]
        tail = {u: c for u, c in state.G[i].poly.terms.items() if u != t}
        red, _ = reduce_terms(tail, others, state.order.key, full=True)
        red[t] = state.G[i].poly.terms[t]
        basis.append(Polynomial._raw(red, state.n))
        leads.append(t)
    return basis, leads


def _run(F: Sequence[Polynomial], cfg: StrategyConfig, order: TermOrdering) -> GBResult:
    F = list(F)
    n = F[0].nvars if F else 0
    state = GBState(n=n, order=order, rng=random.Random(cfg.seed))
    _seed(state, F)
    _buchberger(state, cfg)
    basis, leads = interreduce(state)
    state.stats.constraint_count = len(state.lp)
    return GBResult(basis, state.order, state.stats, leads, state)


def dynamic_run(F: Sequence[Polynomial], cfg: StrategyConfig | None = None) -> GBResult:
    """Groebner basis together with a weight ordering discovered on the way."""
    cfg = cfg or StrategyConfig()
    if cfg.static_mode:
        raise ValueError("dynamic_run called with static_mode set; use static_run")
    F = list(F)
    if not F:
        raise ValueError("need at least one input polynomial")
    return _run(F, cfg, TermOrdering.grevlex(F[0].nvars))


def static_run(F: Sequence[Polynomial], order: TermOrdering, cfg: StrategyConfig | None = None) -> GBResult:
    """Classical Buchberger algorithm under a fixed ordering."""
    cfg = cfg or StrategyConfig(static_mode=True)
    if not cfg.static_mode:
        cfg = StrategyConfig(**{**cfg.__dict__, "static_mode": True})
    F = list(F)
    if not F:
        raise ValueError("need at least one input polynomial")
    if F[0].nvars != order.nvars:
        raise ValueError("ordering and polynomials disagree on the number of variables")
    return _run(F, cfg, order)


def is_groebner_oracle(G: Sequence[Polynomial], order: TermOrdering) -> bool:
    """Brute force: every S-polynomial of G reduces to zero modulo G."""
    G = [g for g in G]
    if any(not g for g in G):
        raise ValueError("basis contains the zero polynomial")
    # any reduction path decides membership for a basis; small leading
    # coefficients first keeps the integers short
    reducers = sorted((make_reducer(order, g) for g in G), key=lambda r: abs(r[2]))
    for a in range(len(G)):
        for b in range(a + 1, len(G)):
            s = s_polynomial(order, G[a], G[b])
            # a remainder is zero exactly when top reduction exhausts it
            rem, _ = reduce_terms(dict(s.terms), reducers, order.key, full=False)
            if rem:
                return False
    return True


def distinct_terms(G: Sequence[Polynomial]) -> int:
    return len({t for g in G for t in g.terms})
