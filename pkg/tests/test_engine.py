import random

import pytest

from conftest import poly, polys
from oracles import strict_feasible
from dynamic_gb import engine
from dynamic_gb.engine import (
    CriticalPair,
    GBState,
    StrategyConfig,
    choose_an_ordering,
    distinct_terms,
    dynamic_run,
    is_groebner_oracle,
    monitor_lts,
    possible_lts,
    select_pair,
    static_run,
    update_pairs_gm,
)
from dynamic_gb.lpcones import BoundaryVectorSet, ConstraintSystem, RejectRegistry, constraints_for
from dynamic_gb.polycore import Polynomial, TermOrdering, TrackedPolynomial, leading_term, reduce, term_lcm
from dynamic_gb.systems import generate_cyclic, generate_katsura

CYCLIC4_MATRIX = ((1, 3, 2, 4), (1, 1, 1, 0), (1, 1, 0, 0), (1, 0, 0, 0))
UNGRADED = StrategyConfig(graded_candidates=False)


def cyclic(n):
    return generate_cyclic(n).polynomials


def state_with(n, order, G=(), lp=()):
    s = GBState(n=n, order=order)
    for g, t in G:
        s.G.append(TrackedPolynomial(g, g.degree()))
        s.recorded_lts.append(t)
        s.active.append(len(s.G) - 1)
    s.lp = ConstraintSystem(n, lp)
    return s


def verified(result, F):
    return is_groebner_oracle(result.basis, result.order) and all(
        not reduce(result.order, f, result.basis) for f in F
    )


def random_system(rng, n, count, max_deg=3):
    F = []
    while len(F) < count:
        terms = {}
        for _ in range(rng.randint(1, 4)):
            d = rng.randint(0, max_deg)
            t = [0] * n
            for _ in range(d):
                t[rng.randrange(n)] += 1
            terms[tuple(t)] = rng.randint(-3, 3) or 1
        p = Polynomial(terms, n)
        if p:
            F.append(p)
    return F


# --- static goldens -------------------------------------------------------------

@pytest.mark.parametrize(
    "order, pols, terms",
    [
        (TermOrdering.lex(4), 6, 18),
        (TermOrdering.grevlex(4), 7, 24),
        (TermOrdering.matrix(CYCLIC4_MATRIX), 5, 19),
    ],
    ids=["lex", "grevlex", "matrix"],
)
def test_cyclic4_static_sizes(order, pols, terms):
    res = static_run(cyclic(4), order)
    assert (len(res.basis), distinct_terms(res.basis)) == (pols, terms)
    assert is_groebner_oracle(res.basis, order)


def test_static_basis_is_reduced_and_monic():
    order = TermOrdering.grevlex(4)
    res = static_run(cyclic(4), order)
    leads = [leading_term(order, g) for g in res.basis]
    assert all(c == 1 for _, c in leads)
    for i, g in enumerate(res.basis):
        others = [h for j, h in enumerate(res.basis) if j != i]
        assert reduce(order, g, others) == g


def test_static_rejects_mismatched_order():
    with pytest.raises(ValueError):
        static_run(cyclic(4), TermOrdering.grevlex(3))


# --- dynamic runs ----------------------------------------------------------------------

def test_cyclic4_dynamic_no_larger_than_static():
    F = cyclic(4)
    res = dynamic_run(F, StrategyConfig(strategy="sugar"))
    assert verified(res, F)
    assert len(res.basis) <= 7


def test_single_linear_polynomial():
    F = polys("x", "x - 1")
    res = dynamic_run(F)
    assert res.basis == F


def test_dynamic_refuses_static_mode():
    with pytest.raises(ValueError):
        dynamic_run(cyclic(3), StrategyConfig(static_mode=True))


def test_zero_input_rejected():
    with pytest.raises(ValueError):
        dynamic_run([Polynomial.zero(2)])


@pytest.mark.parametrize("strategy", ["sugar", "normal", "mindeg"])
@pytest.mark.parametrize("F", [cyclic(4), generate_katsura(3).polynomials], ids=["cyclic4", "katsura3"])
def test_every_strategy_gives_a_basis(strategy, F):
    res = dynamic_run(F, StrategyConfig(strategy=strategy))
    assert verified(res, F)
    assert res.state.check_leads()


@pytest.mark.parametrize("graded", [True, False])
def test_unrestricted_candidates_also_verify(graded):
    F = generate_katsura(3).polynomials
    res = dynamic_run(F, StrategyConfig(strategy="sugar", graded_candidates=graded))
    assert verified(res, F)


def test_weighted_sugar_run():
    F = cyclic(4)
    res = dynamic_run(F, StrategyConfig(strategy="sugar", weighted_sugar=True))
    assert verified(res, F)


@pytest.mark.parametrize("seed", [1, 2, 3])
def test_seeds_only_change_tie_breaks(seed):
    F = generate_katsura(3).polynomials
    res = dynamic_run(F, StrategyConfig(strategy="sugar", seed=seed))
    assert verified(res, F)


@pytest.mark.parametrize("bv, dc", [(True, True), (True, False), (False, True), (False, False)])
def test_criteria_are_conservative(bv, dc):
    F = generate_katsura(3).polynomials
    res = dynamic_run(F, StrategyConfig(strategy="sugar", use_boundary_vectors=bv, use_disjoint_cones=dc))
    assert verified(res, F)
    assert res.state.check_leads()
    assert res.state.lp.strictly_satisfied(res.order.weight)


def test_random_small_systems():
    rng = random.Random(11)
    for _ in range(10):
        F = random_system(rng, rng.randint(1, 3), rng.randint(1, 3))
        res = dynamic_run(F, StrategyConfig(strategy="sugar"))
        assert verified(res, F)


def test_stats_match_live_state():
    res = dynamic_run(cyclic(4), StrategyConfig(strategy="sugar"))
    s = res.stats
    assert s.constraint_count == len(res.state.lp)
    assert s.spolys_processed >= s.zero_reductions >= 0
    assert all(v >= 0 for v in s.as_dict().values())


def test_counter_consistency(monkeypatch):
    batches = []
    original = RejectRegistry.is_rejected

    def counting(self, candidate, base=()):
        batches.append(1)
        return original(self, candidate, base)

    monkeypatch.setattr(RejectRegistry, "is_rejected", counting)
    for F in (cyclic(4), generate_katsura(3).polynomials, cyclic(5)):
        batches.clear()
        s = dynamic_run(F, StrategyConfig(strategy="sugar")).stats
        assert s.lps_solved + s.lps_failed + s.rejected_by_disjoint_cones == len(batches)


# --- pairs --------------------------------------------------------------------------

def test_product_criterion_drops_coprime_pair():
    g1, g2 = polys("x y", "x^2 + 1", "y^3 + y")
    s = state_with(2, TermOrdering.grevlex(2), [(g1, (2, 0))])
    s.G.append(TrackedPolynomial(g2, 3))
    s.recorded_lts.append((0, 3))
    update_pairs_gm(s, 1)
    assert s.pairs == []


def test_single_pair_kept():
    g1, g2 = polys("x y", "x^2 + y", "x*y + 1")
    s = state_with(2, TermOrdering.grevlex(2), [(g1, (2, 0))])
    s.G.append(TrackedPolynomial(g2, 2))
    s.recorded_lts.append((1, 1))
    update_pairs_gm(s, 1)
    assert [(p.i, p.j, p.lcm) for p in s.pairs] == [(0, 1, (2, 1))]


def unpruned_update(state, new_index, cfg=None):
    deg = state.sugar_degree(False)
    lts = state.recorded_lts
    for i in range(new_index):
        L = term_lcm(lts[i], lts[new_index])
        sugar = engine._pair_sugar(state, i, new_index, L, deg)
        state.pairs.append(CriticalPair(i, new_index, L, sugar, state.next_age()))
    state.active = list(range(new_index + 1))
    return state


def test_pruning_does_not_change_the_basis(monkeypatch):
    rng = random.Random(5)
    for _ in range(6):
        F = random_system(rng, 3, 3, 2)
        order = TermOrdering.grevlex(3)
        pruned = static_run(F, order).basis
        with monkeypatch.context() as m:
            m.setattr(engine, "update_pairs_gm", unpruned_update)
            full = static_run(F, order).basis
        assert sorted(map(repr, pruned)) == sorted(map(repr, full))


def make_pair_state(pairs):
    s = state_with(2, TermOrdering.grevlex(2))
    s.pairs = [CriticalPair(0, 1, L, sugar, k) for k, (L, sugar) in enumerate(pairs)]
    return s


def test_sugar_selects_lowest_sugar():
    s = make_pair_state([((1, 1), 3), ((2, 0), 2)])
    assert select_pair(s, StrategyConfig(strategy="sugar")).sugar == 2


def test_sugar_ties_go_to_lower_lcm_degree():
    s = make_pair_state([((2, 2), 5), ((2, 1), 5)])
    assert select_pair(s, StrategyConfig(strategy="sugar")).lcm == (2, 1)


def test_normal_selects_smallest_lcm():
    s = make_pair_state([((2, 1), 3), ((1, 1), 3)])
    assert select_pair(s, StrategyConfig(strategy="normal")).lcm == (1, 1)


def test_empty_queue_raises():
    with pytest.raises(IndexError):
        select_pair(make_pair_state([]), StrategyConfig())


# --- candidate leading terms ------------------------------------------------------------

def test_possible_lts_worked_example():
    # y leads under (1, 3); x survives the corners but divides x^2
    s = state_with(2, TermOrdering((1, 3)))
    s.psi = BoundaryVectorSet(((2.0, 1.0),), 3.0)
    r = poly("x y", "x^2 + x + y")
    assert set(possible_lts(s, r, UNGRADED)) == {(2, 0), (0, 1)}


def test_graded_candidates_keep_only_top_degree():
    s = state_with(2, TermOrdering((1, 3)))
    s.psi = BoundaryVectorSet(((2.0, 1.0),), 3.0)
    r = poly("x y", "x^2 + x + y")
    assert possible_lts(s, r, StrategyConfig()) == [(2, 0)]


def test_monomial_has_one_candidate():
    s = state_with(2, TermOrdering.grevlex(2))
    assert possible_lts(s, Polynomial.monomial((1, 2)), UNGRADED) == [(1, 2)]


def test_all_three_quadrics_survive():
    s = state_with(4, TermOrdering.grevlex(4))
    r = poly("x1 x2 x3 x4", "x2^2 - 2*x2*x4 - x4^2")
    assert set(possible_lts(s, r, UNGRADED)) == {(0, 2, 0, 0), (0, 1, 0, 1), (0, 0, 0, 2)}


def test_candidates_ranked_by_hilbert():
    # <x^2, y> is zero-dimensional, <x^2, x> = <x> is not
    s = state_with(2, TermOrdering((2, 1)), [(Polynomial.monomial((2, 0)), (2, 0))])
    s.lt_ideal = s.lt_ideal.plus((2, 0))
    s.lt_numerator = engine.hb.hilbert_numerator(s.lt_ideal)
    assert possible_lts(s, poly("x y", "x + y"), UNGRADED)[0] == (0, 1)


def test_zero_polynomial_has_no_candidates():
    with pytest.raises(ValueError):
        possible_lts(state_with(2, TermOrdering.grevlex(2)), Polynomial.zero(2), UNGRADED)


# --- monitoring recorded leads ----------------------------------------------------------

def test_monitor_accepts_unchanged_leads():
    g = poly("x y", "x^2 + y")
    s = state_with(2, TermOrdering.grevlex(2), [(g, (2, 0))])
    ok, mu, L = monitor_lts(s, (1, 1), ConstraintSystem(2))
    assert ok and mu == (1, 1)


def test_monitor_finds_a_compromise():
    g = poly("x y", "x^3 + y^4")
    s = state_with(2, TermOrdering((5, 3)), [(g, (3, 0))])
    candidate = ConstraintSystem(2, [(1, -1)])
    ok, mu, L = monitor_lts(s, (1, 1), candidate)
    assert ok
    assert leading_term(TermOrdering(mu), g)[0] == (3, 0)
    assert L.strictly_satisfied(mu)
    assert strict_feasible(list(L), 2)


def test_monitor_rejects_disjoint_requirements():
    g = poly("x y", "x + y^2")
    s = state_with(2, TermOrdering((3, 1)), [(g, (1, 0))])
    ok, mu, L = monitor_lts(s, (1, 2), ConstraintSystem(2, [(-1, 1)]))
    assert not ok and mu is None


# --- choosing an ordering ---------------------------------------------------------------

def test_cyclic4_second_lead_is_x2_squared():
    f1 = poly("x1 x2 x3 x4", "x1 + x2 + x3 + x4")
    lp = constraints_for((1, 0, 0, 0), f1)
    s = state_with(4, TermOrdering((2, 1, 1, 1)), [(f1, (1, 0, 0, 0))], lp)
    s.lt_ideal = s.lt_ideal.plus((1, 0, 0, 0))
    s.lt_numerator = engine.hb.hilbert_numerator(s.lt_ideal)
    r2 = poly("x1 x2 x3 x4", "x2^2 + 2*x2*x4 + x4^2")
    lead = choose_an_ordering(s, r2, StrategyConfig(strategy="sugar"))
    assert lead == (0, 2, 0, 0)
    assert all(isinstance(x, int) for x in s.order.weight)
    assert s.lp.as_set() >= set(lp) | {(0, 1, 0, -1)}
    assert s.lp.strictly_satisfied(s.order.weight)
    assert s.lp.strictly_satisfied((3, 2, 1, 1))


def test_infeasible_alternatives_fall_back_to_current_lead():
    s = state_with(2, TermOrdering((2, 1)), [(Polynomial.monomial((2, 0)), (2, 0))], [(1, -1)])
    s.lt_ideal = s.lt_ideal.plus((2, 0))
    s.lt_numerator = engine.hb.hilbert_numerator(s.lt_ideal)
    lead = choose_an_ordering(s, poly("x y", "x + y"), UNGRADED)
    assert lead == (1, 0)
    assert s.order.weight == (2, 1)
    assert len(s.rejects) == 1 and s.stats.lps_failed == 1


def test_single_candidate_keeps_the_order():
    s = state_with(2, TermOrdering((2, 1)))
    lead = choose_an_ordering(s, Polynomial.monomial((1, 1)), UNGRADED)
    assert lead == (1, 1) and s.order.weight == (2, 1) and len(s.lp) == 0


# --- oracle -------------------------------------------------------------------------

def test_oracle_accepts_static_output():
    order = TermOrdering.grevlex(4)
    assert is_groebner_oracle(static_run(cyclic(4), order).basis, order)


def test_oracle_rejects_circle_and_hyperbola():
    assert not is_groebner_oracle(polys("x y", "x^2 + y^2 - 4", "x*y - 1"), TermOrdering.lex(2))


def test_oracle_accepts_coprime_leads():
    assert is_groebner_oracle(polys("x y", "x", "y"), TermOrdering.grevlex(2))
