"""Dynamic Buchberger algorithm with boundary-vector and disjoint-cone criteria."""

from .engine import (
    GBResult,
    StrategyConfig,
    Stats,
    distinct_terms,
    dynamic_run,
    is_groebner_oracle,
    static_run,
)
from .hilbert import HilbertData, MonomialIdeal, compare_candidates, hilbert_data, hilbert_numerator
from .lpcones import ConstraintSystem, compute_boundary_vectors, feasible_weight
from .polycore import Polynomial, TermOrdering, reduce, s_polynomial
from .systems import generate_cyclic, generate_katsura, load_system, parse_system, render_system

__all__ = [
    "ConstraintSystem",
    "GBResult",
    "HilbertData",
    "MonomialIdeal",
    "Polynomial",
    "Stats",
    "StrategyConfig",
    "TermOrdering",
    "compare_candidates",
    "compute_boundary_vectors",
    "distinct_terms",
    "dynamic_run",
    "feasible_weight",
    "generate_cyclic",
    "generate_katsura",
    "hilbert_data",
    "hilbert_numerator",
    "is_groebner_oracle",
    "load_system",
    "parse_system",
    "reduce",
    "render_system",
    "s_polynomial",
    "static_run",
]
