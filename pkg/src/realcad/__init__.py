"""Exact real-algebraic decision procedures and region-based verification
of interrupt timed automata with polynomial constraints."""

from .polycore import (
    DomainError,
    InternalInvariantError,
    ParseError,
    Poly,
    const,
    derivative,
    degree,
    evaluate,
    parse_poly,
    poly_text,
    subresultants,
    var,
)
from .realalg import (
    count_roots,
    rational_point,
    root_coding,
    sign_at,
    sign_realization,
    tarski_query,
    thom_compare,
)
from .cad import build_cad, CadTree, eliminate_all, locate_cell
from .foreals import decide, parse_formula, to_prenex
from .model import (
    Automaton,
    State,
    Transition,
    discrete_step,
    initial_config,
    parse_model,
    parse_timed_word,
    run_timed_word,
    time_step,
    validate,
)
from .regmc import (
    RegionSpace,
    build_region_graph,
    model_check,
    parse_ctl,
    poly_closure,
    reach,
    region_dot,
)

__version__ = "0.1.0"

__all__ = [
    "Automaton",
    "CadTree",
    "DomainError",
    "InternalInvariantError",
    "ParseError",
    "Poly",
    "RegionSpace",
    "State",
    "Transition",
    "build_cad",
    "build_region_graph",
    "const",
    "count_roots",
    "decide",
    "degree",
    "derivative",
    "discrete_step",
    "eliminate_all",
    "evaluate",
    "initial_config",
    "locate_cell",
    "model_check",
    "parse_ctl",
    "parse_formula",
    "parse_model",
    "parse_poly",
    "parse_timed_word",
    "poly_closure",
    "poly_text",
    "rational_point",
    "reach",
    "region_dot",
    "root_coding",
    "run_timed_word",
    "sign_at",
    "sign_realization",
    "subresultants",
    "tarski_query",
    "thom_compare",
    "time_step",
    "to_prenex",
    "validate",
]
