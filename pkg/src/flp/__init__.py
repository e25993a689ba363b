"""Interpreter workbench for a first-order functional logic language with
call-time choice and local run-time choice annotations ``rt`` / ``rrt``."""

from .desugar import desugar_rrt, desugar_rt, load_program, rrt_transform
from .engines import ENGINES, compare_engines, reduction_graph, run_engine
from .errors import (
    ArityError, DerivationNotFound, FlpError, LoadError, MalformedTermError,
    ParseError, TransformError,
)
from .letcalc import enumerate_values_let, step_let, trace_derivation
from .pop import crwl_rrt_values, reachable_pvalues, step_b, step_or
from .search import SearchBounds, SearchResult
from .susp import solve
from .syntax import parse_expr, parse_program, print_expr
from .terms import (
    BOTTOM, CApp, FApp, Let, Program, Rule, Var, alpha_normalize, apply_subst,
    free_vars, leq_approx, shell,
)

__all__ = [
    "ENGINES", "BOTTOM", "ArityError", "CApp", "DerivationNotFound", "FApp",
    "FlpError", "Let", "LoadError", "MalformedTermError", "ParseError", "Program",
    "Rule", "SearchBounds", "SearchResult", "TransformError", "Var",
    "alpha_normalize", "apply_subst", "compare_engines", "crwl_rrt_values",
    "desugar_rrt", "desugar_rt", "enumerate_values_let", "free_vars",
    "leq_approx", "load_program", "parse_expr", "parse_program", "print_expr",
    "reachable_pvalues", "reduction_graph", "rrt_transform", "run_engine",
    "shell", "solve", "step_b", "step_let", "step_or", "trace_derivation",
]
