"""One-step reduction with bottom guessing, used as a value oracle.

Two rules drive the relation: (OR) rewrites any function application whose
arguments match a rule with rt-c-term bindings (bottom allowed), and (B)
replaces a subterm by bottom, standing for a value that is never needed.
The module also hosts ordinary (unrestricted) term rewriting, which gives the
reference meaning of ``rrt``.
"""

from __future__ import annotations

from .errors import MalformedTermError
from .search import SearchBounds, SearchResult, explore
from .terms import (
    BOTTOM, Bottom, CApp, Expr, FApp, Let, Program, apply_subst, contains_let,
    down_set, is_partial_value, match_ordinary, match_params, replace_at,
    shell, strip_rt, subterms,
)


def _no_let(e: Expr) -> None:
    if contains_let(e):
        raise MalformedTermError("let is not allowed in pop-calculus states")


def _rebuild(e: Expr, i: int, new: Expr) -> Expr:
    args = e.args[:i] + (new,) + e.args[i + 1:]
    return CApp(e.name, args) if isinstance(e, CApp) else FApp(e.name, args, e.rt)


def _or_successors(e: Expr, p: Program, out: list) -> None:
    if not isinstance(e, (CApp, FApp)):
        return
    if isinstance(e, FApp):
        for rule in p.rules_for(e.name):
            theta = match_params(rule.params, e.args, allow_bottom=True)
            if theta is not None:
                out.append(apply_subst(rule.rhs, theta))
    for i, a in enumerate(e.args):
        inner: list = []
        _or_successors(a, p, inner)
        out.extend(_rebuild(e, i, x) for x in inner)


def _b_successors(e: Expr, unrestricted: bool, out: list) -> None:
    if isinstance(e, Bottom):
        return
    if unrestricted or isinstance(e, FApp):
        out.append(BOTTOM)
    if isinstance(e, (CApp, FApp)):
        for i, a in enumerate(e.args):
            inner: list = []
            _b_successors(a, unrestricted, inner)
            out.extend(_rebuild(e, i, x) for x in inner)


def step_or(e: Expr, p: Program) -> list[Expr]:
    """All (OR) successors, one per redex position and applicable rule.

    Successors are listed in pre-order of the redex position.
    """
    _no_let(e)
    out: list[Expr] = []
    _or_successors(e, p, out)
    return out


def step_b(e: Expr, unrestricted: bool = False) -> list[Expr]:
    """(B) successors.

    By default only function-rooted subterms are cut; ``unrestricted``
    cuts any subterm other than bottom itself.
    """
    _no_let(e)
    out: list[Expr] = []
    _b_successors(e, unrestricted, out)
    return out


def reachable_pvalues(e: Expr, p: Program, b: SearchBounds = SearchBounds(),
                      unrestricted_b: bool = False, edges: list | None = None,
                      close_downwards: bool = True) -> SearchResult:
    """Downward-closed set of partial values reachable from ``e``.

    With ``close_downwards=False`` only the partial values met as states are
    returned; the closure of a large tuple can be far bigger than the search.
    """
    _no_let(e)

    def successors(s):
        return step_or(s, p) + step_b(s, unrestricted_b)

    return explore(e, successors, lambda s: s if is_partial_value(s) else None, b, edges,
                   close_downwards=close_downwards)


def rewrite_ordinary_step(e: Expr, p: Program) -> list[Expr]:
    """Plain term rewriting: pattern variables bind to any expression."""
    _no_let(e)
    out = []
    for pos, sub in subterms(e):
        if not isinstance(sub, FApp):
            continue
        for rule in p.rules_for(sub.name):
            theta = match_ordinary(rule.params, sub.args)
            if theta is not None:
                out.append(replace_at(e, pos, strip_rt(apply_subst(rule.rhs, theta))))
    return out


def crwl_rrt_values(e: Expr, p: Program, b: SearchBounds = SearchBounds(),
                    edges: list | None = None) -> SearchResult:
    """Reference values of ``rrt(e)``: shells of everything ordinary
    rewriting reaches, closed downwards.  rt flags are ignored."""
    _no_let(e)
    return explore(strip_rt(e), lambda s: rewrite_ordinary_step(s, p), shell, b, edges)
