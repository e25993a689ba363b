"""Let-rewriting: sharing made explicit with local bindings.

Six rules, applicable at any position:

* Fapp  -- rewrite ``f?(args)`` with a rule whose patterns match with
  rt-c-term bindings;
* LetIn -- pull an unannotated function application (or a let) out of an
  argument position into a fresh binding;
* Bind  -- substitute a binding whose value is an rt-c-term;
* Elim  -- drop an unused binding;
* Flat  -- float a let out of a let's bound expression.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import DerivationNotFound, MalformedTermError
from .search import SearchBounds, SearchResult, explore
from .syntax import print_expr
from .terms import (
    CApp, Expr, FApp, Let, Position, Program, Var, all_vars, alpha_normalize,
    apply_subst, contains_bottom, fresh_var, free_vars, is_cterm,
    is_rtcterm_quiet, match_params, replace_at, subterms,
)

FAPP, LETIN, BIND, ELIM, FLAT = "Fapp", "LetIn", "Bind", "Elim", "Flat"
PRIORITY = (BIND, ELIM, FLAT, LETIN, FAPP)


@dataclass(frozen=True)
class Step:
    rule: str
    position: Position
    expr: Expr


def _check_state(e: Expr) -> None:
    if contains_bottom(e):
        raise MalformedTermError("_|_ is not allowed in let-rewriting states")


def step_let(e: Expr, p: Program, let_body_first: bool = False) -> list[Step]:
    """Every one-step successor of ``e``.

    Successors come grouped by position in pre-order; ``let_body_first``
    visits a let's body before its bound expression.
    """
    _check_state(e)
    names = all_vars(e)
    out: list[Step] = []
    for pos, sub in subterms(e, let_body_first=let_body_first):
        if isinstance(sub, FApp):
            for rule in p.rules_for(sub.name):
                theta = match_params(rule.params, sub.args, allow_bottom=False)
                if theta is not None:
                    out.append(Step(FAPP, pos, replace_at(e, pos, apply_subst(rule.rhs, theta))))
        if isinstance(sub, (CApp, FApp)):
            for i, arg in enumerate(sub.args):
                if (isinstance(arg, FApp) and not arg.rt) or isinstance(arg, Let):
                    x = fresh_var("X", names)
                    args = sub.args[:i] + (Var(x),) + sub.args[i + 1:]
                    inner = CApp(sub.name, args) if isinstance(sub, CApp) else FApp(sub.name, args, sub.rt)
                    out.append(Step(LETIN, pos, replace_at(e, pos, Let(x, arg, inner))))
        if isinstance(sub, Let):
            body_fv = free_vars(sub.body)
            if is_rtcterm_quiet(sub.bound):
                # Binders are distinct, so substitution never renames here.
                out.append(Step(BIND, pos, replace_at(e, pos, apply_subst(sub.body, {sub.var: sub.bound}))))
            if sub.var not in body_fv:
                out.append(Step(ELIM, pos, replace_at(e, pos, sub.body)))
            if isinstance(sub.bound, Let):
                inner = sub.bound
                y, e2 = inner.var, inner.body
                if y in body_fv:
                    y = fresh_var(y, names | body_fv)
                    e2 = apply_subst(e2, {inner.var: Var(y)})
                flat = Let(y, inner.bound, Let(sub.var, e2, sub.body))
                out.append(Step(FLAT, pos, replace_at(e, pos, flat)))
    return out


def enumerate_values_let(e: Expr, p: Program, b: SearchBounds = SearchBounds(),
                         memo: bool = True, edges: list | None = None) -> SearchResult:
    """Constructor-term values reachable by let-rewriting, breadth first.

    States are identified up to renaming of let binders.
    """
    _check_state(e)

    def successors(s):
        return [alpha_normalize(st.expr) for st in step_let(s, p)]

    def collect(s):
        return s if is_cterm(s) and not free_vars(s) else None

    return explore(alpha_normalize(e), successors, collect, b, edges,
                   close_downwards=False, memo=memo)


@dataclass
class Derivation:
    start: Expr
    steps: list[Step] = field(default_factory=list)

    @property
    def final(self) -> Expr:
        return self.steps[-1].expr if self.steps else self.start

    def __len__(self):
        return len(self.steps)

    def format(self) -> str:
        lines = [f"0. {print_expr(self.start)}"]
        for k, st in enumerate(self.steps, 1):
            lines.append(f"{k}. [{st.rule}@{format_position(st.position)}] {print_expr(st.expr)}")
        return "\n".join(lines)


def format_position(pos: Position) -> str:
    return ".".join(str(i) for i in pos) if pos else "ε"


def _ordered(e: Expr, p: Program) -> list[Step]:
    steps = step_let(e, p, let_body_first=True)
    rank = {name: i for i, name in enumerate(PRIORITY)}
    return sorted(steps, key=lambda st: rank[st.rule])  # stable: keeps position order


def trace_derivation(e: Expr, p: Program, b: SearchBounds = SearchBounds(),
                     target: Expr | None = None) -> Derivation:
    """One derivation under the demonstration strategy.

    Rules are tried in the order Bind, Elim, Flat, LetIn, Fapp; positions in
    pre-order visiting a let's body before its binding; program rules in
    source order.  Without ``target`` the first choice is always taken until
    no rule applies or ``b.max_steps`` is reached.  With ``target`` the same
    order drives a depth-first search for a derivation ending in
    ``target``.
    """
    _check_state(e)
    if target is None:
        d = Derivation(e)
        cur = e
        while len(d.steps) < b.max_steps:
            steps = _ordered(cur, p)
            if not steps:
                break
            d.steps.append(steps[0])
            cur = steps[0].expr
        return d

    goal = alpha_normalize(target)
    best_depth: dict[Expr, int] = {}
    budget = [b.max_states]

    def dfs(cur: Expr, path: list[Step]) -> list[Step] | None:
        key = alpha_normalize(cur)
        if key == goal:
            return path
        if len(path) >= b.max_steps or budget[0] <= 0:
            return None
        if best_depth.get(key, b.max_steps + 1) <= len(path):
            return None
        best_depth[key] = len(path)
        budget[0] -= 1
        for st in _ordered(cur, p):
            found = dfs(st.expr, path + [st])
            if found is not None:
                return found
        return None

    found = dfs(e, [])
    if found is None:
        raise DerivationNotFound(f"no derivation of {print_expr(target)} from "
                                 f"{print_expr(e)} within {b.max_steps} steps")
    return Derivation(e, found)
