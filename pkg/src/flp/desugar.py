"""Elimination of the surface ``rt(e)`` and ``rrt(e)`` annotations.

``rt(e)`` marks every function application inside ``e`` with the rt flag.
``rrt(e)`` is compiled to hatted copies of the program's functions whose
bodies are fully rt-flagged, so that evaluating them under the ordinary
sharing regime behaves like plain term rewriting.
"""

from __future__ import annotations

from .errors import LoadError, TransformError
from .syntax import HAT_SUFFIX, SourceProgram, load_prelude, parse_program
from .terms import (
    FUNCTION, CApp, Expr, FApp, Let, Program, Rrt, Rt, Rule, SymbolInfo, Var,
)


def hat(name: str) -> str:
    return name if name.endswith(HAT_SUFFIX) else name + HAT_SUFFIX


def is_hatted(name: str) -> bool:
    return name.endswith(HAT_SUFFIX)


def desugar_rt(e: Expr) -> Expr:
    """Replace every ``rt(e)`` node by per-application rt flags.

    Nested ``rrt`` nodes inside an rt scope are resolved first.
    """
    return _desugar(e, in_rt=False)


def _desugar(e, in_rt):
    if isinstance(e, Var):
        return e
    if isinstance(e, CApp):
        return CApp(e.name, tuple(_desugar(a, in_rt) for a in e.args))
    if isinstance(e, FApp):
        return FApp(e.name, tuple(_desugar(a, in_rt) for a in e.args), e.rt or in_rt)
    if isinstance(e, Rt):
        return _desugar(e.expr, True)
    if isinstance(e, Rrt):
        return rrt_expr(_desugar(e.expr, False))
    if isinstance(e, Let):
        return Let(e.var, _desugar(e.bound, in_rt), _desugar(e.body, in_rt))
    return e


def rrt_expr(e: Expr) -> Expr:
    """Map every function application to its hatted, rt-flagged copy."""
    if isinstance(e, CApp):
        return CApp(e.name, tuple(rrt_expr(a) for a in e.args))
    if isinstance(e, FApp):
        return FApp(hat(e.name), tuple(rrt_expr(a) for a in e.args), True)
    if isinstance(e, (Rt, Rrt)):
        return rrt_expr(desugar_rt(e))
    return e


def has_rrt(e: Expr) -> bool:
    if isinstance(e, Rrt):
        return True
    if isinstance(e, Rt):
        return has_rrt(e.expr)
    if isinstance(e, (CApp, FApp)):
        return any(has_rrt(a) for a in e.args)
    return False


def _has_surface(e: Expr) -> bool:
    if isinstance(e, (Rt, Rrt)):
        return True
    if isinstance(e, (CApp, FApp)):
        return any(_has_surface(a) for a in e.args)
    return False


def rrt_transform(p: Program) -> Program:
    """Return the program extended with hatted copies of every function.

    Idempotent: a program that already holds hatted copies is returned as is.
    """
    originals = [f for f in p.functions if not is_hatted(f)]
    if originals and all(hat(f) in p.symbols for f in originals):
        return p
    for f in originals:
        if hat(f) in p.symbols:
            raise TransformError(f"symbol {hat(f)!r} already exists")
    symbols = dict(p.symbols)
    hatted = []
    for rule in p.rules:
        if is_hatted(rule.function):
            continue
        name = hat(rule.function)
        symbols[name] = SymbolInfo(name, FUNCTION, rule.arity)
        hatted.append(Rule(name, rule.params, rrt_expr(rule.rhs)))
    return Program(p.rules + tuple(hatted), symbols)


def desugar_rrt(e: Expr, p: Program) -> tuple[Expr, Program]:
    """Desugar a goal; goals mentioning ``rrt`` get the extended program."""
    if has_rrt(e):
        return desugar_rt(e), rrt_transform(p)
    return desugar_rt(e), p


def desugar_program(sp: SourceProgram) -> Program:
    rules = []
    needs_hat = False
    for r in sp.rules:
        if any(_has_surface(prm) for prm in r.params):
            raise LoadError("rt/rrt may not appear in a pattern", r.line, None, r.filename)
        needs_hat = needs_hat or has_rrt(r.rhs)
        rules.append(Rule(r.function, r.params, desugar_rt(r.rhs)))
    program = Program(rules, sp.symbols)
    return rrt_transform(program) if needs_hat else program


def load_program(text: str, filename: str | None = None, prelude: bool = True) -> Program:
    """Parse, validate and desugar a program, merged with the prelude."""
    base = load_prelude() if prelude else None
    return desugar_program(parse_program(text, filename=filename, base=base))
