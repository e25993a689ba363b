"""Term language shared by all engines.

Expressions are immutable and hashable.  Compound nodes cache their hash so
that large state spaces can be deduplicated cheaply.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Mapping, Sequence

from .errors import ArityError, MalformedTermError

CONSTRUCTOR = "constructor"
FUNCTION = "function"

Position = tuple[int, ...]


class Expr:
    __slots__ = ()


_NO_VARS: frozenset = frozenset()


_setattr = object.__setattr__


def _init_flags(node, h: int, rtc: bool) -> None:
    """Cache hash, variables and classification flags of an application."""
    names = _NO_VARS
    has_let = False
    rtc_bottom = rtc
    for a in node.args:
        v = a.var_names
        if v:
            names = names | v if names else v
        if a.has_let:
            has_let = True
        if rtc and not a.rtc:
            rtc = False
        if rtc_bottom and not a.rtc_bottom:
            rtc_bottom = False
    _setattr(node, "_hash", h)
    _setattr(node, "var_names", names)
    _setattr(node, "has_let", has_let)
    _setattr(node, "rtc", rtc)
    _setattr(node, "rtc_bottom", rtc_bottom)


@dataclass(frozen=True, slots=True)
class Var(Expr):
    name: str

    @property
    def var_names(self) -> frozenset:
        return frozenset((self.name,))

    has_let = False
    rtc = True
    rtc_bottom = True


@dataclass(frozen=True, eq=False)
class CApp(Expr):
    name: str
    args: tuple[Expr, ...] = ()
    _hash: int = field(init=False, repr=False, compare=False)
    var_names: frozenset = field(init=False, repr=False, compare=False)
    has_let: bool = field(init=False, repr=False, compare=False)
    rtc: bool = field(init=False, repr=False, compare=False)
    rtc_bottom: bool = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        _init_flags(self, hash((1, self.name, self.args)), True)

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        if self is other:
            return True
        return (type(other) is CApp and self._hash == other._hash
                and self.name == other.name and self.args == other.args)


@dataclass(frozen=True, eq=False)
class FApp(Expr):
    name: str
    args: tuple[Expr, ...] = ()
    rt: bool = False
    _hash: int = field(init=False, repr=False, compare=False)
    var_names: frozenset = field(init=False, repr=False, compare=False)
    has_let: bool = field(init=False, repr=False, compare=False)
    rtc: bool = field(init=False, repr=False, compare=False)
    rtc_bottom: bool = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        _init_flags(self, hash((2, self.name, self.args, self.rt)), self.rt)

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        if self is other:
            return True
        return (type(other) is FApp and self._hash == other._hash
                and self.name == other.name and self.rt == other.rt
                and self.args == other.args)


@dataclass(frozen=True, eq=False)
class Let(Expr):
    var: str
    bound: Expr
    body: Expr
    _hash: int = field(init=False, repr=False, compare=False)
    var_names: frozenset = field(init=False, repr=False, compare=False)
    has_let = True
    rtc = False
    rtc_bottom = False

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash((3, self.var, self.bound, self.body)))
        object.__setattr__(self, "var_names",
                           self.bound.var_names | self.body.var_names | {self.var})

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        if self is other:
            return True
        return (type(other) is Let and self._hash == other._hash
                and self.var == other.var and self.bound == other.bound
                and self.body == other.body)


@dataclass(frozen=True, slots=True)
class Bottom(Expr):
    var_names = _NO_VARS
    has_let = False
    rtc = False
    rtc_bottom = True


BOTTOM = Bottom()


# Surface annotations; removed by desugaring before any engine runs.

@dataclass(frozen=True, slots=True)
class Rt(Expr):
    expr: Expr

    @property
    def var_names(self) -> frozenset:
        return self.expr.var_names

    @property
    def has_let(self) -> bool:
        return self.expr.has_let


@dataclass(frozen=True, slots=True)
class Rrt(Expr):
    expr: Expr

    @property
    def var_names(self) -> frozenset:
        return self.expr.var_names

    @property
    def has_let(self) -> bool:
        return self.expr.has_let


@dataclass(frozen=True)
class SymbolInfo:
    name: str
    kind: str
    arity: int


@dataclass(frozen=True)
class Rule:
    function: str
    params: tuple[Expr, ...]
    rhs: Expr

    @property
    def arity(self) -> int:
        return len(self.params)


class Program:
    """Rules grouped by function, in source order, plus a symbol table."""

    def __init__(self, rules: Sequence[Rule], symbols: Mapping[str, SymbolInfo]):
        self.rules = tuple(rules)
        self.symbols = dict(symbols)
        index: dict[str, list[Rule]] = {}
        for rule in self.rules:
            index.setdefault(rule.function, []).append(rule)
        self._index = {name: tuple(rs) for name, rs in index.items()}

    @classmethod
    def from_rules(cls, rules: Sequence[Rule]) -> "Program":
        """Build a program, inferring the symbol table from the rules."""
        symbols: dict[str, SymbolInfo] = {}
        functions = {r.function for r in rules}

        def note(name, kind, arity):
            old = symbols.get(name)
            if old is None:
                symbols[name] = SymbolInfo(name, kind, arity)
            elif old.kind != kind or old.arity != arity:
                raise ArityError(f"inconsistent use of symbol {name!r}")

        def visit(e):
            if isinstance(e, (CApp, FApp)):
                kind = FUNCTION if e.name in functions else CONSTRUCTOR
                if isinstance(e, FApp) != (kind == FUNCTION):
                    raise MalformedTermError(f"{e.name!r} used as both constructor and function")
                note(e.name, kind, len(e.args))
                for a in e.args:
                    visit(a)
            elif isinstance(e, Let):
                visit(e.bound)
                visit(e.body)

        for r in rules:
            note(r.function, FUNCTION, len(r.params))
        for r in rules:
            for p in r.params:
                visit(p)
            visit(r.rhs)
        return cls(rules, symbols)

    def rules_for(self, name: str) -> tuple[Rule, ...]:
        return self._index.get(name, ())

    @property
    def functions(self) -> list[str]:
        return list(self._index)

    def is_function(self, name: str) -> bool:
        info = self.symbols.get(name)
        return info is not None and info.kind == FUNCTION

    def __eq__(self, other):
        return isinstance(other, Program) and self.rules == other.rules

    def __hash__(self):
        return hash(self.rules)

    def __repr__(self):
        return f"Program({len(self.rules)} rules)"


# ---------------------------------------------------------------- predicates

def is_rtcterm(e: Expr, allow_bottom: bool = False) -> bool:
    """True for variables, constructor applications and rt-flagged function
    applications whose arguments are themselves rt-c-terms."""
    if isinstance(e, Var):
        return True
    if isinstance(e, CApp) or (isinstance(e, FApp) and e.rt):
        return all(is_rtcterm(a, allow_bottom) for a in e.args)
    if isinstance(e, FApp):
        return False
    if isinstance(e, Bottom):
        return allow_bottom
    raise MalformedTermError(f"unexpected node in rt-c-term test: {type(e).__name__}")


def is_rtcterm_quiet(e: Expr, allow_bottom: bool = False) -> bool:
    """Like :func:`is_rtcterm` but answers ``False`` on let nodes."""
    return e.rtc_bottom if allow_bottom else e.rtc


def is_cterm(e: Expr) -> bool:
    """Plain constructor term: variables and constructors only."""
    if isinstance(e, Var):
        return True
    if isinstance(e, CApp):
        return all(is_cterm(a) for a in e.args)
    return False


def is_partial_value(e: Expr) -> bool:
    if isinstance(e, (Var, Bottom)):
        return True
    if isinstance(e, CApp):
        return all(is_partial_value(a) for a in e.args)
    return False


def contains_bottom(e: Expr) -> bool:
    if isinstance(e, Bottom):
        return True
    if isinstance(e, (CApp, FApp)):
        return any(contains_bottom(a) for a in e.args)
    if isinstance(e, Let):
        return contains_bottom(e.bound) or contains_bottom(e.body)
    if isinstance(e, (Rt, Rrt)):
        return contains_bottom(e.expr)
    return False


def contains_let(e: Expr) -> bool:
    return e.has_let


# ------------------------------------------------------------------ matching

def match_params(params: Sequence[Expr], args: Sequence[Expr],
                 allow_bottom: bool = False) -> dict[str, Expr] | None:
    """Match linear constructor patterns against arguments.

    Variables bind only to rt-c-terms; ``None`` signals failure.
    """
    if len(params) != len(args):
        raise ArityError(f"{len(params)} patterns against {len(args)} arguments")
    theta: dict[str, Expr] = {}
    for p, a in zip(params, args):
        if not _match(p, a, theta, allow_bottom):
            return None
    return theta


def _match(p: Expr, a: Expr, theta: dict, allow_bottom: bool) -> bool:
    if isinstance(p, Var):
        if not is_rtcterm_quiet(a, allow_bottom):
            return False
        theta[p.name] = a
        return True
    if isinstance(p, CApp):
        if not isinstance(a, CApp) or a.name != p.name or len(a.args) != len(p.args):
            return False
        return all(_match(q, b, theta, allow_bottom) for q, b in zip(p.args, a.args))
    raise MalformedTermError(f"not a pattern: {p!r}")


def match_ordinary(params: Sequence[Expr], args: Sequence[Expr]) -> dict[str, Expr] | None:
    """Classical matching: variables bind to arbitrary expressions."""
    theta: dict[str, Expr] = {}

    def go(p, a):
        if isinstance(p, Var):
            theta[p.name] = a
            return True
        if not isinstance(a, CApp) or a.name != p.name or len(a.args) != len(p.args):
            return False
        return all(go(q, b) for q, b in zip(p.args, a.args))

    if len(params) != len(args):
        raise ArityError(f"{len(params)} patterns against {len(args)} arguments")
    return theta if all(go(p, a) for p, a in zip(params, args)) else None


# -------------------------------------------------------------- substitution

def free_vars(e: Expr) -> set[str]:
    if not e.has_let:
        return set(e.var_names)
    out: set[str] = set()
    _free(e, frozenset(), out)
    return out


def _free(e, bound, out):
    if not e.has_let:
        out.update(e.var_names - bound)
    elif isinstance(e, Var):
        if e.name not in bound:
            out.add(e.name)
    elif isinstance(e, (CApp, FApp)):
        for a in e.args:
            _free(a, bound, out)
    elif isinstance(e, Let):
        _free(e.bound, bound, out)
        _free(e.body, bound | {e.var}, out)
    elif isinstance(e, (Rt, Rrt)):
        _free(e.expr, bound, out)


def bound_vars(e: Expr) -> set[str]:
    out: set[str] = set()
    for _, sub in subterms(e):
        if isinstance(sub, Let):
            out.add(sub.var)
    return out


def binders(e: Expr) -> list[str]:
    """Let binders in pre-order, with repetitions."""
    return [sub.var for _, sub in subterms(e) if isinstance(sub, Let)]


def all_vars(e: Expr) -> set[str]:
    """Every variable name occurring in ``e``, binders included."""
    return set(e.var_names)


def fresh_var(hint: str, avoid) -> str:
    """First of ``hint``, ``hint1``, ``hint2``, ... not in ``avoid``."""
    if hint not in avoid:
        return hint
    base = hint.rstrip("0123456789") or hint
    i = 1
    while f"{base}{i}" in avoid:
        i += 1
    return f"{base}{i}"


def apply_subst(e: Expr, theta: Mapping[str, Expr]) -> Expr:
    """Simultaneous capture-avoiding substitution."""
    if not theta:
        return e
    image_fv: set[str] = set()
    for v in theta.values():
        image_fv |= free_vars(v)
    return _subst(e, dict(theta), image_fv)


def _subst(e, theta, image_fv):
    if not (e.var_names & theta.keys()):
        return e
    if isinstance(e, Var):
        return theta.get(e.name, e)
    if isinstance(e, CApp):
        return CApp(e.name, tuple(_subst(a, theta, image_fv) for a in e.args))
    if isinstance(e, FApp):
        return FApp(e.name, tuple(_subst(a, theta, image_fv) for a in e.args), e.rt)
    if isinstance(e, Let):
        bound = _subst(e.bound, theta, image_fv)
        inner = {k: v for k, v in theta.items() if k != e.var}
        var = e.var
        if var in image_fv and inner:
            var = fresh_var(var, image_fv | all_vars(e.body) | set(inner))
            inner[e.var] = Var(var)
        body = _subst(e.body, inner, image_fv) if inner else e.body
        return Let(var, bound, body)
    if isinstance(e, Rt):
        return Rt(_subst(e.expr, theta, image_fv))
    if isinstance(e, Rrt):
        return Rrt(_subst(e.expr, theta, image_fv))
    return e


def alpha_normalize(e: Expr) -> Expr:
    """Rename let binders to ``_1``, ``_2``, ... in pre-order."""
    if not contains_let(e):
        return e
    avoid = free_vars(e)
    counter = [0]

    def next_name():
        while True:
            counter[0] += 1
            name = f"_{counter[0]}"
            if name not in avoid:
                return name

    def go(t, env):
        if not t.has_let and not (t.var_names & env.keys()):
            return t
        if isinstance(t, Var):
            return Var(env.get(t.name, t.name))
        if isinstance(t, CApp):
            return CApp(t.name, tuple(go(a, env) for a in t.args))
        if isinstance(t, FApp):
            return FApp(t.name, tuple(go(a, env) for a in t.args), t.rt)
        if isinstance(t, Let):
            bound = go(t.bound, env)
            name = next_name()
            inner = {k: v for k, v in env.items() if k != t.var}
            if name != t.var:
                inner[t.var] = name
            body = go(t.body, inner)
            if name == t.var and bound is t.bound and body is t.body:
                return t
            return Let(name, bound, body)
        return t

    return go(e, {})


# ------------------------------------------------------------------ positions

def children(e: Expr) -> tuple[Expr, ...]:
    if isinstance(e, (CApp, FApp)):
        return e.args
    if isinstance(e, Let):
        return (e.bound, e.body)
    if isinstance(e, (Rt, Rrt)):
        return (e.expr,)
    return ()


def subterms(e: Expr, pos: Position = (), let_body_first: bool = False
             ) -> Iterator[tuple[Position, Expr]]:
    """Pre-order traversal yielding ``(position, subterm)``.

    A let node's children are numbered 0 (bound) and 1 (body).
    """
    yield pos, e
    kids = children(e)
    order = range(len(kids))
    if let_body_first and isinstance(e, Let):
        order = (1, 0)
    for i in order:
        yield from subterms(kids[i], pos + (i,), let_body_first)


def subterm_at(e: Expr, pos: Position) -> Expr:
    for i in pos:
        e = children(e)[i]
    return e


def replace_at(e: Expr, pos: Position, new: Expr) -> Expr:
    if not pos:
        return new
    i, rest = pos[0], pos[1:]
    if isinstance(e, CApp):
        args = list(e.args)
        args[i] = replace_at(args[i], rest, new)
        return CApp(e.name, tuple(args))
    if isinstance(e, FApp):
        args = list(e.args)
        args[i] = replace_at(args[i], rest, new)
        return FApp(e.name, tuple(args), e.rt)
    if isinstance(e, Let):
        if i == 0:
            return Let(e.var, replace_at(e.bound, rest, new), e.body)
        return Let(e.var, e.bound, replace_at(e.body, rest, new))
    if isinstance(e, Rt):
        return Rt(replace_at(e.expr, rest, new))
    if isinstance(e, Rrt):
        return Rrt(replace_at(e.expr, rest, new))
    raise IndexError(f"no position {pos} in leaf {e!r}")


def size(e: Expr) -> int:
    return 1 + sum(size(c) for c in children(e))


def depth(e: Expr) -> int:
    kids = children(e)
    return 1 + (max(depth(c) for c in kids) if kids else 0)


# ----------------------------------------------------------- partial values

def shell(e: Expr) -> Expr:
    """Partial value of ``e``: function applications become bottom."""
    if isinstance(e, Var):
        return e
    if isinstance(e, CApp):
        return CApp(e.name, tuple(shell(a) for a in e.args))
    if isinstance(e, (FApp, Bottom)):
        return BOTTOM
    raise MalformedTermError(f"shell of {type(e).__name__} is undefined")


def leq_approx(t1: Expr, t2: Expr) -> bool:
    """Approximation order: ``t1`` is ``t2`` with some subterms cut to bottom."""
    if isinstance(t1, Bottom):
        return True
    if isinstance(t1, Var):
        return t1 == t2
    if isinstance(t1, CApp):
        return (isinstance(t2, CApp) and t1.name == t2.name
                and len(t1.args) == len(t2.args)
                and all(leq_approx(a, b) for a, b in zip(t1.args, t2.args)))
    return False


def down_set(t: Expr) -> set[Expr]:
    """All partial values below ``t``."""
    if isinstance(t, CApp):
        out = {BOTTOM}
        combos = [()]
        for a in t.args:
            below = down_set(a)
            combos = [c + (b,) for c in combos for b in below]
        out.update(CApp(t.name, c) for c in combos)
        return out
    if isinstance(t, Bottom):
        return {BOTTOM}
    return {BOTTOM, t}


def strip_rt(e: Expr) -> Expr:
    if isinstance(e, CApp):
        return CApp(e.name, tuple(strip_rt(a) for a in e.args))
    if isinstance(e, FApp):
        return FApp(e.name, tuple(strip_rt(a) for a in e.args), False)
    if isinstance(e, Let):
        return Let(e.var, strip_rt(e.bound), strip_rt(e.body))
    return e
