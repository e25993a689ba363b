"""Concrete syntax: parsing and printing of programs and goals.

Programs have one rule per line::

    coin -> 0
    f(X) -> g(X, coin)
    X | Y -> X          % infix sugar for alt(X, Y)

Uppercase-initial identifiers are variables.  Symbols heading some rule are
functions; every other lowercase symbol is a constructor.  Literal sugar:
decimal numerals are Peano terms over ``z``/``s``, ``[a, b]`` and ``[H | T]``
are lists over ``cons``/``nil``, ``"ab"`` is a list of character
constructors, and ``(a, b)`` is a tuple.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from importlib import resources
from typing import Mapping

from .errors import LoadError, ParseError
from .terms import (
    BOTTOM, CONSTRUCTOR, FUNCTION, Bottom, CApp, Expr, FApp, Let, Rrt, Rt,
    SymbolInfo, Var,
)

ZERO, SUCC, NIL, CONS = "z", "s", "nil", "cons"
ALT, CONCAT = "alt", "concat"
RESERVED = {"rt", "rrt", "let", "in"}
HAT_SUFFIX = "$rrt"


def tuple_name(n: int) -> str:
    return "(" + "," * (n - 1) + ")"


def char_name(c: str) -> str:
    return f"'{c}'"


def is_tuple_name(name: str) -> bool:
    return name.startswith("(") and name.endswith(")")


def is_char_name(name: str) -> bool:
    return len(name) == 3 and name[0] == name[2] == "'"


def builtin_arity(name: str) -> int | None:
    """Arity of a constructor the literal sugar may produce, else ``None``."""
    if name in (ZERO, NIL):
        return 0
    if name == SUCC:
        return 1
    if name == CONS:
        return 2
    if is_tuple_name(name):
        return len(name) - 1
    if is_char_name(name):
        return 0
    return None


# --------------------------------------------------------------------- lexer

_TOKEN_RE = re.compile(r"""
    (?P<ws>[ \t\r]+)
  | (?P<comment>%[^\n]*)
  | (?P<bottom>_\|_)
  | (?P<arrow>->)
  | (?P<concat>\+\+)
  | (?P<rtmark>\^rt\b)
  | (?P<punct>[()\[\],|.=])
  | (?P<int>[0-9]+)
  | (?P<string>"(?:[^"\\\n]|\\.)*")
  | (?P<char>'(?:[^'\\\n]|\\.)')
  | (?P<var>[A-Z_][A-Za-z0-9_]*)
  | (?P<ident>[a-z][A-Za-z0-9_]*)
""", re.VERBOSE)


@dataclass
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(line_text: str, lineno: int, filename: str | None = None) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(line_text):
        m = _TOKEN_RE.match(line_text, pos)
        if m is None:
            raise ParseError(f"unexpected character {line_text[pos]!r}", lineno, pos + 1, filename)
        kind = m.lastgroup
        if kind not in ("ws", "comment"):
            text = m.group()
            if kind == "punct":
                kind = text
            tokens.append(Token(kind, text, lineno, pos + 1))
        pos = m.end()
    tokens.append(Token("eol", "", lineno, len(line_text) + 1))
    return tokens


def _unescape(body: str) -> str:
    return re.sub(r"\\(.)", lambda m: {"n": "\n", "t": "\t"}.get(m.group(1), m.group(1)), body)


# ------------------------------------------------------------ raw syntax tree
# Raw nodes are not yet classified into constructors and functions.

@dataclass
class RawVar:
    name: str
    line: int
    col: int


@dataclass
class RawSym:
    name: str
    args: list
    rt: bool
    line: int
    col: int
    force: str | None = None  # CONSTRUCTOR for literal sugar, FUNCTION for | and ++


@dataclass
class RawWrap:
    kind: str  # "rt" or "rrt"
    expr: object
    line: int
    col: int


@dataclass
class RawLet:
    var: str
    bound: object
    body: object
    line: int
    col: int


@dataclass
class RawBottom:
    line: int
    col: int


class _Parser:
    def __init__(self, tokens: list[Token], filename: str | None):
        self.toks = tokens
        self.i = 0
        self.filename = filename

    def peek(self) -> Token:
        return self.toks[self.i]

    def next(self) -> Token:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def error(self, msg: str, tok: Token | None = None):
        tok = tok or self.peek()
        raise ParseError(msg, tok.line, tok.col, self.filename)

    def expect(self, kind: str) -> Token:
        tok = self.peek()
        if tok.kind != kind:
            found = tok.text or "end of line"
            self.error(f"expected {kind!r}, found {found!r}")
        return self.next()

    def expr(self):
        left = self.cat()
        tok = self.peek()
        if tok.kind == "|":
            self.next()
            right = self.expr()
            return RawSym(ALT, [left, right], False, tok.line, tok.col, FUNCTION)
        return left

    def cat(self):
        left = self.atom()
        tok = self.peek()
        if tok.kind == "concat":
            self.next()
            right = self.cat()
            return RawSym(CONCAT, [left, right], False, tok.line, tok.col, FUNCTION)
        return left

    def args(self) -> list:
        self.expect("(")
        out = [self.expr()]
        while self.peek().kind == ",":
            self.next()
            out.append(self.expr())
        self.expect(")")
        return out

    def atom(self):
        tok = self.next()
        k = tok.kind
        if k == "bottom":
            return RawBottom(tok.line, tok.col)
        if k == "int":
            node = RawSym(ZERO, [], False, tok.line, tok.col, CONSTRUCTOR)
            for _ in range(int(tok.text)):
                node = RawSym(SUCC, [node], False, tok.line, tok.col, CONSTRUCTOR)
            return node
        if k == "string":
            chars = _unescape(tok.text[1:-1])
            return self._list([RawSym(char_name(c), [], False, tok.line, tok.col, CONSTRUCTOR)
                               for c in chars], None, tok)
        if k == "char":
            return RawSym(char_name(_unescape(tok.text[1:-1])), [], False,
                          tok.line, tok.col, CONSTRUCTOR)
        if k == "[":
            items, tail = [], None
            if self.peek().kind != "]":
                items.append(self.cat())
                while self.peek().kind == ",":
                    self.next()
                    items.append(self.cat())
                if self.peek().kind == "|":
                    self.next()
                    tail = self.cat()
            self.expect("]")
            return self._list(items, tail, tok)
        if k == "(":
            items = [self.expr()]
            while self.peek().kind == ",":
                self.next()
                items.append(self.expr())
            self.expect(")")
            if len(items) == 1:
                return items[0]
            return RawSym(tuple_name(len(items)), items, False, tok.line, tok.col, CONSTRUCTOR)
        if k == "var":
            return RawVar(tok.text, tok.line, tok.col)
        if k == "ident":
            if tok.text in ("rt", "rrt"):
                if self.peek().kind != "(":
                    self.error(f"{tok.text!r} must be applied to one argument")
                args = self.args()
                if len(args) != 1:
                    self.error(f"{tok.text!r} takes exactly one argument", tok)
                return RawWrap(tok.text, args[0], tok.line, tok.col)
            if tok.text == "let":
                var = self.expect("var").text
                self.expect("=")
                bound = self.expr()
                kw = self.peek()
                if kw.kind != "ident" or kw.text != "in":
                    self.error("expected 'in'")
                self.next()
                return RawLet(var, bound, self.expr(), tok.line, tok.col)
            if tok.text in RESERVED:
                self.error(f"reserved word {tok.text!r}", tok)
            rt = False
            if self.peek().kind == "rtmark":
                self.next()
                rt = True
            args = self.args() if self.peek().kind == "(" else []
            return RawSym(tok.text, args, rt, tok.line, tok.col)
        self.error(f"unexpected {tok.text or 'end of line'!r}", tok)

    def _list(self, items, tail, tok):
        node = tail if tail is not None else RawSym(NIL, [], False, tok.line, tok.col, CONSTRUCTOR)
        for item in reversed(items):
            node = RawSym(CONS, [item, node], False, tok.line, tok.col, CONSTRUCTOR)
        return node


# ------------------------------------------------------------ classification

@dataclass
class SourceRule:
    function: str
    params: tuple[Expr, ...]
    rhs: Expr
    line: int | None = None
    filename: str | None = None


@dataclass
class SourceProgram:
    """Parsed and validated rules, still carrying surface rt/rrt nodes."""

    rules: list[SourceRule]
    symbols: dict[str, SymbolInfo] = field(default_factory=dict)
    filename: str | None = None

    @property
    def functions(self) -> set[str]:
        return {n for n, s in self.symbols.items() if s.kind == FUNCTION}


class _Resolver:
    def __init__(self, symbols: dict[str, SymbolInfo], functions: set[str],
                 filename: str | None, strict: bool, allow_let: bool = False):
        self.allow_let = allow_let
        self.symbols = symbols
        self.functions = functions
        self.filename = filename
        self.strict = strict  # unknown constructors are errors

    def err(self, msg, node):
        raise LoadError(msg, node.line, node.col, self.filename)

    def resolve(self, raw, in_pattern: bool = False) -> Expr:
        if isinstance(raw, RawVar):
            return Var(raw.name)
        if isinstance(raw, RawBottom):
            return BOTTOM
        if isinstance(raw, RawLet):
            if not self.allow_let or in_pattern:
                self.err("let is only allowed in let-calculus states", raw)
            return Let(raw.var, self.resolve(raw.bound), self.resolve(raw.body))
        if isinstance(raw, RawWrap):
            inner = self.resolve(raw.expr, in_pattern)
            return Rt(inner) if raw.kind == "rt" else Rrt(inner)
        name = raw.name
        is_fun = name in self.functions
        if raw.force == FUNCTION and not is_fun:
            self.err(f"{'|' if name == ALT else '++'} requires a definition of {name!r}"
                     " (missing prelude?)", raw)
        if raw.force == CONSTRUCTOR and is_fun:
            self.err(f"{name!r} is a built-in constructor and cannot be defined", raw)
        args = tuple(self.resolve(a, in_pattern) for a in raw.args)
        if is_fun:
            info = self.symbols[name]
            if info.arity != len(args):
                self.err(f"function {name!r} expects {info.arity} arguments, got {len(args)}", raw)
            if in_pattern:
                self.err(f"function symbol {name!r} in a pattern", raw)
            return FApp(name, args, raw.rt)
        if raw.rt:
            self.err(f"constructor {name!r} cannot carry ^rt", raw)
        info = self.symbols.get(name)
        if info is None:
            if self.strict and builtin_arity(name) is None:
                self.err(f"unknown symbol {name!r}", raw)
            self.symbols[name] = SymbolInfo(name, CONSTRUCTOR, len(args))
        elif info.arity != len(args):
            self.err(f"constructor {name!r} used with arity {len(args)}, "
                     f"previously {info.arity}", raw)
        expected = builtin_arity(name)
        if expected is not None and expected != len(args):
            self.err(f"built-in constructor {name!r} has arity {expected}", raw)
        return CApp(name, args)


def _surface_vars(e: Expr) -> list[str]:
    """Variable occurrences, in order, looking through surface nodes."""
    out = []

    def go(t):
        if isinstance(t, Var):
            out.append(t.name)
        elif isinstance(t, (CApp, FApp)):
            for a in t.args:
                go(a)
        elif isinstance(t, (Rt, Rrt)):
            go(t.expr)
    go(e)
    return out


def _split_lines(text: str, filename):
    for lineno, line in enumerate(text.splitlines(), 1):
        tokens = tokenize(line, lineno, filename)
        if len(tokens) == 1:
            continue
        if tokens[-2].kind == ".":
            del tokens[-2]
        yield lineno, tokens


def parse_program(text: str, filename: str | None = None,
                  base: SourceProgram | None = None) -> SourceProgram:
    """Parse and validate a program.

    Rules of ``base`` (typically the prelude) are included, except for
    functions the new text redefines.
    """
    raw_rules = []
    for lineno, tokens in _split_lines(text, filename):
        p = _Parser(tokens, filename)
        lhs = p.expr()
        p.expect("arrow")
        rhs = p.expr()
        if p.peek().kind != "eol":
            p.error(f"unexpected {p.peek().text!r} after rule")
        if not isinstance(lhs, RawSym) or lhs.force == CONSTRUCTOR:
            tok = tokens[0]
            raise ParseError("rule left-hand side must be a function application",
                             tok.line, tok.col, filename)
        if lhs.rt:
            raise ParseError("^rt is not allowed on a rule head", lhs.line, lhs.col, filename)
        if lhs.name in RESERVED:
            raise ParseError(f"reserved word {lhs.name!r}", lhs.line, lhs.col, filename)
        raw_rules.append((lineno, lhs, rhs))

    defined: dict[str, int] = {}
    for lineno, lhs, _ in raw_rules:
        if builtin_arity(lhs.name) is not None:
            raise LoadError(f"{lhs.name!r} is a built-in constructor and cannot be defined",
                            lineno, lhs.col, filename)
        if lhs.name in defined and defined[lhs.name] != len(lhs.args):
            raise LoadError(f"function {lhs.name!r} defined with {len(lhs.args)} parameters, "
                            f"previously {defined[lhs.name]}", lineno, lhs.col, filename)
        defined.setdefault(lhs.name, len(lhs.args))

    symbols: dict[str, SymbolInfo] = {}
    kept: list[SourceRule] = []
    if base is not None:
        kept = [r for r in base.rules if r.function not in defined]
        symbols = {n: s for n, s in base.symbols.items()
                   if not (s.kind == FUNCTION and n in defined)}
        for name in defined:
            info = base.symbols.get(name)
            if info is not None and info.kind == CONSTRUCTOR:
                raise LoadError(f"{name!r} is a constructor of the prelude", filename=filename)
    for name, arity in defined.items():
        symbols[name] = SymbolInfo(name, FUNCTION, arity)
    functions = {n for n, s in symbols.items() if s.kind == FUNCTION}
    resolver = _Resolver(symbols, functions, filename, strict=False)

    rules = list(kept)
    for lineno, lhs, rhs_raw in raw_rules:
        params = tuple(resolver.resolve(a, in_pattern=True) for a in lhs.args)
        rhs = resolver.resolve(rhs_raw)
        seen: set[str] = set()
        for v in (v for prm in params for v in _surface_vars(prm)):
            if v in seen:
                raise LoadError(f"variable {v} occurs twice in the rule head (patterns must be linear)",
                                lineno, lhs.col, filename)
            seen.add(v)
        extra = sorted(set(_surface_vars(rhs)) - seen)
        if extra:
            raise LoadError(f"extra variable(s) {', '.join(extra)} in right-hand side",
                            lineno, lhs.col, filename)
        if _contains_bottom_surface(rhs) or any(_contains_bottom_surface(p) for p in params):
            raise LoadError("_|_ may not appear in programs", lineno, lhs.col, filename)
        rules.append(SourceRule(lhs.name, params, rhs, lineno, filename))
    return SourceProgram(rules, symbols, filename)


def _contains_bottom_surface(e: Expr) -> bool:
    if isinstance(e, Bottom):
        return True
    if isinstance(e, (CApp, FApp)):
        return any(_contains_bottom_surface(a) for a in e.args)
    if isinstance(e, (Rt, Rrt)):
        return _contains_bottom_surface(e.expr)
    return False


def parse_expr(text: str, symbols: Mapping[str, SymbolInfo] | object = None, *,
               allow_vars: bool = False, allow_bottom: bool = False) -> Expr:
    """Parse a goal expression against a symbol table (or a program).

    ``allow_vars`` also admits ``let X = e in e'`` so that let-calculus states
    printed by :func:`print_expr` can be read back.
    """
    table = getattr(symbols, "symbols", symbols) or {}
    tokens = tokenize(text.strip(), 1)
    p = _Parser(tokens, "<goal>")
    raw = p.expr()
    if p.peek().kind != "eol":
        p.error(f"unexpected {p.peek().text!r}")
    functions = {n for n, s in table.items() if s.kind == FUNCTION}
    resolver = _Resolver(dict(table), functions, "<goal>", strict=True, allow_let=allow_vars)
    e = resolver.resolve(raw)
    if not allow_vars:
        fv = sorted(set(_surface_vars(e)))
        if fv:
            raise LoadError(f"free variable(s) {', '.join(fv)} in goal (goals must be ground)",
                            filename="<goal>")
    if not allow_bottom and _contains_bottom_surface(e):
        raise LoadError("_|_ is not allowed in goals", filename="<goal>")
    return e


# ------------------------------------------------------------------ printing

def display_name(name: str) -> str:
    if name.endswith(HAT_SUFFIX):
        base = name[: -len(HAT_SUFFIX)]
        return base[0] + "̂" + base[1:]
    return name


def _numeral(e: Expr) -> int | None:
    n = 0
    while isinstance(e, CApp) and e.name == SUCC and len(e.args) == 1:
        n += 1
        e = e.args[0]
    if isinstance(e, CApp) and e.name == ZERO and not e.args:
        return n
    return None


def _list_items(e: Expr):
    items = []
    while isinstance(e, CApp) and e.name == CONS and len(e.args) == 2:
        items.append(e.args[0])
        e = e.args[1]
    return items, e


def print_expr(e: Expr) -> str:
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Bottom):
        return "_|_"
    if isinstance(e, CApp):
        n = _numeral(e)
        if n is not None:
            return str(n)
        if e.name in (CONS, NIL):
            items, tail = _list_items(e)
            is_nil = isinstance(tail, CApp) and tail.name == NIL and not tail.args
            if is_nil and items and all(isinstance(i, CApp) and is_char_name(i.name)
                                        for i in items):
                body = "".join(i.name[1] for i in items)
                return '"' + body.replace("\\", "\\\\").replace('"', '\\"') + '"'
            inner = ", ".join(print_expr(i) for i in items)
            if is_nil:
                return f"[{inner}]"
            if items:
                return f"[{inner} | {print_expr(tail)}]"
        if is_tuple_name(e.name) and len(e.args) >= 2:
            return "(" + ", ".join(print_expr(a) for a in e.args) + ")"
        return _app(e.name, e.args)
    if isinstance(e, FApp):
        return _app(display_name(e.name) + ("^rt" if e.rt else ""), e.args)
    if isinstance(e, Let):
        bound = print_expr(e.bound)
        if isinstance(e.bound, Let):
            bound = f"({bound})"
        return f"let {e.var} = {bound} in {print_expr(e.body)}"
    if isinstance(e, Rt):
        return f"rt({print_expr(e.expr)})"
    if isinstance(e, Rrt):
        return f"rrt({print_expr(e.expr)})"
    raise TypeError(f"cannot print {e!r}")


def _app(head: str, args) -> str:
    if not args:
        return head
    return head + "(" + ", ".join(print_expr(a) for a in args) + ")"


def print_rule(rule) -> str:
    return print_expr(FApp(rule.function, tuple(rule.params))) + " -> " + print_expr(rule.rhs)


# ------------------------------------------------------------------- prelude

def read_resource(name: str) -> str:
    return resources.files("flp.corpus").joinpath(name).read_text(encoding="utf-8")


def load_prelude() -> SourceProgram:
    """The bundled prelude: ``++``, ``reverse``, ``|``, ``star``, ``take``,
    ``repeat``, ``add`` and ``double``, all as ordinary rules."""
    return parse_program(read_resource("prelude.flp"), filename="prelude.flp")
