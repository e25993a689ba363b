"""Demand-driven evaluation with shared suspensions.

Every function call becomes a suspension.  The result of evaluating an
ordinary suspension is recorded in the store, so every reference to it sees
the same value.  Suspensions created for rt-flagged calls are never
recorded: each demand evaluates them afresh, which is what lets copies of
them take different values.

The store is a persistent map threaded through a depth-first search, so a
value recorded in one branch is invisible to its siblings.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from typing import Iterator, NamedTuple

from pyrsistent import PMap, pmap

from .errors import MalformedTermError
from .terms import CApp, Expr, FApp, Program, Var

UNEVALUATED = "unevaluated"
RT = "rt"


@dataclass(frozen=True, eq=False)
class CNode:
    name: str
    args: tuple = ()


@dataclass(frozen=True, eq=False)
class Susp:
    id: int
    function: str
    args: tuple = ()
    rt: bool = False


Node = CNode | Susp


class Choice(NamedTuple):
    susp_id: int
    rule_index: int
    function: str
    rt: bool


@dataclass(frozen=True)
class Store:
    statuses: PMap = field(default_factory=pmap)
    next_id: int = 0
    steps: int = 0
    trace: tuple | None = None  # cons list of Choice, newest first

    def status(self, s: Susp):
        """``UNEVALUATED``, ``RT``, or the recorded head-normal node."""
        return self.statuses.get(s.id, UNEVALUATED)

    def new_susp(self, function: str, args: tuple, rt: bool) -> tuple[Susp, "Store"]:
        s = Susp(self.next_id, function, args, rt)
        statuses = self.statuses.set(s.id, RT) if rt else self.statuses
        return s, Store(statuses, self.next_id + 1, self.steps, self.trace)

    def record(self, s: Susp, result: CNode) -> "Store":
        if s.rt:
            return self
        return Store(self.statuses.set(s.id, result), self.next_id, self.steps, self.trace)

    def step(self, choice: Choice) -> "Store":
        return Store(self.statuses, self.next_id, self.steps + 1, (choice, self.trace))

    def branch_trace(self) -> list[Choice]:
        out = []
        node = self.trace
        while node is not None:
            out.append(node[0])
            node = node[1]
        out.reverse()
        return out


@dataclass(frozen=True)
class Answer:
    value: Expr
    branch_trace: tuple[Choice, ...]


@dataclass
class SolveResult:
    answers: list[Answer]
    exhausted: bool   # the whole search space was enumerated
    truncated: bool   # a depth or answer limit cut the search

    @property
    def values(self) -> list[Expr]:
        return [a.value for a in self.answers]


def _build(e: Expr, theta: dict, store: Store) -> tuple[Node, Store]:
    if isinstance(e, Var):
        try:
            return theta[e.name], store
        except KeyError:
            raise MalformedTermError(f"unbound variable {e.name} (goals must be ground)") from None
    if isinstance(e, (CApp, FApp)):
        args = []
        for a in e.args:
            node, store = _build(a, theta, store)
            args.append(node)
        if isinstance(e, CApp):
            return CNode(e.name, tuple(args)), store
        return store.new_susp(e.name, tuple(args), e.rt)
    raise MalformedTermError(f"cannot compile {type(e).__name__} node")


def compile_goal(e: Expr, store: Store | None = None) -> tuple[Node, Store]:
    """Translate a ground, desugared expression into a node graph.

    Each function-call occurrence becomes one suspension.
    """
    return _build(e, {}, store or Store())


class Evaluator:
    """Depth-first evaluator over one program.

    ``max_depth`` bounds the number of rule applications along a branch;
    branches cut by it set :attr:`truncated`.
    """

    def __init__(self, program: Program, max_depth: int = 30):
        self.program = program
        self.max_depth = max_depth
        self.truncated = False

    def hnf(self, node: Node, store: Store) -> Iterator[tuple[CNode, Store]]:
        if isinstance(node, CNode):
            yield node, store
            return
        if not node.rt:
            cached = store.statuses.get(node.id)
            if cached is not None:
                yield cached, store
                return
        for i, rule in enumerate(self.program.rules_for(node.function)):
            for theta, st in self._match_all(rule.params, node.args, 0, {}, store):
                if st.steps >= self.max_depth:
                    self.truncated = True
                    continue
                st = st.step(Choice(node.id, i, node.function, node.rt))
                root, st = _build(rule.rhs, theta, st)
                for head, st2 in self.hnf(root, st):
                    yield head, st2.record(node, head)

    def _match(self, pattern: Expr, node: Node, theta: dict, store: Store):
        if isinstance(pattern, Var):
            yield {**theta, pattern.name: node}, store
            return
        for head, st in self.hnf(node, store):
            if head.name == pattern.name and len(head.args) == len(pattern.args):
                yield from self._match_all(pattern.args, head.args, 0, theta, st)

    def _match_all(self, patterns, nodes, i, theta, store):
        if i == len(patterns):
            yield theta, store
            return
        for theta2, st in self._match(patterns[i], nodes[i], theta, store):
            yield from self._match_all(patterns, nodes, i + 1, theta2, st)

    def normalize(self, node: Node, store: Store) -> Iterator[tuple[Expr, Store]]:
        """Full normal forms, arguments evaluated left to right."""
        for head, st in self.hnf(node, store):
            for args, st2 in self._normalize_args(head.args, 0, st):
                yield CApp(head.name, args), st2

    def _normalize_args(self, nodes, i, store):
        if i == len(nodes):
            yield (), store
            return
        for value, st in self.normalize(nodes[i], store):
            for rest, st2 in self._normalize_args(nodes, i + 1, st):
                yield (value,) + rest, st2


def hnf(node: Node, store: Store, program: Program, max_depth: int = 30):
    return Evaluator(program, max_depth).hnf(node, store)


def normalize(node: Node, store: Store, program: Program, max_depth: int = 30):
    return Evaluator(program, max_depth).normalize(node, store)


def solve(e: Expr, p: Program, max_answers: int = 100, max_depth: int = 30) -> SolveResult:
    """Answers of ``e`` in depth-first order, duplicates preserved."""
    if sys.getrecursionlimit() < 20_000:
        sys.setrecursionlimit(20_000)
    ev = Evaluator(p, max_depth)
    root, store = compile_goal(e)
    answers: list[Answer] = []
    stream = ev.normalize(root, store)
    for value, st in stream:
        answers.append(Answer(value, tuple(st.branch_trace())))
        if len(answers) >= max_answers:
            more = next(stream, None) is not None
            stream.close()
            return SolveResult(answers, exhausted=not more and not ev.truncated,
                               truncated=more or ev.truncated)
    return SolveResult(answers, exhausted=not ev.truncated, truncated=ev.truncated)
