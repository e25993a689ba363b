"""Bounded breadth-first exploration of reduction relations."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Iterable

from .terms import Bottom, CApp, Expr, down_set


@dataclass(frozen=True)
class SearchBounds:
    max_steps: int = 30
    max_states: int = 100_000

    def __post_init__(self):
        if self.max_steps <= 0 or self.max_states <= 0:
            raise ValueError("search bounds must be positive")


@dataclass
class SearchResult:
    """Values found by a bounded search.

    ``complete`` is false when a bound cut the search short, in which case
    ``values`` may be missing elements.
    """

    values: set[Expr]
    complete: bool
    states: int
    order: list[Expr] = field(default_factory=list)

    @property
    def totals(self) -> set[Expr]:
        return {v for v in self.values if _total(v)}

    def ordered_totals(self) -> list[Expr]:
        return [v for v in self.order if _total(v)]


def _total(t: Expr) -> bool:
    if isinstance(t, Bottom):
        return False
    if isinstance(t, CApp):
        return all(_total(a) for a in t.args)
    return True


def explore(start: Expr, successors: Callable[[Expr], Iterable[Expr]],
            collect: Callable[[Expr], Expr | None], b: SearchBounds,
            edges: list | None = None, close_downwards: bool = True,
            memo: bool = True) -> SearchResult:
    """Breadth-first closure of ``start`` under ``successors``.

    ``collect`` maps a state to the value it denotes, or ``None``.  States
    deeper than ``b.max_steps`` are not expanded and at most
    ``b.max_states`` states are admitted; hitting either bound clears the
    ``complete`` flag.  Without ``memo`` the search is a tree search.
    """
    seen = {start}
    admitted = 1
    frontier = deque([(start, 0)])
    found: list[Expr] = []
    found_set: set[Expr] = set()
    complete = True
    while frontier:
        state, d = frontier.popleft()
        value = collect(state)
        if value is not None and value not in found_set:
            found_set.add(value)
            found.append(value)
        succs = successors(state)
        if d >= b.max_steps:
            if succs:
                complete = False
            continue
        for nxt in succs:
            if edges is not None:
                edges.append((state, nxt))
            if memo and nxt in seen:
                continue
            if admitted >= b.max_states:
                complete = False
                continue
            admitted += 1
            seen.add(nxt)
            frontier.append((nxt, d + 1))
    if not close_downwards:
        return SearchResult(set(found), complete, admitted, found)
    closure: set[Expr] = set()
    order: list[Expr] = []
    for v in found:
        if v not in closure:
            order.append(v)
        closure |= down_set(v)
    for v in sorted(closure - set(order), key=repr):
        order.append(v)
    return SearchResult(closure, complete, admitted, order)


