"""Uniform access to the three engines, cross-engine comparison and
reduction-graph export."""

from __future__ import annotations

from dataclasses import dataclass, field

from .desugar import desugar_rrt
from .letcalc import enumerate_values_let
from .pop import crwl_rrt_values, reachable_pvalues
from .search import SearchBounds
from .susp import solve
from .syntax import print_expr
from .terms import Expr, Program, Rrt, alpha_normalize, size, strip_rt

ENGINES = ("pop", "let", "susp")


@dataclass
class EngineRun:
    """Total values produced by one engine, in the engine's own order."""

    engine: str
    values: list[Expr]
    complete: bool

    @property
    def value_set(self) -> set[Expr]:
        return set(self.values)


def run_engine(engine: str, goal: Expr, program: Program,
               bounds: SearchBounds = SearchBounds(), max_answers: int = 100) -> EngineRun:
    """Evaluate an already desugared goal.

    For ``susp`` the step bound limits rule applications per branch and
    duplicates are kept; the calculi report each total value once.
    """
    if engine == "pop":
        r = reachable_pvalues(goal, program, bounds)
        return EngineRun(engine, r.ordered_totals(), r.complete)
    if engine == "let":
        r = enumerate_values_let(goal, program, bounds)
        return EngineRun(engine, r.ordered_totals(), r.complete)
    if engine == "susp":
        r = solve(goal, program, max_answers=max_answers, max_depth=bounds.max_steps)
        return EngineRun(engine, r.values, r.exhausted)
    raise ValueError(f"unknown engine {engine!r}")


def _key(v: Expr):
    return (size(v), print_expr(v))


@dataclass
class ComparisonReport:
    goal: Expr
    runs: dict[str, EngineRun]
    reference: EngineRun | None = None  # ordinary rewriting, for rrt goals
    differences: list[tuple[str, str, list[Expr]]] = field(default_factory=list)

    @property
    def verdict(self) -> str:
        return "PASS" if not self.differences else "DIFF"

    @property
    def witness(self) -> Expr | None:
        """Smallest value found by one engine but not another."""
        values = [v for _, _, vs in self.differences for v in vs]
        return min(values, key=_key) if values else None

    def format(self) -> str:
        lines = [f"goal: {print_expr(self.goal)}"]
        runs = list(self.runs.values()) + ([self.reference] if self.reference else [])
        for run in runs:
            shown = ", ".join(print_expr(v) for v in sorted(run.value_set, key=_key))
            flag = "" if run.complete else " (incomplete: bound reached)"
            lines.append(f"  {run.engine:5} {len(run.value_set):3} values{flag}: {{{shown}}}")
        for a, b, vs in self.differences:
            lines.append(f"  {a} - {b}: {{{', '.join(print_expr(v) for v in vs)}}}")
        verdict = self.verdict
        if self.witness is not None:
            verdict += f"  witness: {print_expr(self.witness)}"
        lines.append(verdict)
        return "\n".join(lines)


def compare_engines(goal: Expr, program: Program, bounds: SearchBounds = SearchBounds(),
                    max_answers: int = 10_000) -> ComparisonReport:
    """Run every engine on ``goal`` (surface syntax) and diff the value sets.

    A goal of the form ``rrt(e)`` is additionally checked against ordinary
    rewriting of ``e``.
    """
    desugared, prog = desugar_rrt(goal, program)
    runs = {name: run_engine(name, desugared, prog, bounds, max_answers) for name in ENGINES}
    reference = None
    if isinstance(goal, Rrt):
        body, _ = desugar_rrt(goal.expr, program)
        r = crwl_rrt_values(strip_rt(body), program, bounds)
        reference = EngineRun("crwl", r.ordered_totals(), r.complete)
    report = ComparisonReport(desugared, runs, reference)
    named = list(runs.values()) + ([reference] if reference else [])
    for i, a in enumerate(named):
        for b in named[i + 1:]:
            for x, y in ((a, b), (b, a)):
                extra = sorted(x.value_set - y.value_set, key=_key)
                if extra:
                    report.differences.append((x.engine, y.engine, extra))
    return report


def reduction_graph(goal: Expr, program: Program, engine: str = "let",
                    bounds: SearchBounds = SearchBounds()) -> str:
    """Bounded reduction graph of a calculus engine in Graphviz DOT."""
    edges: list = []
    if engine == "pop":
        reachable_pvalues(goal, program, bounds, edges=edges)
    elif engine == "let":
        enumerate_values_let(goal, program, bounds, edges=edges)
    else:
        raise ValueError("reduction graphs exist only for the pop and let engines")
    ids: dict[Expr, int] = {}
    lines = [f"digraph {engine} {{", "  node [shape=box, fontname=monospace];"]

    def node(e):
        if e not in ids:
            ids[e] = len(ids)
            label = print_expr(e).replace("\\", "\\\\").replace('"', '\\"')
            lines.append(f'  n{ids[e]} [label="{label}"];')
        return ids[e]

    node(goal if engine == "pop" else alpha_normalize(goal))
    seen = set()
    for src, dst in edges:
        key = (node(src), node(dst))
        if key not in seen:
            seen.add(key)
            lines.append(f"  n{key[0]} -> n{key[1]};")
    lines.append("}")
    return "\n".join(lines) + "\n"

