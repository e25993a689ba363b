"""Bundled example programs and the goals used for cross-engine checks."""

from __future__ import annotations

from functools import lru_cache
from typing import NamedTuple

from ..desugar import load_program
from ..syntax import read_resource
from ..terms import Program

FILES = ("coin.flp", "toy_tests.flp", "number.flp", "grammar.flp", "grammar_full.flp")


class CorpusGoal(NamedTuple):
    file: str
    goal: str
    max_steps: int  # enough for pop and let to reach every total value


# The calculi explore every interleaving, so goals that unfold repeat or star
# get step bounds just past their last total value instead of the default.
CORPUS_GOALS = (
    CorpusGoal("coin.flp", "f(coin)", 30),
    CorpusGoal("coin.flp", "rt(f(coin))", 30),
    CorpusGoal("coin.flp", "f(rt(coin))", 30),
    CorpusGoal("coin.flp", "rrt(f(coin))", 30),
    CorpusGoal("coin.flp", "g(coin, coin)", 30),
    CorpusGoal("coin.flp", "double(coin)", 30),
    CorpusGoal("coin.flp", "double(rt(coin))", 30),
    CorpusGoal("coin.flp", "add(2, 2)", 30),
    CorpusGoal("toy_tests.flp", "test1", 30),
    CorpusGoal("toy_tests.flp", "test2", 30),
    CorpusGoal("number.flp", "ctnumber(1)", 11),
    CorpusGoal("grammar.flp", "letter", 30),
    CorpusGoal("grammar.flp", "palAux(letter)", 30),
    CorpusGoal("grammar.flp", "palAux(rt(letter))", 30),
    CorpusGoal("grammar.flp", "reverse(\"ab\")", 30),
)


@lru_cache(maxsize=None)
def load(name: str, prelude: bool = True) -> Program:
    """Load a bundled program by file name."""
    return load_program(read_resource(name), filename=name, prelude=prelude)
