import itertools

import pytest

from flp.desugar import desugar_rrt, desugar_rt, load_program
from flp.errors import MalformedTermError
from flp.pop import (
    crwl_rrt_values, reachable_pvalues, rewrite_ordinary_step, step_b, step_or,
)
from flp.search import SearchBounds
from flp.syntax import parse_expr, print_expr
from flp.terms import BOTTOM, Let, Var, down_set, leq_approx


def shown(exprs):
    return sorted(print_expr(e) for e in exprs)


def tuples(values):
    return {print_expr(v) for v in values}


EIGHT = {f"({a}, {b}, {v}, {v})" for a, b, v in itertools.product("01", repeat=3)}
SIXTEEN = {"(" + ", ".join(t) + ")" for t in itertools.product("01", repeat=4)}


class TestStepOr:
    def test_rt_head(self, coin, ex):
        # the root step drops the head's flag; the inner coin^rt steps come too
        out = shown(step_or(ex("f^rt(coin^rt)", coin), coin))
        assert out == sorted(["g(coin^rt, coin)", "f^rt(0)", "f^rt(1)"])

    def test_g_blocked_at_root(self, coin, ex):
        out = shown(step_or(ex("g(coin^rt, coin)", coin), coin))
        assert out == sorted(["g(0, coin)", "g(1, coin)", "g(coin^rt, 0)", "g(coin^rt, 1)"])

    def test_constructor(self, coin, ex):
        assert step_or(ex("0", coin), coin) == []

    def test_bottom_matches_variable(self, coin, ex):
        assert shown(step_or(ex("g(_|_, 0)", coin), coin)) == ["(_|_, _|_, 0, 0)"]

    def test_let_rejected(self, coin):
        with pytest.raises(MalformedTermError):
            step_or(Let("X", BOTTOM, Var("X")), coin)


class TestStepB:
    def test_function_rooted_positions(self, coin, ex):
        out = shown(step_b(ex("g(coin^rt, coin)", coin)))
        assert out == sorted(["_|_", "g(_|_, coin)", "g(coin^rt, _|_)"])

    def test_value(self, coin, ex):
        assert step_b(ex("(0, 1)", coin)) == []

    def test_unrestricted_reaches_constructors(self, coin, ex):
        assert "(_|_, 1)" in shown(step_b(ex("(0, 1)", coin), unrestricted=True))

    def test_non_strict(self, ex):
        p = load_program("k(X) -> 0\nloop -> loop", prelude=False)
        e = ex("k(loop)", p)
        assert "k(_|_)" in shown(step_b(e))
        r = reachable_pvalues(e, p, SearchBounds(5))
        assert tuples(r.totals) == {"0"}


class TestReachable:
    def test_example(self, coin, ex):
        r = reachable_pvalues(ex("f^rt(coin^rt)", coin), coin)
        assert r.complete
        assert tuples(r.totals) == EIGHT
        assert "(0, 1, 0, 0)" in tuples(r.totals)
        assert "(0, 1, 0, 1)" not in tuples(r.totals)

    def test_partial_values_present(self, coin, ex):
        r = reachable_pvalues(ex("f^rt(coin^rt)", coin), coin)
        assert ex("(0, _|_, 1, 1)", coin) in r.values
        assert BOTTOM in r.values

    def test_downward_closed(self, coin, ex):
        r = reachable_pvalues(ex("f(coin)", coin), coin)
        assert all(down_set(v) <= r.values for v in r.values)

    def test_bound_reported(self, number, ex):
        r = reachable_pvalues(ex("take(1, repeat(0))", number), number, SearchBounds(3))
        assert not r.complete

    def test_state_cap(self, coin, ex):
        r = reachable_pvalues(ex("f^rt(coin^rt)", coin), coin, SearchBounds(30, 5))
        assert not r.complete and r.states <= 5

    def test_call_time_double(self, toy, ex):
        r = reachable_pvalues(ex("double(coin)", toy), toy)
        assert tuples(r.totals) == {"0", "2"}


class TestOrdinary:
    def test_copies_argument(self, coin, ex):
        out = shown(rewrite_ordinary_step(ex("f(coin)", coin), coin))
        assert out == sorted(["g(coin, coin)", "f(0)", "f(1)"])

    def test_g_applies_directly(self, coin, ex):
        out = shown(rewrite_ordinary_step(ex("g(coin, coin)", coin), coin))
        assert "(coin, coin, coin, coin)" in out

    def test_value(self, coin, ex):
        assert rewrite_ordinary_step(ex("0", coin), coin) == []

    def test_crwl_sixteen(self, coin, ex):
        r = crwl_rrt_values(ex("f(coin)", coin), coin)
        assert r.complete and tuples(r.totals) == SIXTEEN

    def test_crwl_constructor(self, coin, ex):
        assert crwl_rrt_values(ex("0", coin), coin).values == {ex("0", coin), BOTTOM}

    def test_transformation_agrees(self, coin):
        goal, p = desugar_rrt(parse_expr("rrt(f(coin))", coin), coin)
        assert tuples(reachable_pvalues(goal, p).totals) == SIXTEEN

    @pytest.mark.parametrize("goal", ["f(coin)", "g(coin, coin)", "double(coin)", "f(rt(coin))"])
    def test_crwl_covers_rt(self, coin, goal):
        e = parse_expr(goal, coin)
        annotated = reachable_pvalues(desugar_rt(parse_expr(f"rt({goal})", coin)), coin)
        reference = crwl_rrt_values(desugar_rt(e), coin)
        assert annotated.totals <= reference.totals


def test_leq_on_results(coin, ex):
    r = reachable_pvalues(ex("f(coin)", coin), coin)
    assert all(leq_approx(BOTTOM, v) for v in r.values)
