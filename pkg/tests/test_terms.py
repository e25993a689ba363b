import pytest

from flp.errors import MalformedTermError
from flp.terms import (
    BOTTOM, CApp, FApp, Let, Var, alpha_normalize, apply_subst, bound_vars,
    free_vars, fresh_var, is_rtcterm, leq_approx, match_params, shell,
)

Z = CApp("z")
ONE = CApp("s", (Z,))
COIN = FApp("coin")
COIN_RT = FApp("coin", rt=True)


def tup(*xs):
    return CApp("(" + "," * (len(xs) - 1) + ")", tuple(xs))


class TestRtCTerm:
    def test_rt_coin(self):
        assert is_rtcterm(COIN_RT, False)

    def test_plain_coin(self):
        assert not is_rtcterm(COIN, False)

    def test_variable(self):
        assert is_rtcterm(Var("X"), False)

    def test_bottom_needs_flag(self):
        assert not is_rtcterm(BOTTOM, False)
        assert is_rtcterm(BOTTOM, True)

    def test_nested_rt_application(self):
        assert is_rtcterm(CApp("c", (FApp("f", (Var("X"),), rt=True), Z)), False)

    def test_let_is_malformed(self):
        with pytest.raises(MalformedTermError):
            is_rtcterm(Let("X", COIN, Var("X")), False)


class TestMatch:
    def test_binds_rt_argument(self):
        assert match_params((Var("X"),), (COIN_RT,), False) == {"X": COIN_RT}

    def test_rejects_plain_function_argument(self):
        assert match_params((Var("X"), Var("Y")), (COIN_RT, COIN), False) is None

    def test_constructor_decomposition(self):
        assert match_params((CApp("c", (Var("X"),)),), (CApp("c", (Z,)),), False) == {"X": Z}

    def test_bottom_only_with_flag(self):
        assert match_params((Var("X"),), (BOTTOM,), True) == {"X": BOTTOM}
        assert match_params((Var("X"),), (BOTTOM,), False) is None

    def test_bottom_never_matches_constructor_pattern(self):
        assert match_params((CApp("c", (Var("X"),)),), (BOTTOM,), True) is None

    def test_roundtrip(self):
        params = (CApp("c", (Var("X"),)), Var("Y"))
        args = (CApp("c", (COIN_RT,)), ONE)
        theta = match_params(params, args, False)
        assert tuple(apply_subst(p, theta) for p in params) == args


class TestSubst:
    def test_first_step_of_example(self):
        e = FApp("g", (Var("X"), COIN))
        assert apply_subst(e, {"X": COIN_RT}) == FApp("g", (COIN_RT, COIN))

    def test_empty(self):
        assert apply_subst(Var("X"), {}) == Var("X")

    def test_capture_is_avoided(self):
        e = Let("X", COIN, tup(Var("X"), Var("Y")))
        out = apply_subst(e, {"Y": Var("X")})
        assert isinstance(out, Let) and out.var != "X"
        assert out.body == tup(Var(out.var), Var("X"))
        assert free_vars(out) == {"X"}


class TestShellAndOrder:
    def test_function_becomes_bottom(self):
        assert shell(CApp("c", (FApp("f", (Var("X"),)),))) == CApp("c", (BOTTOM,))

    def test_constructor_fixpoint(self):
        assert shell(Z) == Z

    def test_tuple(self):
        assert shell(tup(Z, COIN_RT, Z, Z)) == tup(Z, BOTTOM, Z, Z)

    def test_let_is_malformed(self):
        with pytest.raises(MalformedTermError):
            shell(Let("X", Z, Var("X")))

    def test_bottom_is_least(self):
        assert leq_approx(BOTTOM, tup(Z, ONE, Z, ONE))

    def test_pointwise(self):
        assert leq_approx(CApp("c", (BOTTOM,)), CApp("c", (Z,)))

    def test_distinct_constructors(self):
        assert not leq_approx(Z, ONE)

    def test_variables(self):
        assert leq_approx(Var("X"), Var("X"))
        assert not leq_approx(Var("X"), Var("Y"))


class TestVariables:
    def test_free_and_bound(self):
        e = Let("X", COIN, tup(Var("X"), Var("Y")))
        assert free_vars(e) == {"Y"}
        assert bound_vars(e) == {"X"}

    def test_ground(self):
        assert free_vars(FApp("g", (COIN_RT, COIN))) == set()

    def test_let_binds_body_only(self):
        assert free_vars(Let("X", Var("X"), Var("X"))) == {"X"}

    @pytest.mark.parametrize("avoid,expected", [(set(), "X"), ({"X"}, "X1"), ({"X", "X1"}, "X2")])
    def test_fresh_var(self, avoid, expected):
        assert fresh_var("X", avoid) == expected


class TestAlpha:
    def test_equivalent_lets(self):
        assert alpha_normalize(Let("A", COIN, Var("A"))) == alpha_normalize(Let("B", COIN, Var("B")))

    def test_ground_unchanged(self):
        e = FApp("g", (COIN_RT, COIN))
        assert alpha_normalize(e) is e

    def test_shadowing(self):
        e = Let("X", COIN, Let("X", Var("X"), tup(Var("X"), Var("Y"))))
        n = alpha_normalize(e)
        assert n.var != n.body.var
        assert alpha_normalize(n) == n
        assert free_vars(n) == {"Y"}
