from fractions import Fraction as F

import pytest

from app.construct import (
    CheckResult,
    Family,
    LabeledPoint,
    PointLabel,
    anchor_chain,
    anchor_points,
    base_context,
    bar_u_points,
    chain_check,
    guard_report,
    hull_check,
    layer1,
    missing_check,
    remark3_points,
    u_points,
)
from app.errors import InvalidInput
from app.periodic import Orbit, orbit_from_points


def periodic_point(kind, value, claimed, actual, guaranteed=True, fallbacks=()):
    return LabeledPoint(PointLabel(Family.PLAIN, kind, (1,)), F(value), exponent=claimed, periodic=True,
                        claimed_least_period=claimed, claim_guaranteed=guaranteed,
                        actual_least_period=actual, fallbacks=fallbacks)


class TestBaseContext:
    def test_g(self, g_ctx):
        ctx = g_ctx
        assert ctx.m == 3
        assert (ctx.d, ctx.v, ctx.z, ctx.z0, ctx.y, ctx.e) == (F(1, 6), F(1, 2), F(2, 3), F(2, 3), F(1, 3), 1)
        assert (ctx.breve_u0, ctx.hat_u0) == (F(5, 12), F(13, 24))

    def test_tent(self, tent_ctx):
        ctx = tent_ctx
        assert (ctx.e, ctx.v, ctx.z, ctx.z0, ctx.y, ctx.d) == (F(6, 7), F(3, 7), F(2, 3), F(2, 3), F(2, 5), F(1, 3))
        assert (ctx.breve_u0, ctx.hat_u0) == (F(5, 12), F(7, 12))

    def test_even_period_rejected(self, T):
        with pytest.raises(InvalidInput):
            base_context(T, orbit_from_points(T, [F(2, 5), F(4, 5)]))

    def test_not_an_orbit(self, T):
        with pytest.raises(InvalidInput):
            base_context(T, Orbit((F(1, 9), F(2, 9), F(4, 9)), 3))

    def test_anchor_points(self, g_ctx):
        anchors = anchor_points(g_ctx)
        values = [p.value for p in anchors]
        assert values == sorted(values)
        y = next(p for p in anchors if p.label.kind == "y")
        assert y.actual_least_period == 2
        assert all(p.verified for p in anchors)

    def test_guards(self, g_ctx, tent_ctx):
        for ctx in (g_ctx, tent_ctx):
            assert all(c.passed for c in guard_report(ctx, 2))
            assert anchor_chain(ctx, 3).passed


class TestSequences:
    def test_u_points(self, g_ctx):
        us = u_points(g_ctx, 2)
        assert [p.value for p in us] == [F(5, 12), F(11, 48)]
        assert str(us[0].label) == "L1.plain.u[1]"

    def test_bar_u_points(self, g_ctx):
        bars = bar_u_points(g_ctx, 2)
        assert [p.value for p in bars] == [F(13, 24), F(61, 96)]


class TestLayer1:
    @pytest.fixture(scope="class")
    def result(self, g_ctx):
        return layer1(g_ctx, 2)

    def test_passes(self, result):
        assert result.passed
        failed = [c.name for c in result.checks if not c.passed]
        assert failed == []

    @pytest.mark.parametrize("family,kind,n,expected", [
        (Family.PLAIN, "c", 1, F(1, 3)),
        (Family.PLAIN, "c", 2, F(2, 9)),
        (Family.PLAIN, "u", 1, F(5, 12)),
        (Family.PLAIN, "u", 2, F(11, 48)),
        (Family.BAR, "c", 1, F(5, 9)),
        (Family.BAR, "u'", 1, F(13, 24)),
        (Family.TILDE, "q", 0, F(0)),
        (Family.TILDE, "mu'", 0, F(1, 24)),
        (Family.TILDE, "q", 1, F(2, 15)),
        (Family.TILDE, "mu'", 1, F(13, 96)),
        (Family.HAT, "mu'", 1, F(49, 96)),
        (Family.HAT, "q", 1, F(8, 15)),
        (Family.HAT, "mu'", 2, F(205, 384)),
    ])
    def test_g_values(self, result, family, kind, n, expected):
        assert result.find(family, kind, n).value == expected

    def test_periods(self, result):
        assert result.find(Family.PLAIN, "c", 2).actual_least_period == 4
        assert result.find(Family.TILDE, "q", 1).actual_least_period == 5
        assert result.find(Family.MAIN, "p", 1).actual_least_period == 5
        assert result.find(Family.BREVE, "p", 2).actual_least_period == 7

    def test_tent(self, tent_ctx):
        assert layer1(tent_ctx, 1).passed

    def test_invalid_size(self, g_ctx):
        with pytest.raises(InvalidInput):
            layer1(g_ctx, 0)


class TestRemark3:
    def test_degenerate_first_point(self, g_ctx):
        result = remark3_points(g_ctx, 1)
        first = result.find(Family.TILDE, "c'*", 0)
        assert first.value == 0
        assert first.actual_least_period == 3
        assert first.verified
        assert result.find(Family.TILDE, "c'*", 1).actual_least_period == 8


class TestChecks:
    def test_chain_in_order(self):
        check = chain_check("order", [("a", F(1, 3)), None, ("b", F(1, 2))])
        assert check.passed
        assert check.detail == "2 points in order"

    def test_chain_out_of_order(self):
        check = chain_check("order", [("a", F(1, 2)), ("b", F(1, 2))])
        assert not check.passed
        assert "a = 1/2" in check.detail

    def test_chain_skips_wrong_period(self):
        wrong = periodic_point("c", F(9, 10), 4, 2, guaranteed=False, fallbacks=(2,))
        assert chain_check("order", [("a", F(1, 3)), wrong, ("b", F(1, 2))]).passed

    def test_hulls(self):
        left = [periodic_point("p", F(1, 10), 3, 3), periodic_point("p", F(2, 10), 3, 3)]
        right = [periodic_point("q", F(3, 10), 3, 3), None]
        assert hull_check("hulls", {"p": left, "q": right}).passed
        overlapping = [periodic_point("q", F(15, 100), 3, 3)]
        assert not hull_check("hulls", {"p": left, "q": overlapping}).passed

    def test_missing(self):
        assert missing_check("found", {"a": periodic_point("p", 0, 3, 3)}) == CheckResult("found", True)
        check = missing_check("found", {"a": None, "b": None})
        assert not check.passed
        assert check.detail == "not found: a, b"

    def test_verified_rules(self):
        assert periodic_point("p", 0, 5, 5).verified
        assert not periodic_point("p", 0, 6, 3).verified
        assert periodic_point("p", 0, 6, 3, guaranteed=False).verified
        assert periodic_point("p", 0, 4, 2, guaranteed=False, fallbacks=(2,)).verified
        assert not periodic_point("p", 0, 4, 1, guaranteed=False, fallbacks=(2,)).verified
