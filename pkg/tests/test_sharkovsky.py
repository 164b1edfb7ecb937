from fractions import Fraction as F

import pytest

from app import sharkovsky
from app.errors import InvalidInput
from app.exact import Interval
from app.periodic import h_value, orbits_of_period, period_set
from app.pwl import doubly_truncate, same_function, tent, truncate_tent
from app.sharkovsky import (
    Precedence,
    SharkovskyKey,
    compare,
    minimal_witness_map,
    power2_map_approx,
    precedes,
    sharkovsky_sorted,
    successors,
    verify_closure,
)


class TestOrder:
    def test_compare(self):
        assert compare(3, 5) is Precedence.PRECEDES
        assert compare(1, 2) is Precedence.FOLLOWS
        assert compare(6, 6) is Precedence.EQUALS
        assert precedes(9, 6)
        assert precedes(12, 8)
        assert not precedes(4, 8)

    def test_key(self):
        assert SharkovskyKey.of(12) == SharkovskyKey(2, 3)
        assert SharkovskyKey.of(12).value == 12
        with pytest.raises(InvalidInput):
            SharkovskyKey.of(0)

    def test_successors(self):
        assert successors(3, 8) == [5, 7, 6, 8, 4, 2, 1]
        assert successors(4, 8) == [2, 1]
        assert successors(1, 8) == []

    def test_sorted(self):
        assert sharkovsky_sorted(range(1, 11)) == [3, 5, 7, 9, 6, 10, 8, 4, 2, 1]

    def test_total_order(self):
        for m in range(1, 25):
            for n in range(1, 25):
                if m != n:
                    assert precedes(m, n) != precedes(n, m)


class TestClosure:
    def test_tent(self, T):
        report = verify_closure(T, 8)
        assert report.passed
        assert report.period_set == frozenset(range(1, 9))

    def test_g(self, g):
        assert verify_closure(g, 7).passed

    def test_violations_are_reported(self, T, monkeypatch):
        monkeypatch.setattr(sharkovsky, "period_set", lambda f, N, cap=None: frozenset({1, 3}))
        report = verify_closure(T, 5)
        assert not report.passed
        assert (3, 5) in report.violations
        assert (3, 2) in report.violations
        assert all(m == 3 for m, _ in report.violations)


class TestWitnessMaps:
    def test_constant_for_one(self):
        f = minimal_witness_map(1)
        assert f(F(1, 5)) == F(2, 3)
        assert period_set(f, 4) == {1}

    def test_period_two(self):
        f = minimal_witness_map(2)
        assert same_function(f, doubly_truncate(F(2, 5), F(4, 5)))
        assert period_set(f, 6) == {1, 2}

    def test_period_five_has_no_three(self):
        f = minimal_witness_map(5)
        periods = period_set(f, 7)
        assert 5 in periods
        assert 3 not in periods
        assert {7, 6, 4, 2, 1} <= periods

    @pytest.mark.parametrize("m", [2, 3, 5, 6])
    def test_same_orbit_as_truncated_tent(self, m):
        witness = orbits_of_period(minimal_witness_map(m), m)
        assert len(witness) == 1
        assert witness == orbits_of_period(truncate_tent(h_value(tent(), m)), m)

    def test_period_five_orbit(self):
        orbit, = orbits_of_period(minimal_witness_map(5), 5)
        assert orbit.points == (F(10, 31), F(18, 31), F(20, 31), F(22, 31), F(26, 31))

    @pytest.mark.parametrize("k", range(2, 8))
    def test_periodic_points_follow_tent(self, k):
        f, T = minimal_witness_map(k), tent()
        for n in range(1, 9):
            for orbit in orbits_of_period(f, n):
                assert all(f(x) == T(x) for x in orbit.points)

    def test_invalid(self):
        with pytest.raises(InvalidInput):
            minimal_witness_map(0)


class TestPower2:
    def test_one_level(self):
        approx = power2_map_approx(1)
        assert [o.least_period for o in approx.chain] == [3, 6]
        outer, inner = approx.chain
        assert Interval(outer.min_point, outer.max_point).contains_interval(inner.hull)
        assert approx.q0 == inner.min_point
        assert approx.q1 == inner.max_point
        assert approx.q0 < approx.q1
        assert same_function(approx.map, doubly_truncate(approx.q0, approx.q1))

    def test_invalid(self):
        with pytest.raises(InvalidInput):
            power2_map_approx(0)
