from fractions import Fraction as F

import pytest

from app.errors import InvalidInput
from app.exact import Interval, RootSet, Side, as_rat, format_rat, parse_rat, rat_make, rootset_canonicalize


class TestRationals:
    def test_parse_reduces(self):
        assert parse_rat("3/6") == F(1, 2)
        assert parse_rat(" -2 ") == F(-2)
        assert parse_rat("+4/8") == F(1, 2)

    @pytest.mark.parametrize("text", ["1/0", "abc", "1.5", "1/-2", ""])
    def test_parse_rejects(self, text):
        with pytest.raises(InvalidInput):
            parse_rat(text)

    def test_rat_make_zero_denominator(self):
        with pytest.raises(InvalidInput):
            rat_make(1, 0)

    def test_format_lowest_terms(self):
        assert format_rat(F(0)) == "0/1"
        assert format_rat(F(-2, 4)) == "-1/2"
        assert format_rat(F(7)) == "7/1"

    def test_as_rat(self):
        assert as_rat(3) == F(3)
        assert as_rat("5/10") == F(1, 2)
        with pytest.raises(InvalidInput):
            as_rat(0.5)
        with pytest.raises(InvalidInput):
            as_rat(True)


class TestInterval:
    def test_reversed_bounds(self):
        with pytest.raises(InvalidInput):
            Interval(1, 0)

    def test_contains_and_intersect(self):
        w = Interval(F(1, 4), F(3, 4))
        assert w.contains(F(1, 2))
        assert not w.contains(F(0))
        assert w.intersect(Interval(F(1, 2), 1)) == Interval(F(1, 2), F(3, 4))
        assert w.intersect(Interval(F(7, 8), 1)) is None
        assert Interval.point(F(1, 3)).is_point

    def test_str(self):
        assert str(Interval(0, F(1, 2))) == "[0/1, 1/2]"
        assert str(Interval.point(1)) == "[1/1]"


class TestRootSet:
    def test_canonicalize_merges_overlaps(self):
        rs = rootset_canonicalize([Interval.point(2), Interval(0, F(1, 2)), Interval(F(1, 4), 1),
                                   Interval.point(2)])
        assert rs.components == (Interval(0, 1), Interval.point(2))
        assert not rs.is_finite

    def test_canonicalize_is_idempotent(self):
        rs = rootset_canonicalize([Interval(0, F(1, 3)), Interval.point(F(1, 3)), Interval.point(F(1, 2))])
        assert rootset_canonicalize(rs.components) == rs
        assert len(rs) == 2

    def test_points_and_membership(self):
        rs = RootSet.canonical([Interval.point(F(1, 5)), Interval.point(F(3, 5))])
        assert rs.is_finite
        assert rs.points() == [F(1, 5), F(3, 5)]
        assert rs.contains(F(3, 5))
        assert not rs.contains(F(2, 5))
        assert not RootSet.empty()

    def test_restrict(self):
        rs = RootSet.canonical([Interval(0, F(1, 2)), Interval.point(F(3, 4))])
        assert rs.restrict(Interval(F(1, 4), F(5, 8))).components == (Interval(F(1, 4), F(1, 2)),)

    def test_extremal(self):
        rs = RootSet.canonical([Interval(0, F(1, 2)), Interval.point(F(3, 4))])
        unit = Interval(0, 1)
        assert rs.extremal(Side.MIN, unit) == 0
        assert rs.extremal(Side.MAX, unit) == F(3, 4)
        assert rs.extremal(Side.MAX, Interval(0, F(3, 4)), open_hi=True) == F(1, 2)
        assert rs.extremal(Side.MIN, Interval(F(1, 2), 1), open_lo=True) == F(3, 4)

    def test_extremal_not_attained(self):
        rs = RootSet.canonical([Interval(0, F(1, 2))])
        assert rs.extremal(Side.MIN, Interval(0, 1), open_lo=True) is None
        assert RootSet.empty().extremal(Side.MAX, Interval(0, 1)) is None
