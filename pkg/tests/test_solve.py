from fractions import Fraction as F

import pytest

from app.errors import InvalidInput, PieceCapExceeded
from app.exact import Interval, RootSet, Side
from app.pwl import truncate_tent
from app.solve import SolveStrategy, extremal_root, preimage, solve_iter_eq_const, solve_iter_fixed


class TestSolveConst:
    def test_g_squared(self, g):
        rs = solve_iter_eq_const(g, 2, F(1, 6), Interval(0, F(1, 2)))
        assert rs.points() == [F(5, 12)]

    def test_g_squared_right_branch(self, g):
        rs = solve_iter_eq_const(g, 2, F(1, 6), Interval(F(1, 2), F(2, 3)))
        assert rs.points() == [F(13, 24)]

    def test_tent_count(self, T):
        assert len(solve_iter_eq_const(T, 6, F(1, 3))) == 64

    def test_plateau_gives_interval(self):
        h = truncate_tent(F(2, 3))
        rs = solve_iter_eq_const(h, 1, F(2, 3))
        assert rs.components == (Interval(F(1, 3), F(2, 3)),)
        assert not rs.is_finite

    def test_no_solution(self, T):
        assert solve_iter_eq_const(T, 3, F(3, 2)) == RootSet.empty()

    @pytest.mark.parametrize("k,c", [(1, F(1, 2)), (4, F(1, 3)), (5, F(2, 7)), (7, 0)])
    def test_strategies_agree(self, T, g, k, c):
        for f in (T, g):
            explicit = solve_iter_eq_const(f, k, c, strategy=SolveStrategy.EXPLICIT)
            pulled = solve_iter_eq_const(f, k, c, strategy=SolveStrategy.PULLBACK)
            assert explicit == pulled

    def test_auto_falls_back(self, T):
        with pytest.raises(PieceCapExceeded):
            solve_iter_eq_const(T, 10, F(1, 3), strategy=SolveStrategy.EXPLICIT, cap=64)
        rs = solve_iter_eq_const(T, 10, F(1, 3), cap=64)
        assert len(rs) == 1024
        assert rs == solve_iter_eq_const(T, 10, F(1, 3), strategy=SolveStrategy.PULLBACK)

    def test_invalid(self, T):
        with pytest.raises(InvalidInput):
            solve_iter_eq_const(T, 0, F(1, 2))
        with pytest.raises(InvalidInput):
            solve_iter_eq_const(T, 1, F(1, 2), Interval(F(1, 2), 2))


class TestFixed:
    def test_tent_fixed_points(self, T):
        rs = solve_iter_fixed(T, 3)
        assert len(rs.points()) == 8
        assert solve_iter_fixed(T, 1).points() == [0, F(2, 3)]

    def test_windowed(self, g):
        assert solve_iter_fixed(g, 2, Interval(0, F(1, 2))).points() == [F(1, 3)]

    def test_preimage(self, T):
        rs = preimage(T, Interval(F(1, 2), 1))
        assert rs.components == (Interval(F(1, 4), F(3, 4)),)


class TestExtremalRoot:
    def test_period_two_point_of_g(self, g):
        assert extremal_root(g, 2, Side.MAX, Interval(0, F(1, 2))) == F(1, 3)

    def test_target_and_search(self, g):
        window = Interval(0, F(1, 2))
        assert extremal_root(g, 2, Side.MIN, window, target=F(1, 6)) == F(5, 12)
        assert extremal_root(g, 2, Side.MIN, window, target=F(1, 6), search=Interval(0, F(1, 4))) is None

    def test_open_end(self, T):
        assert extremal_root(T, 1, Side.MIN, Interval(0, 1), open_lo=True) == F(2, 3)
