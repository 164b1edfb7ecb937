import random
from fractions import Fraction as F

import pytest

from app.errors import InvalidInput, PieceCapExceeded, RangeViolation
from app.exact import Interval
from app.pwl import (
    UNIT,
    Unimodality,
    affine,
    catalog,
    compose,
    constant,
    difference,
    doubly_truncate,
    evaluate,
    identity,
    image,
    is_unimodal,
    iterate,
    make_pwl,
    random_pwl,
    restrict,
    same_function,
    simplify,
    strictly_below,
    tent_scaled,
    truncate_tent,
)


class TestConstruction:
    def test_rejects_unsorted_nodes(self):
        with pytest.raises(InvalidInput):
            make_pwl(UNIT, [(0, 0), (F(1, 2), 1), (F(1, 2), 0), (1, 0)])

    def test_rejects_endpoint_mismatch(self):
        with pytest.raises(InvalidInput):
            make_pwl(UNIT, [(0, 0), (F(1, 2), 1)])

    def test_rejects_empty(self):
        with pytest.raises(InvalidInput):
            make_pwl(UNIT, [])

    def test_endomorphism_flag(self, T):
        assert T.is_endomorphism
        assert not make_pwl(UNIT, [(0, 0), (1, 2)]).is_endomorphism

    def test_catalog(self):
        h = catalog("truncate_tent", F(6, 7))
        assert h.nodes == [(0, 0), (F(3, 7), F(6, 7)), (F(4, 7), F(6, 7)), (1, 0)]
        with pytest.raises(InvalidInput):
            catalog("nope")
        with pytest.raises(InvalidInput):
            catalog("tent", F(1, 2))

    def test_parameter_ranges(self):
        with pytest.raises(InvalidInput):
            tent_scaled(F(3, 2))
        with pytest.raises(InvalidInput):
            truncate_tent(0)
        with pytest.raises(InvalidInput):
            doubly_truncate(F(6, 7), F(2, 7))

    def test_doubly_truncate_range(self):
        f = doubly_truncate(F(2, 7), F(6, 7))
        assert f.range == Interval(F(2, 7), F(6, 7))
        assert f(0) == F(2, 7)
        assert f(F(1, 2)) == F(6, 7)


class TestEvaluation:
    def test_values(self, T, g):
        assert evaluate(T, F(1, 4)) == F(1, 2)
        assert T(F(2, 7)) == F(4, 7)
        assert g(F(3, 4)) == F(1, 2)
        assert g(0) == F(1, 2)

    def test_outside_domain(self, T):
        with pytest.raises(InvalidInput):
            evaluate(T, F(3, 2))

    def test_image(self, T):
        assert image(T, Interval(0, F(1, 4))) == Interval(0, F(1, 2))
        assert image(T, Interval(F(1, 4), F(3, 4))) == Interval(F(1, 2), 1)

    def test_restrict(self, T):
        r = restrict(T, Interval(F(1, 4), F(3, 4)))
        assert r.nodes == [(F(1, 4), F(1, 2)), (F(1, 2), 1), (F(3, 4), F(1, 2))]


class TestComposition:
    def test_compose_matches_pointwise(self, T, g):
        h = compose(g, T)
        for k in range(0, 17):
            x = F(k, 16)
            assert h(x) == g(T(x))

    def test_iterate_piece_count(self, T):
        assert iterate(T, 3).pieces == 8
        assert iterate(T, 1).pieces == 2

    def test_windowed_iterate_of_g(self, g):
        g2 = iterate(g, 2, Interval(0, F(1, 2)))
        assert same_function(g2, affine(Interval(0, F(1, 2)), -2, 1))
        g3 = iterate(g, 3, Interval(0, F(1, 6)))
        assert same_function(g3, affine(Interval(0, F(1, 6)), 4, 0))

    def test_iterate_additivity(self, g):
        left = compose(iterate(g, 2), iterate(g, 3))
        assert same_function(left, iterate(g, 5))

    def test_cap(self, T):
        with pytest.raises(PieceCapExceeded) as err:
            iterate(T, 12, cap=100)
        assert err.value.cap == 100

    def test_range_violation(self, T):
        with pytest.raises(RangeViolation):
            compose(T, affine(UNIT, 2, 0))


class TestAlgebra:
    def test_simplify_collinear(self):
        f = make_pwl(UNIT, [(0, 0), (F(1, 3), F(1, 3)), (F(1, 2), F(1, 2)), (1, 1)])
        assert simplify(f).nodes == [(0, 0), (1, 1)]
        assert same_function(f, identity(UNIT))

    def test_difference(self, T):
        d = difference(T, identity(UNIT))
        assert d(F(1, 2)) == F(1, 2)
        assert d(1) == -1

    def test_strictly_below(self):
        zero, ident = constant(UNIT, 0), identity(UNIT)
        assert not strictly_below(zero, ident)
        assert strictly_below(zero, ident, open_lo=True)
        assert not strictly_below(ident, zero, open_lo=True)


class TestShape:
    def test_unimodality(self, T, g):
        assert is_unimodal(T) is Unimodality.STRICT
        assert is_unimodal(g) is Unimodality.STRICT
        assert is_unimodal(truncate_tent(F(2, 3))) is Unimodality.WEAK
        assert is_unimodal(make_pwl(UNIT, [(0, 1), (1, 0)])) is Unimodality.NOT

    def test_random_maps(self):
        rng = random.Random(7)
        for _ in range(50):
            f = random_pwl(rng)
            assert f.is_endomorphism
            assert f.domain == UNIT
            for i in range(f.pieces):
                s = f.slope(i)
                assert s == 0 or abs(s) >= 2
