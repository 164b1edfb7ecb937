"""
Конструктивный скелет: по отображению f и орбите P нечетного периода m >= 3
вычисляет опорные точки e, v, z, y, z0, d, последовательности u_n и ū'_n
и первый слой башни периодических точек с проверенными наименьшими периодами.

Каждая точка - это min или max множества решений f^k(x) = c (или f^k(x) = x)
на окне; все проверки выполняются в точной арифметике.
"""
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from app.cache import cached
from app.errors import ConstructionError, InvalidInput
from app.exact import Interval, Side, format_rat
from app.logger import get_logger
from app.periodic import Orbit, least_period, orbit_from_points
from app.pwl import PwlMap, constant, evaluate, identity, iterate, strictly_below
from app.solve import extremal_root

logger = get_logger(__name__)


class Family(str, Enum):
    TILDE = "tilde"
    PLAIN = "plain"
    BREVE = "breve"
    HAT = "hat"
    BAR = "bar"
    MAIN = "main"
    ANCHOR = "anchor"


@dataclass(frozen=True)
class PointLabel:
    family: Family
    kind: str
    indices: Tuple[int, ...] = ()
    layer: int = 1

    def __str__(self) -> str:
        return f"L{self.layer}.{self.family.value}.{self.kind}[{','.join(str(i) for i in self.indices)}]"


@dataclass(frozen=True)
class LabeledPoint:
    """
    Построенная точка.

    Для периодических точек (periodic=True) actual_least_period вычисляется
    заново через least_period; claim_guaranteed=False означает, что заявленный
    период не гарантирован и допускаются fallbacks.
    """
    label: PointLabel
    value: Fraction
    exponent: Optional[int] = None
    periodic: bool = False
    claimed_least_period: Optional[int] = None
    claim_guaranteed: bool = False
    actual_least_period: Optional[int] = None
    fallbacks: Tuple[int, ...] = ()

    @property
    def verified(self) -> bool:
        if self.claimed_least_period is None:
            return True
        if self.claim_guaranteed:
            return self.actual_least_period == self.claimed_least_period
        if not self.fallbacks:
            return True
        return self.actual_least_period in (self.claimed_least_period,) + self.fallbacks

    @property
    def period_matches(self) -> bool:
        """Фактический период совпадает с заявленным"""
        return self.claimed_least_period is not None and self.actual_least_period == self.claimed_least_period

    def __str__(self) -> str:
        return f"{self.label} = {format_rat(self.value)}"


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class LayerResult:
    points: Tuple[LabeledPoint, ...]
    checks: Tuple[CheckResult, ...] = ()

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks) and all(p.verified for p in self.points)

    def by_label(self) -> Dict[str, LabeledPoint]:
        return {str(p.label): p for p in self.points}

    def find(self, family: Family, kind: str, *indices: int) -> Optional[LabeledPoint]:
        for p in self.points:
            if p.label.family is family and p.label.kind == kind and p.label.indices == indices:
                return p
        return None


@dataclass(frozen=True)
class ConstructionContext:
    map: PwlMap
    orbit: Orbit
    m: int
    e: Fraction
    v: Fraction
    z: Fraction
    y: Fraction
    z0: Fraction
    d: Fraction
    breve_u0: Fraction
    hat_u0: Fraction

    @property
    def min_p(self) -> Fraction:
        return self.orbit.min_point

    @property
    def max_p(self) -> Fraction:
        return self.orbit.max_point


# Общие помощники для построения точек и проверок (используются и в towers)

def find_periodic(ctx: ConstructionContext, label: PointLabel, exponent: int, side: Side,
                  window: Interval, search: Optional[Interval] = None, claimed: Optional[int] = None,
                  guaranteed: bool = True, fallbacks: Tuple[int, ...] = ()) -> Optional[LabeledPoint]:
    """Экстремальное решение f^exponent(x) = x с проверкой наименьшего периода"""
    value = extremal_root(ctx.map, exponent, side, window, search=search)
    if value is None:
        return None
    return LabeledPoint(
        label=label,
        value=value,
        exponent=exponent,
        periodic=True,
        claimed_least_period=exponent if claimed is None else claimed,
        claim_guaranteed=guaranteed,
        actual_least_period=least_period(ctx.map, value, exponent),
        fallbacks=fallbacks,
    )


def find_d_point(ctx: ConstructionContext, label: PointLabel, exponent: int, side: Side,
                 window: Interval, target: Optional[Fraction] = None,
                 search: Optional[Interval] = None) -> Optional[LabeledPoint]:
    """Экстремальное решение f^exponent(x) = target (по умолчанию d)"""
    value = extremal_root(ctx.map, exponent, side, window, target=ctx.d if target is None else target,
                          search=search)
    if value is None:
        return None
    return LabeledPoint(label=label, value=value, exponent=exponent)


ChainEntry = Union[Optional[LabeledPoint], Tuple[str, Fraction]]


def _chain_item(entry: ChainEntry) -> Optional[Tuple[str, Fraction]]:
    if entry is None:
        return None
    if isinstance(entry, LabeledPoint):
        if entry.periodic and entry.claimed_least_period is not None and not entry.period_matches:
            return None
        return str(entry.label), entry.value
    return entry


def chain_check(name: str, entries: Iterable[ChainEntry]) -> CheckResult:
    """
    Строгий возрастающий порядок. Отсутствующие точки и периодические точки,
    чей период отличается от заявленного, в цепочку не входят.
    """
    items = [item for item in (_chain_item(e) for e in entries) if item is not None]
    for (la, a), (lb, b) in zip(items, items[1:]):
        if not a < b:
            return CheckResult(name, False, f"{la} = {format_rat(a)} is not below {lb} = {format_rat(b)}")
    return CheckResult(name, True, f"{len(items)} points in order")


def hull_check(name: str, sequences: Dict[str, Sequence[Optional[LabeledPoint]]]) -> CheckResult:
    """Выпуклые оболочки последовательностей попарно не пересекаются"""
    hulls = []
    for seq_name, seq in sequences.items():
        values = [p.value for p in seq if p is not None and p.period_matches]
        if values:
            hulls.append((seq_name, min(values), max(values)))
    for i, (na, lo_a, hi_a) in enumerate(hulls):
        for nb, lo_b, hi_b in hulls[i + 1:]:
            if not (hi_a < lo_b or hi_b < lo_a):
                return CheckResult(name, False, f"hulls of {na} and {nb} overlap")
    return CheckResult(name, True, f"{len(hulls)} disjoint hulls")


def missing_check(name: str, expected: Dict[str, Optional[LabeledPoint]]) -> CheckResult:
    absent = [key for key, point in expected.items() if point is None]
    if absent:
        return CheckResult(name, False, "not found: " + ", ".join(absent))
    return CheckResult(name, True)


def _require(value: Optional[Fraction], what: str) -> Fraction:
    if value is None:
        raise ConstructionError(f"Empty construction window for {what}")
    return value


def _assert_order(values: Sequence[Tuple[str, Fraction]], strict: Sequence[bool]) -> None:
    for (la, a), (lb, b), s in zip(values, values[1:], strict):
        if (s and not a < b) or (not s and not a <= b):
            sign = "<" if s else "<="
            raise ConstructionError(f"Expected {la} {sign} {lb}, got {format_rat(a)} and {format_rat(b)}")


# Защитные неравенства и цепочки образов

def guard_square_below_identity(ctx: ConstructionContext) -> CheckResult:
    """f²(x) < x на [v, z0)"""
    w = Interval(ctx.v, ctx.z0)
    ok = strictly_below(iterate(ctx.map, 2, w), identity(w), open_hi=True)
    return CheckResult("f^2(x) < x on [v, z0)", ok)


def guard_square_below_z0(ctx: ConstructionContext) -> CheckResult:
    """f²(x) < z0 на (d, z0)"""
    w = Interval(ctx.d, ctx.z0)
    ok = strictly_below(iterate(ctx.map, 2, w), constant(w, ctx.z0), open_lo=True, open_hi=True)
    return CheckResult("f^2(x) < z0 on (d, z0)", ok)


def guard_image_above_z(ctx: ConstructionContext) -> CheckResult:
    """f(x) > z на (d, z0)"""
    w = Interval(ctx.d, ctx.z0)
    ok = strictly_below(constant(w, ctx.z), iterate(ctx.map, 1, w), open_lo=True, open_hi=True)
    return CheckResult("f(x) > z on (d, z0)", ok)


def lower_chain_guard(ctx: ConstructionContext, n: int, u_n: Fraction) -> CheckResult:
    """d < f^{2i}(x) < z0 на (d, u_n) для 1 <= i <= n"""
    w = Interval(ctx.d, u_n)
    low, high = constant(w, ctx.d), constant(w, ctx.z0)
    for i in range(1, n + 1):
        g = iterate(ctx.map, 2 * i, w)
        if not (strictly_below(low, g, True, True) and strictly_below(g, high, True, True)):
            return CheckResult(f"d < f^2i < z0 on (d, u_{n})", False, f"fails for i = {i}")
    return CheckResult(f"d < f^2i < z0 on (d, u_{n})", True)


def upper_chain_guard(ctx: ConstructionContext, n: int, bar_u_n: Fraction) -> CheckResult:
    """v < f^{2n-2}(x) < ... < f²(x) < x на [ū'_n, z0)"""
    w = Interval(bar_u_n, ctx.z0)
    name = f"v < f^(2n-2) < ... < x on [u'bar_{n}, z0)"
    prev = identity(w)
    for i in range(1, n):
        g = iterate(ctx.map, 2 * i, w)
        if not strictly_below(g, prev, open_hi=True):
            return CheckResult(name, False, f"f^{2 * i} is not below f^{2 * i - 2}")
        prev = g
    if not strictly_below(constant(w, ctx.v), prev, open_hi=True):
        return CheckResult(name, False, f"f^{2 * n - 2} is not above v")
    return CheckResult(name, True)


def base_context(f: PwlMap, P: Orbit) -> ConstructionContext:
    """
    Опорные точки построения по орбите P нечетного периода m >= 3.

    Raises:
        InvalidInput: P не орбита f либо m четно или меньше 3
        ConstructionError: пустое окно или нарушен порядок/защитное неравенство
    """
    m = P.least_period
    if m < 3 or m % 2 == 0:
        raise InvalidInput(f"The construction needs an odd period m >= 3, got {m}")
    orbit_from_points(f, P.points)

    low = P.min_point
    e = low
    for _ in range(m - 1):
        e = evaluate(f, e)

    v = _require(extremal_root(f, 1, Side.MIN, Interval(low, e), target=e, open_hi=True), "v")
    z = _require(extremal_root(f, 1, Side.MIN, Interval(v, e), open_lo=True, open_hi=True), "z")
    y = _require(extremal_root(f, 2, Side.MAX, Interval(low, v)), "y")
    z0 = _require(extremal_root(f, 2, Side.MIN, Interval(v, z)), "z0")
    d = _require(extremal_root(f, 2, Side.MAX, Interval(low, v), target=z0), "d")
    breve_u0 = _require(extremal_root(f, 2, Side.MAX, Interval(d, v), target=d), "breve u0'")
    hat_u0 = _require(extremal_root(f, 2, Side.MIN, Interval(v, z0), target=d), "hat u0")

    if least_period(f, y, 2) != 2:
        raise ConstructionError(f"y = {format_rat(y)} is not a period-2 point")
    _assert_order([("min P", low), ("y", y), ("v", v)], [True, True])
    _assert_order([("min P", low), ("d", d), ("breve u0'", breve_u0), ("v", v), ("hat u0", hat_u0),
                   ("z0", z0), ("z", z), ("e", e), ("max P", P.max_point)],
                  [True, True, True, True, True, False, True, False])

    ctx = ConstructionContext(f, P, m, e, v, z, y, z0, d, breve_u0, hat_u0)
    for check in (guard_square_below_identity(ctx), guard_square_below_z0(ctx), guard_image_above_z(ctx)):
        if not check.passed:
            raise ConstructionError(f"Guard inequality failed: {check.name}")
    logger.info(f"Context for period {m}: d={format_rat(d)}, v={format_rat(v)}, z0={format_rat(z0)}")
    return ctx


def anchor_points(ctx: ConstructionContext) -> Tuple[LabeledPoint, ...]:
    """Опорные точки контекста в виде помеченных точек"""
    def anchor(kind: str, value: Fraction) -> LabeledPoint:
        return LabeledPoint(PointLabel(Family.ANCHOR, kind), value)

    return (
        anchor("minP", ctx.min_p),
        anchor("d", ctx.d),
        LabeledPoint(PointLabel(Family.ANCHOR, "y"), ctx.y, exponent=2, periodic=True,
                     claimed_least_period=2, claim_guaranteed=True,
                     actual_least_period=least_period(ctx.map, ctx.y, 2)),
        anchor("breve_u0'", ctx.breve_u0),
        anchor("v", ctx.v),
        anchor("hat_u0", ctx.hat_u0),
        anchor("z0", ctx.z0),
        anchor("z", ctx.z),
        anchor("e", ctx.e),
        anchor("maxP", ctx.max_p),
    )


# Последовательности d-точек первого слоя (кэшируются по контексту)

@cached(key_prefix="construct")
def u_value(ctx: ConstructionContext, n: int) -> Optional[Fraction]:
    """u_n = min{d <= x <= v : f^{2n}(x) = d}"""
    return extremal_root(ctx.map, 2 * n, Side.MIN, Interval(ctx.d, ctx.v), target=ctx.d)


@cached(key_prefix="construct")
def bar_u_prime_value(ctx: ConstructionContext, n: int) -> Optional[Fraction]:
    """ū'_n = max{v <= x <= z0 : f^{2n}(x) = d}"""
    return extremal_root(ctx.map, 2 * n, Side.MAX, Interval(ctx.v, ctx.z0), target=ctx.d)


@cached(key_prefix="construct")
def mu_tilde_prime_value(ctx: ConstructionContext, n: int) -> Optional[Fraction]:
    """μ̃'_{m,n} = max{min P <= x <= d : f^{m+2n}(x) = d}, n >= 0"""
    return extremal_root(ctx.map, ctx.m + 2 * n, Side.MAX, Interval(ctx.min_p, ctx.d), target=ctx.d)


@cached(key_prefix="construct")
def mu_breve_value(ctx: ConstructionContext, n: int) -> Optional[Fraction]:
    """μ̆_{m,n} = min{ŭ'_0 <= x <= v : f^{m+2n}(x) = d}"""
    return extremal_root(ctx.map, ctx.m + 2 * n, Side.MIN, Interval(ctx.breve_u0, ctx.v), target=ctx.d)


@cached(key_prefix="construct")
def mu_hat_prime_value(ctx: ConstructionContext, n: int) -> Optional[Fraction]:
    """μ̂'_{m,n} = max{v <= x <= û_0 : f^{m+2n}(x) = d}"""
    return extremal_root(ctx.map, ctx.m + 2 * n, Side.MAX, Interval(ctx.v, ctx.hat_u0), target=ctx.d)


def _d_label_point(family: Family, kind: str, n: int, value: Fraction, exponent: int) -> LabeledPoint:
    return LabeledPoint(PointLabel(family, kind, (n,)), value, exponent=exponent)


def u_points(ctx: ConstructionContext, N: int) -> Tuple[LabeledPoint, ...]:
    """
    u_1 > u_2 > ... > u_N > d с проверкой d < f^{2i}(x) < z0 на (d, u_n).

    Raises:
        ConstructionError: пустое окно, нарушен порядок или защитная цепочка
    """
    points = []
    for n in range(1, N + 1):
        value = _require(u_value(ctx, n), f"u_{n}")
        guard = lower_chain_guard(ctx, n, value)
        if not guard.passed:
            raise ConstructionError(f"{guard.name}: {guard.detail}")
        points.append(_d_label_point(Family.PLAIN, "u", n, value, 2 * n))
    order = [("d", ctx.d)] + [(str(p.label), p.value) for p in reversed(points)]
    _assert_order(order, [True] * len(points))
    return tuple(points)


def bar_u_points(ctx: ConstructionContext, N: int) -> Tuple[LabeledPoint, ...]:
    """
    v < ū'_1 < ū'_2 < ... < ū'_N < z0 с проверкой монотонной цепочки образов.

    Raises:
        ConstructionError: пустое окно, нарушен порядок или цепочка образов
    """
    points = []
    for n in range(1, N + 1):
        value = _require(bar_u_prime_value(ctx, n), f"u'bar_{n}")
        guard = upper_chain_guard(ctx, n, value)
        if not guard.passed:
            raise ConstructionError(f"{guard.name}: {guard.detail}")
        points.append(_d_label_point(Family.BAR, "u'", n, value, 2 * n))
    order = [("v", ctx.v)] + [(str(p.label), p.value) for p in points] + [("z0", ctx.z0)]
    _assert_order(order, [True] * (len(points) + 1))
    return tuple(points)


def _periodic_or_fail(point: Optional[LabeledPoint], what: str) -> LabeledPoint:
    if point is None:
        raise ConstructionError(f"No periodic point for {what}")
    return point


def layer1(ctx: ConstructionContext, N: int) -> LayerResult:
    """
    Первый слой базовой башни для n <= N: пять семейств, их d-точки
    и главная последовательность p_{m+2n}; периоды проверены, цепочки порядка сверены.

    Raises:
        ConstructionError: пустое окно
    """
    if N < 1:
        raise InvalidInput(f"Layer size must be positive, got {N}")
    f, m = ctx.map, ctx.m
    points: List[LabeledPoint] = []
    checks: List[CheckResult] = []

    # tilde: [min P, d]
    tilde_window = Interval(ctx.min_p, ctx.d)
    tilde_chain: List[ChainEntry] = []
    for n in range(0, N + 1):
        q = _periodic_or_fail(
            find_periodic(ctx, PointLabel(Family.TILDE, "q", (n,)), m + 2 * n, Side.MAX, tilde_window),
            f"q~_{m + 2 * n}")
        mu = _d_label_point(Family.TILDE, "mu'", n, _require(mu_tilde_prime_value(ctx, n), f"mu~'_{n}"), m + 2 * n)
        points += [q, mu]
        tilde_chain += [q, mu]
    first_q = tilde_chain[0]
    checks.append(CheckResult("min P <= q~_m", ctx.min_p <= first_q.value))
    checks.append(chain_check("tilde layer 1", tilde_chain + [("d", ctx.d)]))

    # plain: [d, u_1]
    us = u_points(ctx, N + 1)
    points += list(us)
    plain_chain: List[ChainEntry] = [("d", ctx.d), us[N]]
    for n in range(N, 0, -1):
        c = _periodic_or_fail(
            find_periodic(ctx, PointLabel(Family.PLAIN, "c", (n,)), 2 * n, Side.MIN, Interval(ctx.d, us[n - 1].value)),
            f"c_{2 * n}")
        points.append(c)
        plain_chain += [c, us[n - 1]]
    checks.append(chain_check("plain layer 1", plain_chain))
    checks.append(CheckResult("u_1 <= breve u0'", us[0].value <= ctx.breve_u0))

    # breve: [ŭ'_0, v]
    breve_window = Interval(ctx.breve_u0, ctx.v)
    breve_chain: List[ChainEntry] = [("breve u0'", ctx.breve_u0)]
    breve_points = []
    for n in range(1, N + 1):
        p = _periodic_or_fail(
            find_periodic(ctx, PointLabel(Family.BREVE, "p", (n,)), m + 2 * n, Side.MIN, breve_window),
            f"p^_{m + 2 * n}")
        mu = _d_label_point(Family.BREVE, "mu", n, _require(mu_breve_value(ctx, n), f"mu^_{n}"), m + 2 * n)
        breve_points.append((p, mu))
        points += [p, mu]
    for p, mu in reversed(breve_points):
        breve_chain += [p, mu]
    checks.append(chain_check("breve layer 1", breve_chain + [("v", ctx.v)]))

    # main: [u_1, v]
    main_window = Interval(us[0].value, ctx.v)
    main_points = []
    for n in range(1, N + 1):
        p = _periodic_or_fail(
            find_periodic(ctx, PointLabel(Family.MAIN, "p", (n,)), m + 2 * n, Side.MIN, main_window),
            f"p_{m + 2 * n}")
        main_points.append(p)
        points.append(p)
    checks.append(chain_check("main layer 1", [("u_1", us[0].value)] + list(reversed(main_points)) + [("v", ctx.v)]))

    # hat: [v, û_0]
    hat_window = Interval(ctx.v, ctx.hat_u0)
    hat_chain: List[ChainEntry] = [("v", ctx.v)]
    for n in range(1, N + 1):
        mu = _d_label_point(Family.HAT, "mu'", n, _require(mu_hat_prime_value(ctx, n), f"mu^'_{n}"), m + 2 * n)
        q = _periodic_or_fail(
            find_periodic(ctx, PointLabel(Family.HAT, "q", (n,)), m + 2 * n, Side.MAX, hat_window),
            f"q^_{m + 2 * n}")
        points += [mu, q]
        hat_chain += [mu, q]
    checks.append(chain_check("hat layer 1", hat_chain + [("hat u0", ctx.hat_u0)]))

    # bar: [ū'_1, z0]
    bars = bar_u_points(ctx, N + 1)
    hat_vs_bar = ctx.hat_u0 <= bars[0].value
    checks.append(CheckResult("hat u0 <= u'bar_1", hat_vs_bar))
    points += list(bars)
    bar_chain: List[ChainEntry] = [bars[0]]
    for n in range(1, N + 1):
        c = _periodic_or_fail(
            find_periodic(ctx, PointLabel(Family.BAR, "c", (n,)), 2 * n + 2, Side.MIN, Interval(bars[n - 1].value, ctx.z0)),
            f"c-bar_{2 * n + 2}")
        points.append(c)
        bar_chain += [c, bars[n]]
    checks.append(chain_check("bar layer 1", bar_chain + [("z0", ctx.z0)]))

    result = LayerResult(tuple(points), tuple(checks))
    if not result.passed:
        logger.warning(f"Layer 1 verification has failures for period {m}")
    return result


def remark3_points(ctx: ConstructionContext, count: int) -> LayerResult:
    """
    c̃'*_{2m+2i} = max{min P <= x <= d : f^{2m+2i}(x) = x}, i = 0..count.
    Для i >= 1 заявлен период 2m+2i; для i = 0 сообщается фактический период.
    """
    window = Interval(ctx.min_p, ctx.d)
    points = []
    for i in range(0, count + 1):
        exponent = 2 * ctx.m + 2 * i
        label = PointLabel(Family.TILDE, "c'*", (i,))
        if i == 0:
            value = _require(extremal_root(ctx.map, exponent, Side.MAX, window), "c~'*_2m")
            points.append(LabeledPoint(label, value, exponent=exponent, periodic=True,
                                       actual_least_period=least_period(ctx.map, value, exponent),
                                       fallbacks=(ctx.m,)))
        else:
            points.append(_periodic_or_fail(find_periodic(ctx, label, exponent, Side.MAX, window),
                                            f"c~'*_{exponent}"))
    checks = (chain_check("c'* chain", list(points[1:]) + [("d", ctx.d)]),)
    return LayerResult(tuple(points), checks)


def guard_report(ctx: ConstructionContext, N: int) -> Tuple[CheckResult, ...]:
    """Все защитные неравенства и цепочки образов для n <= N"""
    checks = [guard_square_below_identity(ctx), guard_square_below_z0(ctx), guard_image_above_z(ctx)]
    for n in range(1, N + 1):
        u_n = u_value(ctx, n)
        if u_n is None:
            checks.append(CheckResult(f"u_{n} exists", False))
        else:
            checks.append(lower_chain_guard(ctx, n, u_n))
        bar_n = bar_u_prime_value(ctx, n)
        if bar_n is None:
            checks.append(CheckResult(f"u'bar_{n} exists", False))
        else:
            checks.append(upper_chain_guard(ctx, n, bar_n))
    return tuple(checks)


def anchor_chain(ctx: ConstructionContext, N: int) -> CheckResult:
    """d < u_N < ... < u_1 < v < ū'_1 < ... < ū'_N < z0"""
    entries: List[ChainEntry] = [("d", ctx.d)]
    entries += [(f"u_{n}", u_value(ctx, n)) for n in range(N, 0, -1) if u_value(ctx, n) is not None]
    entries.append(("v", ctx.v))
    entries += [(f"u'bar_{n}", bar_u_prime_value(ctx, n)) for n in range(1, N + 1)
                if bar_u_prime_value(ctx, n) is not None]
    entries.append(("z0", ctx.z0))
    return chain_check("anchor chain", entries)
