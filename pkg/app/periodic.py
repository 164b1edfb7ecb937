"""
Периодические точки: наименьший период, группировка в орбиты,
диаметры, h(m), арифметика периодов итераций и проверка вложенности орбит.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import FrozenSet, List, Optional, Sequence, Tuple

from app.cache import cached
from app.errors import ConstructionError, InfinitePeriodicSet, InvalidInput, OrbitClosureError
from app.exact import Interval, RationalLike, Side, as_rat, format_rat
from app.logger import get_logger
from app.pwl import HALF, PwlMap, Unimodality, evaluate, is_unimodal
from app.solve import extremal_root, solve_iter_fixed

logger = get_logger(__name__)


@dataclass(frozen=True)
class Orbit:
    """Периодическая орбита: отсортированные точки и наименьший период"""
    points: Tuple[Fraction, ...]
    least_period: int

    @property
    def min_point(self) -> Fraction:
        return self.points[0]

    @property
    def max_point(self) -> Fraction:
        return self.points[-1]

    @property
    def diameter(self) -> Fraction:
        return self.points[-1] - self.points[0]

    @property
    def hull(self) -> Interval:
        return Interval(self.points[0], self.points[-1])

    def __str__(self) -> str:
        return "{" + ", ".join(format_rat(p) for p in self.points) + "}"


def least_period(f: PwlMap, x: RationalLike, n: int) -> Optional[int]:
    """
    Наименьшее t с f^t(x) = x, если f^n(x) = x; иначе None.

    Raises:
        OrbitClosureError: первый возврат не делит n
    """
    if n < 1:
        raise InvalidInput(f"Period bound must be positive, got {n}")
    x = as_rat(x)
    y = x
    first: Optional[int] = None
    for t in range(1, n + 1):
        y = evaluate(f, y)
        if first is None and y == x:
            first = t
    if y != x:
        return None
    if n % first:
        raise OrbitClosureError(f"First return {first} of {x} does not divide {n}")
    return first


def orbit_of(f: PwlMap, x: RationalLike, limit: int) -> Optional[Orbit]:
    """Орбита x, если x возвращается не более чем за limit шагов"""
    x = as_rat(x)
    points = [x]
    y = evaluate(f, x)
    while y != x:
        if len(points) >= limit:
            return None
        points.append(y)
        y = evaluate(f, y)
    return Orbit(tuple(sorted(points)), len(points))


def orbit_from_points(f: PwlMap, points: Sequence[RationalLike]) -> Orbit:
    """
    Проверить, что заданные точки образуют ровно одну орбиту f.

    Raises:
        InvalidInput: точки не образуют цикл
    """
    values = sorted({as_rat(p) for p in points})
    if not values:
        raise InvalidInput("An orbit needs at least one point")
    orbit = orbit_of(f, values[0], len(values))
    if orbit is None or list(orbit.points) != values:
        raise InvalidInput(f"Points {[format_rat(v) for v in values]} are not a periodic orbit of the map")
    return orbit


@cached(key_prefix="periodic")
def orbits_of_period(f: PwlMap, n: int, cap: Optional[int] = None) -> Tuple[Orbit, ...]:
    """
    Все орбиты наименьшего периода n, упорядоченные по минимальной точке.

    Raises:
        InfinitePeriodicSet: у f^n есть отрезок неподвижных точек
        PieceCapExceeded: f^n превышает лимит кусков
    """
    roots = solve_iter_fixed(f, n, f.domain, cap=cap)
    if not roots.is_finite:
        bad = next(c for c in roots if not c.is_point)
        raise InfinitePeriodicSet(f"f^{n}(x) = x holds on the whole interval {bad}")
    seen = set()
    orbits: List[Orbit] = []
    for x in roots.points():
        if x in seen:
            continue
        if least_period(f, x, n) != n:
            seen.add(x)
            continue
        cycle = [x]
        y = evaluate(f, x)
        while y != x:
            if len(cycle) >= n:
                raise OrbitClosureError(f"Orbit of {x} did not close within {n} steps")
            cycle.append(y)
            y = evaluate(f, y)
        if len(cycle) != n:
            raise OrbitClosureError(f"Orbit of {x} closed after {len(cycle)} steps, expected {n}")
        seen.update(cycle)
        orbits.append(Orbit(tuple(sorted(cycle)), n))
    logger.debug(f"Found {len(orbits)} orbit(s) of period {n}")
    return tuple(orbits)


@cached(key_prefix="periodic")
def period_set(f: PwlMap, N: int, cap: Optional[int] = None) -> FrozenSet[int]:
    """Множество {n <= N : есть орбита наименьшего периода n}, каждое n независимо"""
    return frozenset(n for n in range(1, N + 1) if orbits_of_period(f, n, cap))


def smallest_diameter_orbit(f: PwlMap, n: int, within: Optional[Interval] = None) -> Orbit:
    """
    Орбита периода n наименьшего диаметра; при равенстве - с меньшей минимальной точкой.

    Args:
        within: Рассматривать только орбиты, лежащие в этом отрезке
    """
    candidates = [o for o in orbits_of_period(f, n) if within is None or within.contains_interval(o.hull)]
    if not candidates:
        raise InvalidInput(f"No period-{n} orbit" + (f" inside {within}" if within else ""))
    return min(candidates, key=lambda o: (o.diameter, o.min_point))


def h_value(f: PwlMap, m: int) -> Fraction:
    """h(m) = min max Q по орбитам Q периода m"""
    orbits = orbits_of_period(f, m)
    if not orbits:
        raise InvalidInput(f"No period-{m} orbit")
    return min(o.max_point for o in orbits)


def iterate_period(m: int, n: int) -> int:
    """Наименьший период точки периода m относительно f^n"""
    if m < 1 or n < 1:
        raise InvalidInput(f"Periods must be positive, got {m}, {n}")
    return m // gcd(m, n)


def lift_periods(k: int, n: int) -> FrozenSet[int]:
    """Возможные периоды относительно f точки периода k относительно f^n: kn/s, s | n, (s, k) = 1"""
    if k < 1 or n < 1:
        raise InvalidInput(f"Periods must be positive, got {k}, {n}")
    return frozenset(k * n // s for s in range(1, n + 1) if n % s == 0 and gcd(s, k) == 1)


@dataclass
class NestingReport:
    unimodality: Unimodality
    orbits_checked: int = 0
    pairs_checked: int = 0
    violations: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations


def verify_nested(f: PwlMap, N: int) -> NestingReport:
    """
    Проверка вложенности орбит периода >= 2 до N для унимодального f:
    max P < max Q влечет [min P, max P] ⊂ (min Q, max Q); также f(max P) = min P
    и min P <= 1/2 <= max P.

    Raises:
        InvalidInput: f не унимодально
    """
    shape = is_unimodal(f)
    if shape is Unimodality.NOT:
        raise InvalidInput("verify_nested needs a unimodal map")
    report = NestingReport(unimodality=shape)
    orbits = [o for n in range(2, N + 1) for o in orbits_of_period(f, n)]
    report.orbits_checked = len(orbits)

    for o in orbits:
        if evaluate(f, o.max_point) != o.min_point:
            report.violations.append(f"f(max P) != min P for {o}")
        if not o.min_point <= HALF <= o.max_point:
            report.violations.append(f"1/2 outside the hull of {o}")

    ordered = sorted(orbits, key=lambda o: o.max_point)
    for i, p in enumerate(ordered):
        for q in ordered[i + 1:]:
            report.pairs_checked += 1
            if not (q.min_point < p.min_point and p.max_point < q.max_point):
                report.violations.append(f"hull of {p} is not inside the hull of {q}")

    if report.violations:
        logger.warning(f"Nesting check found {len(report.violations)} violation(s)")
    return report


@dataclass(frozen=True)
class StatementAWitness:
    """Опорные точки орбиты: e, v, неподвижная точка z и (для m >= 3) точка периода 2"""
    orbit: Orbit
    e: Fraction
    v: Fraction
    z: Fraction
    y: Optional[Fraction]


def statement_a_witnesses(f: PwlMap, P: Orbit) -> StatementAWitness:
    """
    По орбите P периода m >= 2 найти неподвижную точку z ∈ (v, e)
    и при m >= 3 точку y периода 2 в [min P, v].

    Raises:
        InvalidInput: P не орбита f или m < 2
        ConstructionError: нужное решение не найдено
    """
    m = P.least_period
    if m < 2:
        raise InvalidInput("Fixed-point and period-2 witnesses need an orbit of period at least 2")
    orbit_from_points(f, P.points)
    low = P.min_point
    e = low
    for _ in range(m - 1):
        e = evaluate(f, e)
    v = extremal_root(f, 1, Side.MIN, Interval(low, e), target=e, open_hi=True)
    if v is None:
        raise ConstructionError(f"No v with f(v) = e in [min P, e)")
    z = extremal_root(f, 1, Side.MIN, Interval(v, e), open_lo=True, open_hi=True)
    if z is None:
        raise ConstructionError("No fixed point in (v, e)")
    y = None
    if m >= 3:
        y = extremal_root(f, 2, Side.MAX, Interval(low, v))
        if y is None or least_period(f, y, 2) != 2:
            raise ConstructionError("No period-2 point in [min P, v]")
    return StatementAWitness(P, e, v, z, y)
