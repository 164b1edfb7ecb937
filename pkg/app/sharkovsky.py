"""
Порядок Шарковского, замкнутость множества периодов, минимальные свидетели
и приближение отображения, у которого есть только периоды 2^n.

3 ≺ 5 ≺ 7 ≺ ... ≺ 2·3 ≺ 2·5 ≺ ... ≺ 2²·3 ≺ ... ≺ 2³ ≺ 2² ≺ 2 ≺ 1
"""
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import FrozenSet, List, Optional, Tuple

from app.errors import InvalidInput
from app.exact import Interval
from app.logger import get_logger
from app.periodic import Orbit, period_set, smallest_diameter_orbit
from app.pwl import PwlMap, constant_map, doubly_truncate, tent

logger = get_logger(__name__)

K1_WITNESS_VALUE = Fraction(2, 3)


class Precedence(str, Enum):
    PRECEDES = "precedes"
    EQUALS = "equals"
    FOLLOWS = "follows"


@dataclass(frozen=True)
class SharkovskyKey:
    """n = 2^two_exponent · odd_part"""
    two_exponent: int
    odd_part: int

    @classmethod
    def of(cls, n: int) -> "SharkovskyKey":
        if n < 1:
            raise InvalidInput(f"Sharkovsky order is defined on positive integers, got {n}")
        a = 0
        while n % 2 == 0:
            n //= 2
            a += 1
        return cls(a, n)

    @property
    def value(self) -> int:
        return (2 ** self.two_exponent) * self.odd_part

    def rank(self) -> Tuple[int, int, int]:
        if self.odd_part > 1:
            return (0, self.two_exponent, self.odd_part)
        return (1, -self.two_exponent, 0)


def compare(m: int, n: int) -> Precedence:
    a, b = SharkovskyKey.of(m).rank(), SharkovskyKey.of(n).rank()
    if a < b:
        return Precedence.PRECEDES
    if a > b:
        return Precedence.FOLLOWS
    return Precedence.EQUALS


def precedes(m: int, n: int) -> bool:
    return compare(m, n) is Precedence.PRECEDES


def successors(m: int, N: int) -> List[int]:
    """Все n <= N с m ≺ n в порядке Шарковского"""
    key = SharkovskyKey.of(m).rank()
    later = [n for n in range(1, N + 1) if SharkovskyKey.of(n).rank() > key]
    return sorted(later, key=lambda n: SharkovskyKey.of(n).rank())


def sharkovsky_sorted(values) -> List[int]:
    return sorted(values, key=lambda n: SharkovskyKey.of(n).rank())


@dataclass
class ClosureReport:
    period_set: FrozenSet[int]
    bound: int
    violations: List[Tuple[int, int]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations


def verify_closure(f: PwlMap, N: int, cap: Optional[int] = None) -> ClosureReport:
    """
    Замкнутость: если есть период m и m ≺ n <= N, то есть и период n.
    Нарушения попадают в отчет, исключение не бросается.
    """
    periods = period_set(f, N, cap)
    report = ClosureReport(periods, N)
    for m in sorted(periods):
        for n in successors(m, N):
            if n not in periods:
                report.violations.append((m, n))
    if report.violations:
        logger.warning(f"Closure violated for {len(report.violations)} pair(s): {report.violations[:5]}")
    return report


def minimal_witness_map(k: int) -> PwlMap:
    """
    Минимальный свидетель периода k: T̂_{min P_k, max P_k}, где P_k - орбита периода k
    наименьшего диаметра отображения T. Для k = 1 - постоянное отображение 2/3.
    """
    if k < 1:
        raise InvalidInput(f"Witness period must be positive, got {k}")
    if k == 1:
        return constant_map(K1_WITNESS_VALUE)
    P = smallest_diameter_orbit(tent(), k)
    return doubly_truncate(P.min_point, P.max_point)


@dataclass(frozen=True)
class Power2Approximation:
    map: PwlMap
    q0: Fraction
    q1: Fraction
    chain: Tuple[Orbit, ...]


def power2_map_approx(levels: int) -> Power2Approximation:
    """
    Приближение отображения с периодами 2^n на конечной глубине: вложенная цепочка орбит Q_3, Q_6, ..., Q_{3·2^levels}
    наименьшего диаметра, q0 = max min Q, q1 = min max Q и T̂_{q0, q1}.
    """
    if levels < 1:
        raise InvalidInput(f"levels must be positive, got {levels}")
    T = tent()
    Q = smallest_diameter_orbit(T, 3)
    chain = [Q]
    for j in range(1, levels + 1):
        Q = smallest_diameter_orbit(T, 3 * 2 ** j, within=Interval(Q.min_point, Q.max_point))
        chain.append(Q)
        logger.debug(f"Level {j}: period {3 * 2 ** j} orbit with hull {Q.hull}")
    q0 = max(o.min_point for o in chain)
    q1 = min(o.max_point for o in chain)
    return Power2Approximation(doubly_truncate(q0, q1), q0, q1, tuple(chain))
