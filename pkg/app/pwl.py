"""
Непрерывные кусочно-линейные отображения отрезка и их алгебра.

Отображение задается отсортированными узлами (x, y); между узлами -
линейная интерполяция. Упрощение коллинеарных узлов - отдельный проход
(simplify), композиция его не выполняет.
"""
import random
from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Iterable, List, Optional, Tuple

from app import config
from app.cache import get_iterate_cache
from app.errors import InvalidInput, PieceCapExceeded, RangeViolation
from app.exact import Interval, RationalLike, as_rat
from app.logger import get_logger

logger = get_logger(__name__)

UNIT = Interval(0, 1)
HALF = Fraction(1, 2)

Node = Tuple[Fraction, Fraction]


class Unimodality(str, Enum):
    STRICT = "strictly_unimodal"
    WEAK = "weakly_unimodal"
    NOT = "not_unimodal"


@dataclass(frozen=True)
class PwlMap:
    """Кусочно-линейное отображение с узлами xs/ys на отрезке domain"""
    domain: Interval
    xs: Tuple[Fraction, ...]
    ys: Tuple[Fraction, ...]
    is_endomorphism: bool = field(default=True, compare=False)

    @property
    def nodes(self) -> List[Node]:
        return list(zip(self.xs, self.ys))

    @property
    def pieces(self) -> int:
        return max(len(self.xs) - 1, 0)

    @property
    def range(self) -> Interval:
        return Interval(min(self.ys), max(self.ys))

    def slope(self, i: int) -> Fraction:
        return (self.ys[i + 1] - self.ys[i]) / (self.xs[i + 1] - self.xs[i])

    def __call__(self, x: RationalLike) -> Fraction:
        return evaluate(self, x)

    def __str__(self) -> str:
        return f"PwlMap({self.domain}, {self.pieces} pieces)"


def make_pwl(domain: Interval, nodes: Iterable[Tuple[RationalLike, RationalLike]]) -> PwlMap:
    """
    Построить и проверить отображение.

    Args:
        domain: Область определения
        nodes: Узлы (x, y) со строго возрастающими x; первый и последний x совпадают с концами domain

    Raises:
        InvalidInput: пустой список, несортированные узлы, несовпадение концов
    """
    pairs = [(as_rat(x), as_rat(y)) for x, y in nodes]
    if not pairs:
        raise InvalidInput("A map needs at least one node")
    xs = tuple(x for x, _ in pairs)
    ys = tuple(y for _, y in pairs)
    for a, b in zip(xs, xs[1:]):
        if not a < b:
            raise InvalidInput(f"Node x-coordinates must be strictly increasing: {a} then {b}")
    if xs[0] != domain.lo or xs[-1] != domain.hi:
        raise InvalidInput(f"Nodes span [{xs[0]}, {xs[-1]}] but domain is {domain}")
    endo = domain.lo <= min(ys) and max(ys) <= domain.hi
    if not endo:
        logger.debug(f"Map on {domain} leaves its domain: range [{min(ys)}, {max(ys)}]")
    return PwlMap(domain, xs, ys, endo)


def evaluate(f: PwlMap, x: RationalLike) -> Fraction:
    """Точное значение f(x)"""
    x = as_rat(x)
    if not f.domain.contains(x):
        raise InvalidInput(f"Point {x} is outside the domain {f.domain}")
    i = bisect_right(f.xs, x) - 1
    if i >= len(f.xs) - 1:
        return f.ys[-1]
    x0, x1 = f.xs[i], f.xs[i + 1]
    if x == x0:
        return f.ys[i]
    y0, y1 = f.ys[i], f.ys[i + 1]
    return y0 + (y1 - y0) * (x - x0) / (x1 - x0)


def image(f: PwlMap, window: Interval) -> Interval:
    """Образ отрезка: минимум и максимум по концам и внутренним узлам"""
    values = [evaluate(f, window.lo), evaluate(f, window.hi)]
    lo_idx = bisect_right(f.xs, window.lo)
    hi_idx = bisect_left(f.xs, window.hi)
    values.extend(f.ys[lo_idx:hi_idx])
    return Interval(min(values), max(values))


def restrict(f: PwlMap, window: Interval) -> PwlMap:
    """Сужение f на окно внутри области определения"""
    if not f.domain.contains_interval(window):
        raise InvalidInput(f"Window {window} is not inside the domain {f.domain}")
    if window.is_point:
        return PwlMap(window, (window.lo,), (evaluate(f, window.lo),), False)
    lo_idx = bisect_right(f.xs, window.lo)
    hi_idx = bisect_left(f.xs, window.hi)
    xs = (window.lo,) + f.xs[lo_idx:hi_idx] + (window.hi,)
    ys = (evaluate(f, window.lo),) + f.ys[lo_idx:hi_idx] + (evaluate(f, window.hi),)
    endo = window.lo <= min(ys) and max(ys) <= window.hi
    return PwlMap(window, xs, ys, endo)


def compose(outer: PwlMap, inner: PwlMap) -> PwlMap:
    """
    Точная композиция outer∘inner.

    Узлы результата - узлы inner плюс прообразы (под inner) узлов outer,
    лежащие строго внутри кусков inner.

    Raises:
        RangeViolation: образ inner выходит за область определения outer
    """
    if not outer.domain.contains_interval(inner.range):
        raise RangeViolation(f"Range {inner.range} of the inner map leaves the outer domain {outer.domain}")

    oxs = outer.xs
    oys = outer.ys
    xs: List[Fraction] = [inner.xs[0]]
    ys: List[Fraction] = [evaluate(outer, inner.ys[0])]

    for i in range(len(inner.xs) - 1):
        x0, x1 = inner.xs[i], inner.xs[i + 1]
        y0, y1 = inner.ys[i], inner.ys[i + 1]
        if y0 < y1:
            lo_idx = bisect_right(oxs, y0)
            hi_idx = bisect_left(oxs, y1)
            crossings = range(lo_idx, hi_idx)
        elif y0 > y1:
            lo_idx = bisect_right(oxs, y1)
            hi_idx = bisect_left(oxs, y0)
            crossings = range(hi_idx - 1, lo_idx - 1, -1)
        else:
            crossings = range(0)
        if crossings:
            scale = (x1 - x0) / (y1 - y0)
            for j in crossings:
                xs.append(x0 + (oxs[j] - y0) * scale)
                ys.append(oys[j])
        xs.append(x1)
        ys.append(evaluate(outer, y1))

    dom = inner.domain
    endo = dom.lo <= min(ys) and max(ys) <= dom.hi
    return PwlMap(dom, tuple(xs), tuple(ys), endo)


def iterate(f: PwlMap, n: int, window: Optional[Interval] = None, cap: Optional[int] = None) -> PwlMap:
    """
    Итерация f^n, суженная на окно (по умолчанию вся область определения).

    Вычисляется как f∘(f^{n-1}|window), начиная с ближайшей уже вычисленной
    степени j <= n из кэша итераций.

    Raises:
        PieceCapExceeded: число кусков превысило лимит
        RangeViolation: f не эндоморфизм и орбита окна покидает область определения
    """
    if n < 1:
        raise InvalidInput(f"Iterate exponent must be positive, got {n}")
    window = window or f.domain
    cap = cap or config.PIECE_CAP
    memo = get_iterate_cache()

    g: Optional[PwlMap] = None
    j = n
    while j >= 1:
        g = memo.get((f, window, j))
        if g is not None:
            break
        j -= 1
    if g is None:
        g = restrict(f, window)
        j = 1
        memo.set((f, window, 1), g, weight=max(g.pieces, 1))

    while j < n:
        g = compose(f, g)
        j += 1
        if g.pieces > cap:
            logger.info(f"Iterate {j} on {window} has {g.pieces} pieces, cap {cap}")
            raise PieceCapExceeded(g.pieces, cap, j)
        memo.set((f, window, j), g, weight=max(g.pieces, 1))

    if g.pieces > cap:
        raise PieceCapExceeded(g.pieces, cap, n)
    return g


def simplify(f: PwlMap) -> PwlMap:
    """Удалить коллинеарные внутренние узлы"""
    xs: List[Fraction] = [f.xs[0]]
    ys: List[Fraction] = [f.ys[0]]
    for i in range(1, len(f.xs)):
        x, y = f.xs[i], f.ys[i]
        if len(xs) >= 2:
            (xa, ya), (xb, yb) = (xs[-2], ys[-2]), (xs[-1], ys[-1])
            if (yb - ya) * (x - xb) == (y - yb) * (xb - xa):
                xs[-1], ys[-1] = x, y
                continue
        xs.append(x)
        ys.append(y)
    return PwlMap(f.domain, tuple(xs), tuple(ys), f.is_endomorphism)


def same_function(f: PwlMap, g: PwlMap) -> bool:
    """Экстенсиональное равенство: одна область и одинаковые нормализованные узлы"""
    if f.domain != g.domain:
        return False
    a, b = simplify(f), simplify(g)
    return a.xs == b.xs and a.ys == b.ys


def affine(domain: Interval, slope: RationalLike, offset: RationalLike) -> PwlMap:
    """x -> slope*x + offset на отрезке"""
    s, c = as_rat(slope), as_rat(offset)
    if domain.is_point:
        return PwlMap(domain, (domain.lo,), (s * domain.lo + c,), False)
    return make_pwl(domain, [(domain.lo, s * domain.lo + c), (domain.hi, s * domain.hi + c)])


def identity(domain: Interval) -> PwlMap:
    return affine(domain, 1, 0)


def constant(domain: Interval, value: RationalLike) -> PwlMap:
    return affine(domain, 0, value)


def difference(g: PwlMap, h: PwlMap) -> PwlMap:
    """g - h на общей области определения"""
    if g.domain != h.domain:
        raise InvalidInput(f"Domains differ: {g.domain} vs {h.domain}")
    xs = sorted(set(g.xs) | set(h.xs))
    ys = [evaluate(g, x) - evaluate(h, x) for x in xs]
    return PwlMap(g.domain, tuple(xs), tuple(ys), False)


def strictly_negative(diff: PwlMap, open_lo: bool = False, open_hi: bool = False) -> bool:
    """
    Проверить diff(x) < 0 на окне diff.domain (концы можно исключить).

    На каждом куске функция линейна, поэтому достаточно знаков в узлах:
    внутренние узлы строго отрицательны, исключенный конец может быть нулем,
    но не оба конца единственного куска.
    """
    ys = diff.ys
    if len(ys) == 1:
        return open_lo or open_hi or ys[0] < 0
    if any(y >= 0 for y in ys[1:-1]):
        return False
    lo_ok = ys[0] <= 0 if open_lo else ys[0] < 0
    hi_ok = ys[-1] <= 0 if open_hi else ys[-1] < 0
    if not (lo_ok and hi_ok):
        return False
    if len(ys) == 2 and ys[0] == 0 and ys[1] == 0:
        return False
    return True


def strictly_below(g: PwlMap, h: PwlMap, open_lo: bool = False, open_hi: bool = False) -> bool:
    """g(x) < h(x) на общем окне"""
    return strictly_negative(difference(g, h), open_lo, open_hi)


# Каталог отображений

def tent() -> PwlMap:
    """T(x) = 1 - |2x - 1|"""
    return make_pwl(UNIT, [(0, 0), (HALF, 1), (1, 0)])


def tent_scaled(beta: RationalLike) -> PwlMap:
    """T_beta(x) = beta * T(x), 0 < beta <= 1"""
    beta = as_rat(beta)
    if not 0 < beta <= 1:
        raise InvalidInput(f"tent_scaled needs 0 < beta <= 1, got {beta}")
    return make_pwl(UNIT, [(0, 0), (HALF, beta), (1, 0)])


def example_g() -> PwlMap:
    """g(x) = x + 1/2 на [0, 1/2] и 2 - 2x на [1/2, 1]"""
    return make_pwl(UNIT, [(0, HALF), (HALF, 1), (1, 0)])


def truncate_tent(h: RationalLike) -> PwlMap:
    """min{h, T(x)} с явным плато [h/2, 1 - h/2]"""
    h = as_rat(h)
    if not 0 < h <= 1:
        raise InvalidInput(f"truncate_tent needs 0 < h <= 1, got {h}")
    if h == 1:
        return tent()
    return make_pwl(UNIT, [(0, 0), (h / 2, h), (1 - h / 2, h), (1, 0)])


def doubly_truncate(a: RationalLike, b: RationalLike) -> PwlMap:
    """T, зажатое в [a, b]; оба плато заданы явными узлами"""
    a, b = as_rat(a), as_rat(b)
    if not 0 < a < b < 1:
        raise InvalidInput(f"doubly_truncate needs 0 < a < b < 1, got a={a}, b={b}")
    return make_pwl(UNIT, [
        (0, a), (a / 2, a), (b / 2, b), (1 - b / 2, b), (1 - a / 2, a), (1, a),
    ])


def constant_map(value: RationalLike, domain: Interval = UNIT) -> PwlMap:
    return constant(domain, value)


CATALOG = ("tent", "tent_scaled", "example_g", "truncate_tent", "doubly_truncate")


def catalog(name: str, *params: RationalLike) -> PwlMap:
    """Отображение из каталога по имени"""
    builders = {
        "tent": (tent, 0),
        "tent_scaled": (tent_scaled, 1),
        "example_g": (example_g, 0),
        "truncate_tent": (truncate_tent, 1),
        "doubly_truncate": (doubly_truncate, 2),
    }
    if name not in builders:
        raise InvalidInput(f"Unknown catalog map {name!r}; known: {', '.join(CATALOG)}")
    builder, arity = builders[name]
    if len(params) != arity:
        raise InvalidInput(f"{name} takes {arity} parameter(s), got {len(params)}")
    return builder(*params)


def is_unimodal(f: PwlMap) -> Unimodality:
    """
    Классификация по знакам наклонов: слева от 1/2 возрастает, справа убывает.
    Кусок, пересекающий 1/2, допустим только как плато.
    """
    if f.domain != UNIT:
        raise InvalidInput(f"Unimodality is defined on [0, 1], got {f.domain}")
    result = Unimodality.STRICT
    for i in range(f.pieces):
        x0, x1 = f.xs[i], f.xs[i + 1]
        s = f.slope(i)
        if x1 <= HALF:
            wrong, flat = s < 0, s == 0
        elif x0 >= HALF:
            wrong, flat = s > 0, s == 0
        else:
            wrong, flat = s != 0, True
        if wrong:
            return Unimodality.NOT
        if flat:
            result = Unimodality.WEAK
    return result


def random_pwl(rng: random.Random, max_pieces: int = 6, grid: int = 12) -> PwlMap:
    """
    Случайный непрерывный эндоморфизм [0, 1] с узлами на рациональной сетке.

    Наклоны равны 0 или по модулю не меньше 2, поэтому ни у одной итерации
    нет куска с наклоном 1 и множества периодических точек конечны.
    """
    while True:
        pieces = rng.randint(1, max_pieces)
        ys = [Fraction(rng.randint(0, grid), grid) for _ in range(pieces + 1)]
        rises = [abs(b - a) for a, b in zip(ys, ys[1:])]
        total = sum(rises, Fraction(0))
        flats = rises.count(0)
        if flats == 0:
            if total < 2:
                continue
            widths = [r / total for r in rises]
        else:
            scale = max(Fraction(2), total) + 1
            rest = (1 - total / scale) / flats
            widths = [r / scale if r else rest for r in rises]
        xs = [Fraction(0)]
        for w in widths:
            xs.append(xs[-1] + w)
        xs[-1] = Fraction(1)
        return make_pwl(UNIT, list(zip(xs, ys)))
