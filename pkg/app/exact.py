"""
Точные скалярные и множественные типы: рациональные числа, отрезки, множества корней.

Рациональные числа - это fractions.Fraction (всегда в несократимой форме
с положительным знаменателем). Плавающая точка в ядре не используется.
"""
import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Iterator, List, Optional, Tuple, Union

from app.errors import InvalidInput

Rational = Fraction
RationalLike = Union[Fraction, int, str]

_RAT_RE = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")


class Side(str, Enum):
    MIN = "min"
    MAX = "max"


def rat_make(num: int, den: int = 1) -> Fraction:
    """Каноническое рациональное число num/den"""
    try:
        return Fraction(num, den)
    except ZeroDivisionError:
        raise InvalidInput(f"Zero denominator in {num}/{den}")
    except TypeError:
        raise InvalidInput(f"Not an integer pair: {num!r}/{den!r}")


def parse_rat(text: str) -> Fraction:
    """
    Разобрать строку "p/q" или "p".

    Raises:
        InvalidInput: неверный формат или нулевой знаменатель
    """
    match = _RAT_RE.match(text) if isinstance(text, str) else None
    if not match:
        raise InvalidInput(f"Not a rational literal: {text!r}")
    num, den = match.group(1), match.group(2)
    return rat_make(int(num), int(den) if den is not None else 1)


def format_rat(x: Fraction) -> str:
    """Сериализация в "p/q" в несократимой форме ("0/1" для нуля)"""
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def as_rat(value: RationalLike) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise InvalidInput(f"Not a rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rat(value)
    raise InvalidInput(f"Not a rational: {value!r}")


@dataclass(frozen=True)
class Interval:
    """Замкнутый отрезок [lo, hi], вырожденный допускается"""
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        lo, hi = as_rat(self.lo), as_rat(self.hi)
        if lo > hi:
            raise InvalidInput(f"Interval bounds out of order: [{lo}, {hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def point(cls, x: RationalLike) -> "Interval":
        return cls(x, x)

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi

    @property
    def length(self) -> Fraction:
        return self.hi - self.lo

    def contains(self, x: Fraction) -> bool:
        return self.lo <= x <= self.hi

    def contains_interval(self, other: "Interval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def intersect(self, other: "Interval") -> Optional["Interval"]:
        lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
        if lo > hi:
            return None
        return Interval(lo, hi)

    def __str__(self) -> str:
        if self.is_point:
            return f"[{format_rat(self.lo)}]"
        return f"[{format_rat(self.lo)}, {format_rat(self.hi)}]"


@dataclass(frozen=True)
class RootSet:
    """
    Точное множество решений как упорядоченный набор непересекающихся
    замкнутых отрезков. Изолированные корни - вырожденные отрезки.
    """
    components: Tuple[Interval, ...] = ()

    @classmethod
    def empty(cls) -> "RootSet":
        return cls(())

    @classmethod
    def canonical(cls, intervals: Iterable[Interval]) -> "RootSet":
        return rootset_canonicalize(intervals)

    def __iter__(self) -> Iterator[Interval]:
        return iter(self.components)

    def __len__(self) -> int:
        return len(self.components)

    def __bool__(self) -> bool:
        return bool(self.components)

    @property
    def is_finite(self) -> bool:
        return all(c.is_point for c in self.components)

    def points(self) -> List[Fraction]:
        """Изолированные корни (левые концы вырожденных компонент)"""
        return [c.lo for c in self.components if c.is_point]

    def contains(self, x: Fraction) -> bool:
        return any(c.contains(x) for c in self.components)

    def restrict(self, window: Interval) -> "RootSet":
        parts = []
        for comp in self.components:
            part = comp.intersect(window)
            if part is not None:
                parts.append(part)
        return RootSet(tuple(parts))

    def union(self, other: "RootSet") -> "RootSet":
        return rootset_canonicalize(self.components + other.components)

    def extremal(self, side: Side, window: Interval,
                 open_lo: bool = False, open_hi: bool = False) -> Optional[Fraction]:
        """
        Наименьшая (наибольшая) точка пересечения с окном.

        Для полуоткрытых окон возвращает None, если экстремум не достигается
        (компонента-отрезок примыкает к исключенному концу).
        """
        side = Side(side)
        if side is Side.MIN:
            for comp in self.components:
                lo, hi = max(comp.lo, window.lo), min(comp.hi, window.hi)
                if lo > hi:
                    continue
                if open_lo and lo == window.lo:
                    if lo == hi:
                        continue
                    return None
                if open_hi and lo == window.hi:
                    continue
                return lo
            return None

        for comp in reversed(self.components):
            lo, hi = max(comp.lo, window.lo), min(comp.hi, window.hi)
            if lo > hi:
                continue
            if open_hi and hi == window.hi:
                if lo == hi:
                    continue
                return None
            if open_lo and hi == window.lo:
                continue
            return hi
        return None

    def __str__(self) -> str:
        if not self.components:
            return "{}"
        return "{" + ", ".join(str(c) for c in self.components) + "}"


def rootset_canonicalize(intervals: Iterable[Interval]) -> RootSet:
    """Отсортировать, объединить соприкасающиеся и убрать дубликаты"""
    ordered = sorted(intervals, key=lambda c: (c.lo, c.hi))
    merged: List[Interval] = []
    for comp in ordered:
        if merged and comp.lo <= merged[-1].hi:
            if comp.hi > merged[-1].hi:
                merged[-1] = Interval(merged[-1].lo, comp.hi)
            continue
        merged.append(comp)
    return RootSet(tuple(merged))


def rootset_extremal(rs: RootSet, side: Side, window: Interval) -> Optional[Fraction]:
    return rs.extremal(side, window)
