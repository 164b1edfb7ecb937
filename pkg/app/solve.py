"""
Точная изоляция корней уравнений f^k(x) = c и f^k(x) = x на рациональных окнах.

Две стратегии для f^k(x) = c:
  - explicit: построить f^k на окне и решить по кускам;
  - pullback: k раз брать прообраз, ограничивая каждый шаг образом окна.
auto использует explicit и переходит на pullback при превышении лимита кусков.
"""
from enum import Enum
from fractions import Fraction
from typing import List, Optional

from app.errors import InvalidInput, PieceCapExceeded
from app.exact import Interval, RationalLike, RootSet, Side, as_rat, rootset_canonicalize
from app.logger import get_logger
from app.pwl import PwlMap, image, iterate

logger = get_logger(__name__)


class SolveStrategy(str, Enum):
    AUTO = "auto"
    EXPLICIT = "explicit"
    PULLBACK = "pullback"


def preimage(f: PwlMap, target: Interval, window: Optional[Interval] = None) -> RootSet:
    """
    Точный прообраз {x : f(x) ∈ target}, по желанию суженный на окно.

    Плато, попадающее в target, дает целый отрезок.
    """
    parts: List[Interval] = []
    for i in range(len(f.xs) - 1):
        x0, x1 = f.xs[i], f.xs[i + 1]
        y0, y1 = f.ys[i], f.ys[i + 1]
        if window is not None and (x1 < window.lo or x0 > window.hi):
            continue
        if y0 == y1:
            if target.contains(y0):
                parts.append(Interval(x0, x1))
            continue
        lo_y = max(min(y0, y1), target.lo)
        hi_y = min(max(y0, y1), target.hi)
        if lo_y > hi_y:
            continue
        scale = (x1 - x0) / (y1 - y0)
        xa = x0 + (lo_y - y0) * scale
        xb = x0 + (hi_y - y0) * scale
        parts.append(Interval(min(xa, xb), max(xa, xb)))
    if len(f.xs) == 1 and target.contains(f.ys[0]):
        parts.append(Interval.point(f.xs[0]))
    rs = rootset_canonicalize(parts)
    return rs.restrict(window) if window is not None else rs


def _check_window(f: PwlMap, window: Interval) -> None:
    if not f.domain.contains_interval(window):
        raise InvalidInput(f"Window {window} is not inside the domain {f.domain}")


def _solve_pullback(f: PwlMap, k: int, c: Fraction, window: Interval) -> RootSet:
    images = [window]
    for _ in range(k):
        nxt = image(f, images[-1]).intersect(f.domain)
        if nxt is None:
            return RootSet.empty()
        images.append(nxt)

    current = RootSet((Interval.point(c),)).restrict(images[k])
    for j in range(k - 1, -1, -1):
        if not current:
            return current
        pulled = RootSet.empty()
        for comp in current:
            pulled = pulled.union(preimage(f, comp, images[j]))
        current = pulled
    return current


def solve_iter_eq_const(f: PwlMap, k: int, c: RationalLike, window: Optional[Interval] = None,
                        strategy: SolveStrategy = SolveStrategy.AUTO, cap: Optional[int] = None) -> RootSet:
    """
    Точное множество {x ∈ window : f^k(x) = c}.

    Raises:
        PieceCapExceeded: только для strategy=explicit
    """
    if k < 1:
        raise InvalidInput(f"Exponent must be positive, got {k}")
    c = as_rat(c)
    window = window or f.domain
    _check_window(f, window)
    strategy = SolveStrategy(strategy)

    if strategy is SolveStrategy.PULLBACK:
        return _solve_pullback(f, k, c, window)
    try:
        g = iterate(f, k, window, cap=cap)
    except PieceCapExceeded as e:
        if strategy is SolveStrategy.EXPLICIT:
            raise
        logger.info(f"Falling back to pullback for f^{k} = {c} on {window}: {e}")
        return _solve_pullback(f, k, c, window)
    return preimage(g, Interval.point(c))


def fixed_points(g: PwlMap) -> RootSet:
    """Решения g(x) = x по кускам; кусок с наклоном 1 и нулевым сдвигом дает отрезок"""
    parts: List[Interval] = []
    if len(g.xs) == 1:
        if g.ys[0] == g.xs[0]:
            parts.append(Interval.point(g.xs[0]))
        return rootset_canonicalize(parts)
    for i in range(len(g.xs) - 1):
        x0, x1 = g.xs[i], g.xs[i + 1]
        h0, h1 = g.ys[i] - x0, g.ys[i + 1] - x1
        if h0 == 0 and h1 == 0:
            parts.append(Interval(x0, x1))
        elif h0 == h1:
            continue
        elif (h0 <= 0 <= h1) or (h1 <= 0 <= h0):
            root = x0 + h0 * (x1 - x0) / (h0 - h1)
            parts.append(Interval.point(root))
    return rootset_canonicalize(parts)


def solve_iter_fixed(f: PwlMap, k: int, window: Optional[Interval] = None, cap: Optional[int] = None) -> RootSet:
    """
    Точное множество {x ∈ window : f^k(x) = x}.

    Raises:
        PieceCapExceeded: f^k на окне превышает лимит кусков
    """
    if k < 1:
        raise InvalidInput(f"Exponent must be positive, got {k}")
    window = window or f.domain
    _check_window(f, window)
    return fixed_points(iterate(f, k, window, cap=cap))


def extremal_root(f: PwlMap, k: int, side: Side, window: Interval,
                  target: Optional[RationalLike] = None, search: Optional[Interval] = None,
                  open_lo: bool = False, open_hi: bool = False,
                  strategy: SolveStrategy = SolveStrategy.AUTO) -> Optional[Fraction]:
    """
    min/max множества решений f^k(x) = target (или f^k(x) = x, если target не задан).

    Args:
        window: Окно, на котором строится итерация (общее для нескольких поисков)
        search: Подокно, по которому берется экстремум (по умолчанию window)
        open_lo, open_hi: Исключить концы подокна
    """
    search = search or window
    if target is None:
        rs = solve_iter_fixed(f, k, window)
    else:
        rs = solve_iter_eq_const(f, k, target, window, strategy=strategy)
    return rs.extremal(side, search, open_lo=open_lo, open_hi=open_hi)
