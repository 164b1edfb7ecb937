"""
CSV-данные для построения графиков: узлы отображения, путь "паутины" и строки орбит.

Каждое число выводится дважды: точно ("p/q") и десятичным приближением
с 12 значащими цифрами.
"""
import csv
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Dict, Iterable, List, TextIO

from app.errors import InvalidInput
from app.exact import RationalLike, as_rat, format_rat
from app.logger import get_logger
from app.periodic import orbits_of_period
from app.pwl import PwlMap, evaluate

logger = get_logger(__name__)

SIGNIFICANT_DIGITS = 12

GRAPH_FIELDS = ["index", "x", "y", "x_approx", "y_approx"]
COBWEB_FIELDS = ["step", "x", "y", "x_approx", "y_approx"]
ORBIT_FIELDS = ["period", "orbit", "points", "min", "max", "diameter", "min_approx", "max_approx"]
PLOT_KINDS = ("graph", "cobweb", "orbit_rows")


def approx(x: Fraction) -> str:
    """Десятичное приближение с 12 значащими цифрами"""
    with localcontext() as ctx:
        ctx.prec = SIGNIFICANT_DIGITS + 8
        value = Decimal(x.numerator) / Decimal(x.denominator)
    return format(value, f".{SIGNIFICANT_DIGITS}g")


def graph_rows(f: PwlMap) -> List[Dict[str, str]]:
    return [
        {"index": str(i), "x": format_rat(x), "y": format_rat(y), "x_approx": approx(x), "y_approx": approx(y)}
        for i, (x, y) in enumerate(f.nodes)
    ]


def cobweb_rows(f: PwlMap, start: RationalLike, steps: int) -> List[Dict[str, str]]:
    """
    Вершины пути паутины: (x0, x0), (x0, x1), (x1, x1), (x1, x2), ...

    Args:
        start: Начальная точка в области определения
        steps: Число итераций
    """
    if steps < 0:
        raise InvalidInput(f"Step count must be non-negative, got {steps}")
    x = as_rat(start)
    if not f.domain.contains(x):
        raise InvalidInput(f"Start point {format_rat(x)} is outside {f.domain}")
    vertices = [(0, x, x)]
    for step in range(1, steps + 1):
        y = evaluate(f, x)
        vertices.append((step, x, y))
        vertices.append((step, y, y))
        x = y
    return [
        {"step": str(s), "x": format_rat(a), "y": format_rat(b), "x_approx": approx(a), "y_approx": approx(b)}
        for s, a, b in vertices
    ]


def orbit_rows(f: PwlMap, upto: int) -> List[Dict[str, str]]:
    """По одной строке на каждую орбиту наименьшего периода 1..upto"""
    if upto < 1:
        raise InvalidInput(f"Period bound must be positive, got {upto}")
    rows = []
    for n in range(1, upto + 1):
        for idx, orbit in enumerate(orbits_of_period(f, n)):
            rows.append({
                "period": str(n),
                "orbit": str(idx),
                "points": ";".join(format_rat(p) for p in orbit.points),
                "min": format_rat(orbit.min_point),
                "max": format_rat(orbit.max_point),
                "diameter": format_rat(orbit.diameter),
                "min_approx": approx(orbit.min_point),
                "max_approx": approx(orbit.max_point),
            })
    logger.debug(f"Orbit diagram: {len(rows)} rows up to period {upto}")
    return rows


def write_csv(rows: Iterable[Dict[str, str]], fieldnames: List[str], stream: TextIO) -> None:
    writer = csv.DictWriter(stream, fieldnames=fieldnames, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row)


def emit_plot_data(kind: str, f: PwlMap, stream: TextIO, start: RationalLike = None,
                   steps: int = 0, upto: int = 0) -> int:
    """
    Записать CSV выбранного вида в поток.

    Returns:
        Число строк данных
    """
    if kind == "graph":
        rows, fields = graph_rows(f), GRAPH_FIELDS
    elif kind == "cobweb":
        if start is None:
            raise InvalidInput("cobweb needs a start point")
        rows, fields = cobweb_rows(f, start, steps), COBWEB_FIELDS
    elif kind == "orbit_rows":
        rows, fields = orbit_rows(f, upto), ORBIT_FIELDS
    else:
        raise InvalidInput(f"Unknown plot kind {kind!r}; known: {', '.join(PLOT_KINDS)}")
    write_csv(rows, fields, stream)
    return len(rows)
