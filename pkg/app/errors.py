"""
Иерархия исключений SharkTower.

Результаты проверок (замкнутость, вложенность, цепочки порядка, периоды)
исключениями не являются: они попадают в отчеты.
"""
from typing import Optional


class SharkTowerError(Exception):
    """Базовое исключение приложения"""


class InvalidInput(SharkTowerError, ValueError):
    """Некорректные входные данные: нулевой знаменатель, несортированные узлы, параметр вне диапазона"""


class RangeViolation(SharkTowerError):
    """Образ внутреннего отображения выходит за область определения внешнего"""


class PieceCapExceeded(SharkTowerError):
    """Итерация превысила лимит числа линейных кусков"""

    def __init__(self, pieces: int, cap: int, exponent: Optional[int] = None):
        self.pieces = pieces
        self.cap = cap
        self.exponent = exponent
        where = f" at exponent {exponent}" if exponent is not None else ""
        super().__init__(f"Piece cap exceeded{where}: {pieces} > {cap}")


class InfinitePeriodicSet(SharkTowerError):
    """Уравнение f^n(x) = x имеет невырожденный отрезок решений"""


class ConstructionError(SharkTowerError):
    """Построение невозможно: P не орбита f, пустое окно или нарушен инвариант"""


class OrbitClosureError(SharkTowerError):
    """Обход орбиты не замкнулся за ожидаемое число шагов"""
