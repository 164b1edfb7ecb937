"""
Второй и третий слои базовой башни: отсеки пяти семейств, вспомогательные
точки ν, проверка наименьших периодов с порогами гарантий и проверки
об отсутствии периодических точек на отрезках.

Отсек (compartment) - окно между двумя соседними d-точками предыдущего слоя.
Внутри него лежат последовательность d-точек слоя и три монотонные
последовательности периодических точек; их выпуклые оболочки не пересекаются.
"""
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Callable, Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from app.cache import cached
from app.construct import (
    ChainEntry,
    CheckResult,
    ConstructionContext,
    Family,
    LabeledPoint,
    LayerResult,
    PointLabel,
    anchor_points,
    bar_u_prime_value,
    chain_check,
    find_d_point,
    find_periodic,
    hull_check,
    layer1,
    missing_check,
    mu_breve_value,
    mu_hat_prime_value,
    mu_tilde_prime_value,
    remark3_points,
    u_value,
)
from app.errors import InvalidInput
from app.exact import Interval, Side, format_rat
from app.logger import get_logger
from app.periodic import least_period
from app.solve import extremal_root, solve_iter_eq_const, solve_iter_fixed

logger = get_logger(__name__)

TOWER_FAMILIES = (Family.TILDE, Family.PLAIN, Family.BREVE, Family.HAT, Family.BAR)

# Тип показателя: ODD = m + 2Σ, EVEN = 2m + 2Σ, PLAIN = 2Σ (Σ - сумма индексов)
ODD, EVEN, PLAIN = "odd", "even", "plain"
FULL, AFTER, BEFORE = "window", "after_first_d", "before_first_d"

_FLIP = {Side.MIN: Side.MAX, Side.MAX: Side.MIN}

# d-точки первого слоя: функция значения и сторона экстремума
_LAYER1_D = {
    Family.TILDE: (mu_tilde_prime_value, Side.MAX),
    Family.PLAIN: (u_value, Side.MIN),
    Family.BREVE: (mu_breve_value, Side.MIN),
    Family.HAT: (mu_hat_prime_value, Side.MAX),
    Family.BAR: (bar_u_prime_value, Side.MAX),
}

_D_KIND = {
    (Family.TILDE, 2): "mu", (Family.TILDE, 3): "mu'",
    (Family.PLAIN, 2): "u'", (Family.PLAIN, 3): "u",
    (Family.BREVE, 2): "mu'", (Family.BREVE, 3): "mu",
    (Family.HAT, 2): "mu", (Family.HAT, 3): "mu'",
    (Family.BAR, 2): "u", (Family.BAR, 3): "u'",
}

# (вид, тип показателя, сторона, подокно поиска)
_SEQUENCES = {
    (Family.TILDE, 2): [("p", ODD, Side.MIN, FULL), ("c", EVEN, Side.MIN, AFTER), ("c'", EVEN, Side.MAX, FULL)],
    (Family.PLAIN, 2): [("p", ODD, Side.MIN, FULL), ("q", ODD, Side.MAX, BEFORE), ("c'", PLAIN, Side.MAX, FULL)],
    (Family.BREVE, 2): [("q", ODD, Side.MAX, FULL), ("c'", EVEN, Side.MAX, BEFORE), ("c", EVEN, Side.MIN, FULL)],
    (Family.HAT, 2): [("p", ODD, Side.MIN, FULL), ("c", EVEN, Side.MIN, AFTER), ("c'", EVEN, Side.MAX, FULL)],
    (Family.BAR, 2): [("c", PLAIN, Side.MIN, FULL), ("p", ODD, Side.MIN, AFTER), ("q", ODD, Side.MAX, FULL)],
    (Family.TILDE, 3): [("q", ODD, Side.MAX, FULL), ("c'", EVEN, Side.MAX, BEFORE), ("c", EVEN, Side.MIN, FULL)],
    (Family.PLAIN, 3): [("c", PLAIN, Side.MIN, FULL), ("p", ODD, Side.MIN, AFTER), ("q", ODD, Side.MAX, FULL)],
    (Family.BREVE, 3): [("p", ODD, Side.MIN, FULL), ("c", EVEN, Side.MIN, AFTER), ("c'", EVEN, Side.MAX, FULL)],
    (Family.HAT, 3): [("q", ODD, Side.MAX, FULL), ("c'", EVEN, Side.MAX, BEFORE), ("c", EVEN, Side.MIN, FULL)],
    (Family.BAR, 3): [("c'", PLAIN, Side.MAX, FULL), ("q", ODD, Side.MAX, BEFORE), ("p", ODD, Side.MIN, FULL)],
}

# Последовательности, входящие в проверку оболочек, и исключенные первые точки
_HULLS = {
    (Family.TILDE, 2): (("p", "c", "c'"), ("p",)),
    (Family.PLAIN, 2): (("p", "q", "c'"), ()),
    (Family.BREVE, 2): (("q", "c'", "c"), ()),
    (Family.HAT, 2): (("p", "c", "c'"), ()),
    (Family.BAR, 2): (("p", "q"), ()),
    (Family.TILDE, 3): (("q", "c'", "c"), ("q",)),
    (Family.PLAIN, 3): (("c", "p", "q"), ()),
    (Family.BREVE, 3): (("p", "c", "c'"), ()),
    (Family.HAT, 3): (("q", "c'", "c"), ()),
    (Family.BAR, 3): (("c'", "q", "p"), ()),
}


def d_side(family: Family, layer: int) -> Side:
    """Сторона экстремума d-точек семейства на данном слое (слои чередуются)"""
    side = _LAYER1_D[family][1]
    for _ in range(1, layer):
        side = _FLIP[side]
    return side


def _exponent(kind: str, m: int, indices: Sequence[int]) -> int:
    base = 2 * sum(indices)
    if kind == ODD:
        return m + base
    if kind == EVEN:
        return 2 * m + base
    return base


def _d_exponent_kind(family: Family) -> str:
    return PLAIN if family in (Family.PLAIN, Family.BAR) else ODD


def nu_exponent(ctx: ConstructionContext, family: Family, indices: Sequence[int]) -> int:
    return _exponent(_d_exponent_kind(family), ctx.m, indices)


def _plain_exceptional_index(n: int, k: int) -> int:
    """ı ∈ [1, n] с n | (k + ı)"""
    r = (-k) % n
    return r if r else n


def guarantee(ctx: ConstructionContext, family: Family, layer: int, indices: Tuple[int, ...],
              exponent_kind: str, j: int) -> Tuple[bool, Tuple[int, ...]]:
    """
    Гарантирован ли заявленный наименьший период точки с последним индексом j
    и какие периоды допустимы вместо него.
    """
    if exponent_kind == ODD:
        return True, ()
    n = indices[0]
    if exponent_kind == EVEN:
        if layer == 2:
            threshold = ctx.m + n + 3 if family is Family.HAT else n + 3
        else:
            threshold = n + indices[1] + 3
        return j >= threshold, ()
    # PLAIN
    if layer == 2:
        if family is Family.PLAIN and j == n:
            return False, (2 * n,)
        return True, ()
    k = indices[1]
    if family is Family.PLAIN:
        if j in (_plain_exceptional_index(n, k), n + k):
            return False, (2 * n + 2 * k, 2 * n)
        return True, ()
    return j >= n + k + 2, ()


def _window_between(a: Optional[Fraction], b: Optional[Fraction], side: Side) -> Optional[Interval]:
    """Окно между d-точками с индексами j и j+1 (max-точки растут, min-точки убывают)"""
    if a is None or b is None:
        return None
    lo, hi = (a, b) if side is Side.MAX else (b, a)
    if not lo < hi:
        return None
    return Interval(lo, hi)


def layer2_window(ctx: ConstructionContext, family: Family, n: int) -> Optional[Interval]:
    value, side = _LAYER1_D[family]
    return _window_between(value(ctx, n), value(ctx, n + 1), side)


@cached(key_prefix="towers")
def layer2_d_value(ctx: ConstructionContext, family: Family, n: int, k: int) -> Optional[Fraction]:
    window = layer2_window(ctx, family, n)
    if window is None:
        return None
    exponent = _exponent(_d_exponent_kind(family), ctx.m, (n, k))
    return extremal_root(ctx.map, exponent, d_side(family, 2), window, target=ctx.d)


def layer3_window(ctx: ConstructionContext, family: Family, n: int, k: int) -> Optional[Interval]:
    side = d_side(family, 2)
    return _window_between(layer2_d_value(ctx, family, n, k), layer2_d_value(ctx, family, n, k + 1), side)


@cached(key_prefix="towers")
def layer3_d_value(ctx: ConstructionContext, family: Family, n: int, k: int, i: int) -> Optional[Fraction]:
    window = layer3_window(ctx, family, n, k)
    if window is None:
        return None
    exponent = _exponent(_d_exponent_kind(family), ctx.m, (n, k, i))
    return extremal_root(ctx.map, exponent, d_side(family, 3), window, target=ctx.d)


def compartment_window(ctx: ConstructionContext, family: Family, indices: Tuple[int, ...]) -> Optional[Interval]:
    if len(indices) == 1:
        return layer2_window(ctx, family, indices[0])
    if len(indices) == 2:
        return layer3_window(ctx, family, *indices)
    raise InvalidInput(f"Compartment indices must be (n) or (n, k), got {indices}")


@dataclass(frozen=True)
class NuChoice:
    """Выбранная вспомогательная точка ν и номер корня в упорядоченном просмотре"""
    point: Optional[LabeledPoint]
    scan_index: Optional[int]
    sandwich: Optional[Interval]
    candidates: int = 0


def aux_nu(ctx: ConstructionContext, family: Family, indices: Tuple[int, ...]) -> NuChoice:
    """
    ν: корень f^{e}(x) = v внутри отсека, лежащий строго между первой d-точкой
    слоя и противоположным концом окна. Корни просматриваются от экстремального
    (min для min-отсеков, max для max-отсеков) до первого, попавшего в интервал.
    """
    layer = len(indices) + 1
    window = compartment_window(ctx, family, indices)
    if window is None:
        return NuChoice(None, None, None)
    if layer == 2:
        first_d = layer2_d_value(ctx, family, indices[0], 1)
    else:
        first_d = layer3_d_value(ctx, family, indices[0], indices[1], 1)
    if first_d is None:
        return NuChoice(None, None, None)
    side = d_side(family, layer)
    sandwich = Interval(first_d, window.hi) if side is Side.MIN else Interval(window.lo, first_d)

    exponent = nu_exponent(ctx, family, indices)
    roots = solve_iter_eq_const(ctx.map, exponent, ctx.v, window)
    candidates: List[Fraction] = []
    for comp in roots:
        candidates.append(comp.lo)
        if not comp.is_point:
            candidates.append(comp.hi)
    if side is Side.MAX:
        candidates.reverse()
    label = PointLabel(family, "nu", indices, layer)
    for idx, x in enumerate(candidates):
        if sandwich.lo < x < sandwich.hi:
            if idx:
                logger.info(f"{label}: extremal root rejected, used root #{idx}")
            return NuChoice(LabeledPoint(label, x, exponent=exponent), idx, sandwich, len(candidates))
    logger.warning(f"{label}: no root of f^{exponent} = v inside {sandwich}")
    return NuChoice(None, None, sandwich, len(candidates))


@dataclass(frozen=True)
class Compartment:
    family: Family
    layer: int
    indices: Tuple[int, ...]
    window: Optional[Interval]
    points: Tuple[LabeledPoint, ...]
    nu: NuChoice
    checks: Tuple[CheckResult, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks) and all(p.verified for p in self.points)

    def sequence(self, kind: str) -> List[LabeledPoint]:
        return sorted((p for p in self.points if p.label.kind == kind), key=lambda p: p.label.indices[-1])

    def all_points(self) -> List[LabeledPoint]:
        extra = [self.nu.point] if self.nu.point is not None else []
        return list(self.points) + extra


def _interleave(a: Sequence[ChainEntry], b: Sequence[ChainEntry]) -> List[ChainEntry]:
    out: List[ChainEntry] = []
    for x, y in zip(a, b):
        out += [x, y]
    return out


def _rev(seq: Sequence[ChainEntry]) -> List[ChainEntry]:
    return list(reversed(seq))


ChainBuilder = Callable[[Tuple[str, Fraction], Tuple[str, Fraction], List, Dict[str, List], Optional[LabeledPoint]],
                        List[Tuple[str, List[ChainEntry]]]]


def _chains_tilde2(lo, hi, ds, s, nu):
    return [
        ("mu/p chain", [lo] + _interleave(_rev(ds), _rev(s["p"])) + [nu]),
        ("c/c' chain", _rev(s["c"]) + [nu] + s["c'"] + [hi]),
        ("c above mu_1", ds[:1] + _rev(s["c"])),
    ]


def _chains_plain2(lo, hi, ds, s, nu):
    return [
        ("p/q/u'/c' chain", [lo] + _rev(s["p"]) + [nu] + s["q"] + _interleave(ds, s["c'"]) + [hi]),
    ]


def _chains_breve2(lo, hi, ds, s, nu):
    return [
        ("c/c'/mu'/q chain", [lo] + _rev(s["c"]) + [nu] + s["c'"] + _interleave(ds, s["q"]) + [hi]),
    ]


def _chains_hat2(lo, hi, ds, s, nu):
    return [
        ("p/mu chain", [lo] + _interleave(_rev(s["p"]), _rev(ds)) + [nu, hi]),
        ("c/c' chain", ds[:1] + _rev(s["c"]) + [nu] + s["c'"] + [hi]),
    ]


def _chains_bar2(lo, hi, ds, s, nu):
    return [
        ("u chain", [lo] + _rev(ds) + [nu, hi]),
        ("p/q chain", ds[:1] + _rev(s["p"]) + [nu] + s["q"] + [hi]),
    ]


def _chains_tilde3(lo, hi, ds, s, nu):
    q = s["q"]
    return [
        ("c/c'/mu'/q chain", [lo] + _rev(s["c"]) + [nu] + s["c'"] + ds[:1]
         + _interleave(q[1:], ds[1:]) + [hi]),
        ("q_1 chain", [nu] + q[:1] + ds[:1]),
    ]


def _chains_plain3(lo, hi, ds, s, nu):
    return [
        ("c/u/p/q chain", [lo] + _interleave(_rev(s["c"]), _rev(ds)) + _rev(s["p"]) + [nu] + s["q"] + [hi]),
    ]


def _chains_breve3(lo, hi, ds, s, nu):
    return [
        ("p/mu/c/c' chain", [lo] + _interleave(_rev(s["p"]), _rev(ds)) + _rev(s["c"]) + [nu] + s["c'"] + [hi]),
    ]


def _chains_hat3(lo, hi, ds, s, nu):
    return [
        ("c/c'/mu'/q chain", [lo] + _rev(s["c"]) + [nu] + s["c'"] + _interleave(ds, s["q"]) + [hi]),
    ]


def _chains_bar3(lo, hi, ds, s, nu):
    return [
        ("u' chain", [lo, nu] + ds + [hi]),
        ("c' chain", ds[:1] + s["c'"] + [hi]),
        ("p/q chain", [lo] + _rev(s["p"]) + [nu] + s["q"] + ds[:1]),
    ]


_CHAINS: Dict[Tuple[Family, int], ChainBuilder] = {
    (Family.TILDE, 2): _chains_tilde2,
    (Family.PLAIN, 2): _chains_plain2,
    (Family.BREVE, 2): _chains_breve2,
    (Family.HAT, 2): _chains_hat2,
    (Family.BAR, 2): _chains_bar2,
    (Family.TILDE, 3): _chains_tilde3,
    (Family.PLAIN, 3): _chains_plain3,
    (Family.BREVE, 3): _chains_breve3,
    (Family.HAT, 3): _chains_hat3,
    (Family.BAR, 3): _chains_bar3,
}


def _build_compartment(ctx: ConstructionContext, family: Family, indices: Tuple[int, ...], count: int) -> Compartment:
    layer = len(indices) + 1
    name = f"L{layer}.{family.value}{list(indices)}"
    window = compartment_window(ctx, family, indices)
    if window is None:
        check = CheckResult(f"{name} window", False, "bounding d-points missing or out of order")
        return Compartment(family, layer, indices, None, (), NuChoice(None, None, None), (check,))

    def label(kind: str, j: int) -> PointLabel:
        return PointLabel(family, kind, indices + (j,), layer)

    side = d_side(family, layer)
    d_kind = _D_KIND[(family, layer)]
    d_exp_kind = _d_exponent_kind(family)
    ds: List[Optional[LabeledPoint]] = []
    for j in range(1, count + 1):
        ds.append(find_d_point(ctx, label(d_kind, j), _exponent(d_exp_kind, ctx.m, indices + (j,)), side, window))
    first_d = ds[0]

    sequences: Dict[str, List[Optional[LabeledPoint]]] = {}
    for kind, exp_kind, seq_side, search_kind in _SEQUENCES[(family, layer)]:
        if search_kind == FULL:
            search = window
        elif first_d is None:
            search = None
        elif search_kind == AFTER:
            search = Interval(first_d.value, window.hi)
        else:
            search = Interval(window.lo, first_d.value)
        seq: List[Optional[LabeledPoint]] = []
        for j in range(1, count + 1):
            if search is None:
                seq.append(None)
                continue
            guaranteed, fallbacks = guarantee(ctx, family, layer, indices, exp_kind, j)
            seq.append(find_periodic(ctx, label(kind, j), _exponent(exp_kind, ctx.m, indices + (j,)),
                                     seq_side, window, search=search,
                                     guaranteed=guaranteed, fallbacks=fallbacks))
        sequences[kind] = seq

    nu = aux_nu(ctx, family, indices)

    checks: List[CheckResult] = []
    expected: Dict[str, Optional[LabeledPoint]] = {}
    for j, d in enumerate(ds, start=1):
        expected[str(label(d_kind, j))] = d
    for kind, seq in sequences.items():
        for j, p in enumerate(seq, start=1):
            expected[str(label(kind, j))] = p
    expected[str(PointLabel(family, "nu", indices, layer))] = nu.point
    checks.append(missing_check(f"{name} points found", expected))

    lo = ("W.lo", window.lo)
    hi = ("W.hi", window.hi)
    for chain_name, entries in _CHAINS[(family, layer)](lo, hi, ds, sequences, nu.point):
        checks.append(chain_check(f"{name} {chain_name}", entries))

    hull_kinds, skip_first = _HULLS[(family, layer)]
    hull_sequences = {kind: (sequences[kind][1:] if kind in skip_first else sequences[kind]) for kind in hull_kinds}
    checks.append(hull_check(f"{name} hulls", hull_sequences))

    points = [p for p in ds if p is not None]
    for seq in sequences.values():
        points += [p for p in seq if p is not None]

    compartment = Compartment(family, layer, indices, window, tuple(points), nu, tuple(checks))
    if not compartment.passed:
        failed = [c.name for c in checks if not c.passed] + [str(p.label) for p in points if not p.verified]
        logger.warning(f"{name}: verification failures: {failed}")
    return compartment


def _check_family(family: Family) -> Family:
    family = Family(family)
    if family not in TOWER_FAMILIES:
        raise InvalidInput(f"Unknown tower family {family.value!r}")
    return family


def _first_n(family: Family) -> int:
    return 0 if family is Family.TILDE else 1


def layer2_compartment(ctx: ConstructionContext, family: Family, n: int, count: int) -> Compartment:
    """Отсек второго слоя (n) с k = 1..count"""
    family = _check_family(family)
    if n < _first_n(family) or count < 1:
        raise InvalidInput(f"Invalid layer-2 indices n={n}, count={count} for {family.value}")
    return _build_compartment(ctx, family, (n,), count)


def layer3_compartment(ctx: ConstructionContext, family: Family, n: int, k: int, count: int) -> Compartment:
    """Отсек третьего слоя (n, k) с i = 1..count"""
    family = _check_family(family)
    if n < _first_n(family) or k < 1 or count < 1:
        raise InvalidInput(f"Invalid layer-3 indices n={n}, k={k}, count={count} for {family.value}")
    return _build_compartment(ctx, family, (n, k), count)


class Lemma(str, Enum):
    L4 = "L4"
    L4BAR = "L4BAR"
    L8 = "L8"
    L12 = "L12"
    L13 = "L13"
    L14 = "L14"


_LEMMA_ARITY = {Lemma.L4: 1, Lemma.L4BAR: 1, Lemma.L8: 2, Lemma.L12: 3, Lemma.L13: 2, Lemma.L14: 2}


@dataclass
class NonexistenceReport:
    lemma: Lemma
    indices: Tuple[int, ...]
    window: Optional[Interval]
    periods_checked: Tuple[int, ...] = ()
    allowed: FrozenSet[int] = frozenset()
    required: FrozenSet[int] = frozenset()
    found: Dict[int, Tuple[Fraction, ...]] = field(default_factory=dict)
    problems: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.problems

    @property
    def name(self) -> str:
        return f"{self.lemma.value}{list(self.indices)}"


def _lemma_setup(ctx: ConstructionContext, lemma: Lemma, indices: Tuple[int, ...]):
    """Окно, проверяемые периоды, разрешенные и обязательные периоды, исключение правого конца"""
    m = ctx.m
    if lemma is Lemma.L4:
        n, = indices
        u_n = u_value(ctx, n)
        window = Interval(ctx.d, u_n) if u_n is not None else None
        return window, range(1, 2 * n + 2), {2 * n}, {2 * n}, False
    if lemma is Lemma.L4BAR:
        n, = indices
        bar_n = bar_u_prime_value(ctx, n)
        window = Interval(bar_n, ctx.z0) if bar_n is not None else None
        return window, range(1, 2 * n + 2), set(), set(), True
    if lemma is Lemma.L8:
        n, i = indices
        lo, hi = layer2_d_value(ctx, Family.PLAIN, n, i), u_value(ctx, n)
        window = Interval(lo, hi) if lo is not None and hi is not None else None
        return window, range(1, 2 * n + 2 * i + 2), {2 * n + 2 * i, 2 * n}, set(), False
    if lemma is Lemma.L12:
        n, k, i = indices
        lo, hi = layer2_d_value(ctx, Family.PLAIN, n, k), layer3_d_value(ctx, Family.PLAIN, n, k, i)
        window = Interval(lo, hi) if lo is not None and hi is not None else None
        bound = 2 * n + 2 * k + 2 * i
        return window, range(1, bound + 2), {bound, 2 * n + 2 * k, 2 * n}, set(), False
    if lemma is Lemma.L13:
        n, k = indices
        lo, hi = layer2_d_value(ctx, Family.BREVE, n, k), mu_breve_value(ctx, n)
    else:
        n, k = indices
        lo, hi = mu_hat_prime_value(ctx, n), layer2_d_value(ctx, Family.HAT, n, k)
    window = Interval(lo, hi) if lo is not None and hi is not None and lo <= hi else None
    return window, range(1, m + 2 * n + 2 * k, 2), set(), set(), False


def verify_nonexistence(ctx: ConstructionContext, lemma: Lemma, indices: Tuple[int, ...]) -> NonexistenceReport:
    """
    Перечислить периодические точки на проверяемом отрезке для всех проверяемых периодов
    и убедиться, что встречаются только разрешенные наименьшие периоды.
    """
    lemma = Lemma(lemma)
    indices = tuple(indices)
    if len(indices) != _LEMMA_ARITY[lemma] or any(i < 1 for i in indices):
        raise InvalidInput(f"{lemma.value} takes {_LEMMA_ARITY[lemma]} positive indices, got {indices}")
    window, periods, allowed, required, open_hi = _lemma_setup(ctx, lemma, indices)
    report = NonexistenceReport(lemma, indices, window, tuple(periods), frozenset(allowed), frozenset(required))
    if window is None:
        report.problems.append("interval could not be constructed")
        return report

    for p in periods:
        roots = solve_iter_fixed(ctx.map, p, window)
        if not roots.is_finite:
            report.problems.append(f"f^{p}(x) = x on a whole interval")
            continue
        exact = []
        for x in roots.points():
            if open_hi and x == window.hi:
                continue
            if least_period(ctx.map, x, p) == p:
                exact.append(x)
        if exact:
            report.found[p] = tuple(exact)
            if p not in allowed:
                report.problems.append(f"period {p} found at {format_rat(exact[0])}")
    for p in sorted(required):
        if p not in report.found:
            report.problems.append(f"required period {p} not found")
    return report


SECTION_NAMES = {
    Family.TILDE: "[min P, d]",
    Family.PLAIN: "[d, u_1]",
    Family.BREVE: "[u_1, v]",
    Family.MAIN: "[u_1, v]",
    Family.HAT: "[v, u'bar_1]",
    Family.BAR: "[u'bar_1, z0]",
}


def sections(ctx: ConstructionContext) -> Dict[Family, Interval]:
    u1, bar1 = u_value(ctx, 1), bar_u_prime_value(ctx, 1)
    return {
        Family.TILDE: Interval(ctx.min_p, ctx.d),
        Family.PLAIN: Interval(ctx.d, u1),
        Family.BREVE: Interval(u1, ctx.v),
        Family.MAIN: Interval(u1, ctx.v),
        Family.HAT: Interval(ctx.v, bar1),
        Family.BAR: Interval(bar1, ctx.z0),
    }


@dataclass
class Tower:
    context: ConstructionContext
    layer1: LayerResult
    remark3: LayerResult
    compartments: Tuple[Compartment, ...]
    nonexistence: Tuple[NonexistenceReport, ...]
    checks: Tuple[CheckResult, ...] = ()

    def all_points(self) -> List[LabeledPoint]:
        points = list(self.layer1.points) + list(self.remark3.points)
        for comp in self.compartments:
            points += comp.all_points()
        return points

    def listing(self) -> List[LabeledPoint]:
        """Все точки башни в порядке возрастания"""
        return sorted(self.all_points(), key=lambda p: (p.value, str(p.label)))

    def families(self) -> Dict[str, Dict[str, List[LabeledPoint]]]:
        grouped: Dict[str, Dict[str, List[LabeledPoint]]] = {}
        for p in self.all_points():
            family = grouped.setdefault(p.label.family.value, {})
            key = f"L{p.label.layer}" + "".join(f"[{i}]" for i in p.label.indices[:-1])
            family.setdefault(key, []).append(p)
        return grouped

    def all_checks(self) -> List[CheckResult]:
        checks = list(self.layer1.checks) + list(self.remark3.checks) + list(self.checks)
        for comp in self.compartments:
            checks += comp.checks
        for rep in self.nonexistence:
            checks.append(CheckResult(rep.name, rep.passed, "; ".join(rep.problems)))
        return checks

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.all_checks()) and all(p.verified for p in self.all_points())


def _section_checks(ctx: ConstructionContext, points: Iterable[LabeledPoint]) -> List[CheckResult]:
    secs = sections(ctx)
    outside = []
    span = Interval(ctx.min_p, ctx.z0)
    for p in points:
        sec = secs.get(p.label.family)
        if sec is None:
            continue
        if not sec.contains(p.value) or not span.contains(p.value):
            outside.append(f"{p.label} = {format_rat(p.value)} outside {SECTION_NAMES[p.label.family]}")
    return [CheckResult("section containment", not outside, "; ".join(outside[:5]))]


def _label_check(points: Sequence[LabeledPoint]) -> CheckResult:
    seen, dupes = set(), []
    for p in points:
        key = str(p.label)
        if key in seen:
            dupes.append(key)
        seen.add(key)
    return CheckResult("labels unique", not dupes, ", ".join(dupes[:5]))


def assemble_tower(ctx: ConstructionContext, layer2_count: int, layer3_count: int,
                   layer1_count: Optional[int] = None) -> Tower:
    """
    Башня: первый слой, точки c̃'*, отсеки второго и третьего слоев пяти семейств
    для индексов до заданных счетчиков и проверки отсутствия периодов на отрезках.
    """
    if layer2_count < 0 or layer3_count < 0:
        raise InvalidInput("Layer counts must be non-negative")
    n1 = layer1_count or max(2, layer2_count, layer3_count)
    first = layer1(ctx, n1)
    remark = remark3_points(ctx, n1)

    compartments: List[Compartment] = []
    for family in TOWER_FAMILIES:
        start = _first_n(family)
        for n in range(start, start + layer2_count):
            compartments.append(layer2_compartment(ctx, family, n, layer2_count))
    for family in TOWER_FAMILIES:
        start = _first_n(family)
        for n in range(start, start + layer3_count):
            for k in range(1, layer3_count + 1):
                compartments.append(layer3_compartment(ctx, family, n, k, layer3_count))

    reports = [verify_nonexistence(ctx, Lemma.L4, (n,)) for n in range(1, n1 + 1)]
    reports += [verify_nonexistence(ctx, Lemma.L4BAR, (n,)) for n in range(1, n1 + 1)]
    if layer2_count:
        reports += [verify_nonexistence(ctx, Lemma.L8, (1, 1)),
                    verify_nonexistence(ctx, Lemma.L13, (1, 1)),
                    verify_nonexistence(ctx, Lemma.L14, (1, 1))]
    if layer3_count:
        reports.append(verify_nonexistence(ctx, Lemma.L12, (1, 1, 1)))

    tower = Tower(ctx, first, remark, tuple(compartments), tuple(reports))
    points = tower.all_points()
    tower.checks = tuple(_section_checks(ctx, points) + [_label_check(points + list(anchor_points(ctx)))])
    logger.info(f"Tower assembled: {len(points)} points, {len(compartments)} compartments, passed={tower.passed}")
    return tower
