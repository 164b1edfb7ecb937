"""
Приемочные проверки 1-12 в виде исполняемых критериев.

Каждый критерий возвращает (passed, detail); исключение внутри критерия
логируется и засчитывается как провал. quick=True сокращает случайные
выборки и глубины для быстрого прогона.
"""
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Optional, Tuple

from app import config
from app.construct import ConstructionContext, Family, base_context, layer1, remark3_points
from app.errors import PieceCapExceeded
from app.logger import get_logger
from app.periodic import orbit_from_points, orbits_of_period, period_set, smallest_diameter_orbit, verify_nested
from app.pwl import PwlMap, evaluate, example_g, random_pwl, tent, truncate_tent
from app.sharkovsky import (
    Precedence,
    compare,
    minimal_witness_map,
    power2_map_approx,
    precedes,
    sharkovsky_sorted,
    successors,
    verify_closure,
)
from app.solve import SolveStrategy, solve_iter_eq_const, solve_iter_fixed
from app.towers import Lemma, assemble_tower, layer2_d_value, verify_nonexistence

logger = get_logger(__name__)

Outcome = Tuple[bool, str]

ORACLE_DRAW_FACTOR = 5
ORDER_SAMPLE_MAX = 10 ** 6


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    detail: str
    seconds: float


@dataclass
class AcceptanceReport:
    quick: bool
    results: List[CriterionResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return bool(self.results) and all(r.passed for r in self.results)


def g_context() -> ConstructionContext:
    g = example_g()
    return base_context(g, orbit_from_points(g, [0, Fraction(1, 2), 1]))


def tent_context() -> ConstructionContext:
    T = tent()
    return base_context(T, smallest_diameter_orbit(T, 3))


def _mismatches(expected: Dict[str, Fraction], actual: Dict[str, Optional[Fraction]]) -> List[str]:
    return [f"{name}: expected {value}, got {actual.get(name)}" for name, value in expected.items()
            if actual.get(name) != value]


def check_g_table(quick: bool) -> Outcome:
    ctx = g_context()
    layer = layer1(ctx, 2)

    def value(family: Family, kind: str, n: int) -> Optional[Fraction]:
        p = layer.find(family, kind, n)
        return p.value if p is not None else None

    actual = {
        "d": ctx.d, "v": ctx.v, "z": ctx.z, "z0": ctx.z0,
        "c2": value(Family.PLAIN, "c", 1), "u1": value(Family.PLAIN, "u", 1),
        "c4": value(Family.PLAIN, "c", 2), "u2": value(Family.PLAIN, "u", 2),
        "c^4": value(Family.BAR, "c", 1),
        "u'_{1,1}": layer2_d_value(ctx, Family.PLAIN, 1, 1),
    }
    expected = {
        "d": Fraction(1, 6), "v": Fraction(1, 2), "z": Fraction(2, 3), "z0": Fraction(2, 3),
        "c2": Fraction(1, 3), "u1": Fraction(5, 12), "c4": Fraction(2, 9), "u2": Fraction(11, 48),
        "c^4": Fraction(5, 9), "u'_{1,1}": Fraction(7, 24),
    }
    bad = _mismatches(expected, actual)
    return not bad, "; ".join(bad) or "all table values match"


def check_g_orbits(quick: bool) -> Outcome:
    g = example_g()
    four = orbits_of_period(g, 4)
    expected = (Fraction(2, 9), Fraction(5, 9), Fraction(13, 18), Fraction(8, 9))
    if [o.points for o in four] != [expected]:
        return False, f"period-4 orbits: {[str(o) for o in four]}"
    six = orbits_of_period(g, 6)
    if len(six) != 2:
        return False, f"expected two period-6 orbits, got {len(six)}"
    if any(p < Fraction(1, 6) for o in six for p in o.points):
        return False, "a period-6 point lies below 1/6"
    return True, "one period-4 orbit, two period-6 orbits above 1/6"


def check_degenerate_remark(quick: bool) -> Outcome:
    ctx = g_context()
    point = remark3_points(ctx, 1).find(Family.TILDE, "c'*", 0)
    if point is None:
        return False, "c~'*_6 not found"
    return point.actual_least_period == 3, f"c~'*_6 = {point.value} has least period {point.actual_least_period}"


def check_tent_counts(quick: bool) -> Outcome:
    T = tent()
    top = 8 if quick else 12
    for k in range(1, top + 1):
        count = len(solve_iter_fixed(T, k).points())
        if count != 2 ** k:
            return False, f"T^{k} has {count} fixed points"
    two = orbits_of_period(T, 2)
    if [o.points for o in two] != [(Fraction(2, 5), Fraction(4, 5))]:
        return False, f"period-2 orbits: {[str(o) for o in two]}"
    if len(orbits_of_period(T, 3)) != 2:
        return False, "expected two period-3 orbits"
    P3 = smallest_diameter_orbit(T, 3)
    if P3.points != (Fraction(2, 7), Fraction(4, 7), Fraction(6, 7)):
        return False, f"P3 = {P3}"
    return True, f"2^k fixed points for k <= {top}, P3 = {P3}"


def _witness_periods(quick: bool) -> range:
    return range(2, 6) if quick else range(2, 9)


def check_witness_maps(quick: bool) -> Outcome:
    T = tent()
    for k in _witness_periods(quick):
        W = minimal_witness_map(k)
        orbits = orbits_of_period(W, k)
        P = smallest_diameter_orbit(T, k)
        if [o.points for o in orbits] != [P.points]:
            return False, f"k={k}: period-{k} orbits {[str(o) for o in orbits]}, expected {P}"
        expected = frozenset([k] + successors(k, 10))
        found = period_set(W, 10)
        if found != expected:
            return False, f"k={k}: period set {sorted(found)}, expected {sorted(expected)}"
    return True, f"witness maps exact for k in {list(_witness_periods(quick))}"


def check_closure(quick: bool) -> Outcome:
    N = 6 if quick else 8
    maps: List[Tuple[str, PwlMap]] = [("tent", tent()), ("g", example_g())]
    maps += [(f"truncate_tent({h})", truncate_tent(h)) for h in (Fraction(2, 3), Fraction(6, 7), Fraction(1))]
    maps += [(f"witness({k})", minimal_witness_map(k)) for k in _witness_periods(quick)]
    for name, f in maps:
        report = verify_closure(f, N)
        if not report.passed:
            return False, f"{name}: violations {report.violations[:3]}"

    rng = random.Random(config.RANDOM_SEED)
    total = 20 if quick else 200
    skipped = 0
    for idx in range(total):
        f = random_pwl(rng)
        try:
            report = verify_closure(f, N, cap=config.SWEEP_PIECE_CAP)
        except PieceCapExceeded:
            skipped += 1
            continue
        if not report.passed:
            return False, f"random map #{idx} {f.nodes}: violations {report.violations[:3]}"
    return True, f"{len(maps)} named maps and {total - skipped} random maps pass ({skipped} over the piece cap)"


def check_power2(quick: bool) -> Outcome:
    approx = power2_map_approx(2)
    if not (approx.q0 <= Fraction(2, 5) < Fraction(4, 5) <= approx.q1):
        return False, f"q0 = {approx.q0}, q1 = {approx.q1}"
    found = period_set(approx.map, 8)
    if not found <= {1, 2, 4, 8} or not {1, 2, 4} <= found:
        return False, f"period set {sorted(found)}"
    return True, f"q0 = {approx.q0}, q1 = {approx.q1}, periods {sorted(found)}"


def check_nesting(quick: bool) -> Outcome:
    for name, f in (("tent", tent()), ("g", example_g())):
        report = verify_nested(f, 6)
        if not report.passed:
            return False, f"{name}: {report.violations[:3]}"
    return True, "orbits nested for tent and g up to period 6"


def _contexts() -> List[Tuple[str, ConstructionContext]]:
    return [("g", g_context()), ("tent", tent_context())]


def check_layer1(quick: bool) -> Outcome:
    N = 3 if quick else 4
    for name, ctx in _contexts():
        layer = layer1(ctx, N)
        failed = [c.name for c in layer.checks if not c.passed]
        wrong = [str(p) for p in layer.points if p.periodic and not p.period_matches]
        if failed or wrong:
            return False, f"{name}: failed checks {failed}, wrong periods {wrong[:3]}"
    return True, f"layer 1 verified for n <= {N} on g and tent"


def check_towers(quick: bool) -> Outcome:
    count = 1 if quick else 2
    for name, ctx in _contexts():
        tower = assemble_tower(ctx, count, count)
        if not tower.passed:
            failed = [c.name for c in tower.all_checks() if not c.passed]
            wrong = [str(p.label) for p in tower.all_points() if not p.verified]
            return False, f"{name}: failed {failed[:5]}, unverified {wrong[:5]}"
        for n in range(1, 4):
            report = verify_nonexistence(ctx, Lemma.L4, (n,))
            if not report.passed:
                return False, f"{name}: {report.name} {report.problems}"
    return True, f"towers with counts ({count}, {count}) verified on g and tent"


def _apply(f: PwlMap, k: int, x: Fraction) -> Fraction:
    for _ in range(k):
        x = evaluate(f, x)
    return x


def check_oracle(quick: bool) -> Outcome:
    rng = random.Random(config.RANDOM_SEED + 11)
    triples = 20 if quick else 100
    samples = 100 if quick else 1000
    max_draws = ORACLE_DRAW_FACTOR * triples
    compared = skipped = 0
    for idx in range(max_draws):
        if compared == triples:
            break
        f = random_pwl(rng)
        k = rng.randint(1, 8)
        c = Fraction(rng.randint(0, 12), 12)
        try:
            explicit = solve_iter_eq_const(f, k, c, strategy=SolveStrategy.EXPLICIT, cap=config.SWEEP_PIECE_CAP)
        except PieceCapExceeded:
            skipped += 1
            continue
        pulled = solve_iter_eq_const(f, k, c, strategy=SolveStrategy.PULLBACK)
        if explicit != pulled:
            return False, f"triple #{idx}: strategies disagree for k={k}, c={c}"
        for comp in explicit:
            for x in (comp.lo, comp.hi, (comp.lo + comp.hi) / 2):
                if _apply(f, k, x) != c:
                    return False, f"triple #{idx}: unsound root {x}"
        for _ in range(samples):
            den = rng.randint(1, 500)
            x = Fraction(rng.randint(0, den), den)
            if explicit.contains(x) != (_apply(f, k, x) == c):
                return False, f"triple #{idx}: membership mismatch at {x}"
        compared += 1
    if compared < triples:
        return False, f"only {compared} of {triples} triples fit the sweep cap after {max_draws} draws"
    return True, f"{compared} triples agree ({skipped} over the sweep cap redrawn)"


def check_order_laws(quick: bool) -> Outcome:
    rng = random.Random(config.RANDOM_SEED + 12)
    trials = 10 ** 4 if quick else 10 ** 5
    for _ in range(trials):
        a, b, c = (rng.randint(1, ORDER_SAMPLE_MAX) for _ in range(3))
        rel = compare(a, b)
        if (rel is Precedence.EQUALS) != (a == b):
            return False, f"totality fails for {a}, {b}"
        if a != b and precedes(a, b) == precedes(b, a):
            return False, f"antisymmetry fails for {a}, {b}"
        if precedes(a, b) and precedes(b, c) and not precedes(a, c):
            return False, f"transitivity fails for {a}, {b}, {c}"
    ordered = sharkovsky_sorted(range(1, 129))
    if ordered[0] != 3 or ordered[-3:] != [4, 2, 1]:
        return False, f"head {ordered[0]}, tail {ordered[-3:]}"
    return True, f"{trials} random triples obey the order laws"


CRITERIA: List[Tuple[int, str, Callable[[bool], Outcome]]] = [
    (1, "g table values", check_g_table),
    (2, "g orbit facts", check_g_orbits),
    (3, "degenerate period of c~'*_6", check_degenerate_remark),
    (4, "tent counts", check_tent_counts),
    (5, "minimal witness maps", check_witness_maps),
    (6, "period closure", check_closure),
    (7, "power-of-two approximation", check_power2),
    (8, "nested orbits", check_nesting),
    (9, "tower layer 1", check_layer1),
    (10, "tower layers 2-3", check_towers),
    (11, "solver oracle equivalence", check_oracle),
    (12, "Sharkovsky order laws", check_order_laws),
]


def run_acceptance(quick: bool = False, only: Optional[Iterable[int]] = None) -> AcceptanceReport:
    """
    Прогнать критерии (все или выбранные номера).

    Args:
        quick: Сокращенные выборки
        only: Номера критериев
    """
    selected = set(only) if only else None
    report = AcceptanceReport(quick=quick)
    for number, title, check in CRITERIA:
        if selected is not None and number not in selected:
            continue
        started = time.perf_counter()
        try:
            passed, detail = check(quick)
        except Exception as e:
            logger.error(f"Criterion {number} ({title}) raised: {e}", exc_info=True)
            passed, detail = False, f"{type(e).__name__}: {e}"
        seconds = time.perf_counter() - started
        level = "passed" if passed else "FAILED"
        logger.info(f"Criterion {number} {level} in {seconds:.2f}s: {detail}")
        report.results.append(CriterionResult(number, title, passed, detail, seconds))
    return report
