"""
Модели JSON-документов на Pydantic.

Все рациональные числа передаются строками "p/q" и нормализуются
к несократимому виду, поэтому повторная сериализация канонического
документа дает тот же текст.
"""
from typing import Annotated, Dict, List, Optional, Tuple

from pydantic import AfterValidator, BaseModel, Field, field_validator

from app.construct import CheckResult, ConstructionContext, LabeledPoint, LayerResult, anchor_points
from app.errors import InvalidInput
from app.exact import Interval, RootSet, format_rat, parse_rat
from app.logger import get_logger
from app.periodic import NestingReport, Orbit
from app.pwl import PwlMap, make_pwl
from app.sharkovsky import ClosureReport, Power2Approximation, Precedence
from app.towers import Tower

logger = get_logger(__name__)

SCHEMA_VERSION = "v1"


def _canonical_rat(value: str) -> str:
    try:
        return format_rat(parse_rat(value))
    except InvalidInput as e:
        raise ValueError(str(e)) from e


RatStr = Annotated[str, AfterValidator(_canonical_rat)]
RatPair = Tuple[RatStr, RatStr]


class Document(BaseModel):
    """Базовый документ с полем "schema" """
    schema_version: str = Field(SCHEMA_VERSION, alias="schema")

    @field_validator("schema_version")
    @classmethod
    def validate_schema(cls, v):
        if v != SCHEMA_VERSION:
            raise ValueError(f"Unsupported schema {v!r}, expected {SCHEMA_VERSION!r}")
        return v

    def dump(self) -> str:
        return self.model_dump_json(by_alias=True, indent=2)

    class Config:
        extra = "forbid"
        populate_by_name = True


class MapDocument(Document):
    """Отображение: область определения и узлы"""
    domain: RatPair
    nodes: List[RatPair] = Field(..., min_length=1)

    @field_validator("domain")
    @classmethod
    def validate_domain(cls, v):
        if parse_rat(v[0]) > parse_rat(v[1]):
            raise ValueError(f"Domain endpoints are reversed: {v}")
        return v

    def to_map(self) -> PwlMap:
        domain = Interval(parse_rat(self.domain[0]), parse_rat(self.domain[1]))
        return make_pwl(domain, [(parse_rat(x), parse_rat(y)) for x, y in self.nodes])

    @classmethod
    def from_map(cls, f: PwlMap) -> "MapDocument":
        return cls(domain=(format_rat(f.domain.lo), format_rat(f.domain.hi)),
                   nodes=[(format_rat(x), format_rat(y)) for x, y in f.nodes])


def load_map(text: str) -> PwlMap:
    """
    Разобрать JSON-документ отображения.

    Raises:
        InvalidInput: документ не соответствует схеме или узлы некорректны
    """
    try:
        doc = MapDocument.model_validate_json(text)
    except ValueError as e:
        raise InvalidInput(f"Invalid map document: {e}") from e
    return doc.to_map()


def dump_map(f: PwlMap) -> str:
    return MapDocument.from_map(f).dump()


class RootSetDocument(Document):
    components: List[RatPair]

    @classmethod
    def from_rootset(cls, rs: RootSet) -> "RootSetDocument":
        return cls(components=[(format_rat(c.lo), format_rat(c.hi)) for c in rs])

    def to_rootset(self) -> RootSet:
        return RootSet.canonical(Interval(parse_rat(lo), parse_rat(hi)) for lo, hi in self.components)


class OrbitDocument(BaseModel):
    points: List[RatStr] = Field(..., min_length=1)
    least_period: int = Field(..., ge=1)
    diameter: RatStr

    class Config:
        extra = "forbid"

    @classmethod
    def from_orbit(cls, orbit: Orbit) -> "OrbitDocument":
        return cls(points=[format_rat(p) for p in orbit.points], least_period=orbit.least_period,
                   diameter=format_rat(orbit.diameter))


class OrbitListDocument(Document):
    orbits: List[OrbitDocument]

    @classmethod
    def from_orbits(cls, orbits) -> "OrbitListDocument":
        return cls(orbits=[OrbitDocument.from_orbit(o) for o in orbits])


class CompareDocument(Document):
    m: int = Field(..., ge=1)
    n: int = Field(..., ge=1)
    relation: Precedence


class ClosureViolation(BaseModel):
    have: int
    missing: int

    class Config:
        extra = "forbid"


class ClosureReportDocument(Document):
    bound: int
    period_set: List[int]
    violations: List[ClosureViolation]
    passed: bool = Field(..., alias="pass")

    @classmethod
    def from_report(cls, report: ClosureReport) -> "ClosureReportDocument":
        return cls(bound=report.bound, period_set=sorted(report.period_set),
                   violations=[ClosureViolation(have=a, missing=b) for a, b in report.violations],
                   passed=report.passed)


class NestingReportDocument(Document):
    unimodality: str
    orbits_checked: int
    pairs_checked: int
    violations: List[str]
    passed: bool = Field(..., alias="pass")

    @classmethod
    def from_report(cls, report: NestingReport) -> "NestingReportDocument":
        return cls(unimodality=report.unimodality.value, orbits_checked=report.orbits_checked,
                   pairs_checked=report.pairs_checked, violations=list(report.violations),
                   passed=report.passed)


class Power2Document(Document):
    q0: RatStr
    q1: RatStr
    chain: List[OrbitDocument]
    map: MapDocument

    @classmethod
    def from_approx(cls, approx: Power2Approximation) -> "Power2Document":
        return cls(q0=format_rat(approx.q0), q1=format_rat(approx.q1),
                   chain=[OrbitDocument.from_orbit(o) for o in approx.chain],
                   map=MapDocument.from_map(approx.map))


class LabeledPointDocument(BaseModel):
    label: str
    value: RatStr
    least_period: Optional[int] = None
    claimed: Optional[int] = None
    guaranteed: bool = False
    verified: bool = True

    class Config:
        extra = "forbid"

    @classmethod
    def from_point(cls, p: LabeledPoint) -> "LabeledPointDocument":
        return cls(label=str(p.label), value=format_rat(p.value), least_period=p.actual_least_period,
                   claimed=p.claimed_least_period, guaranteed=p.claim_guaranteed, verified=p.verified)


class CheckDocument(BaseModel):
    name: str
    passed: bool = Field(..., alias="pass")
    detail: str = ""

    class Config:
        extra = "forbid"
        populate_by_name = True

    @classmethod
    def from_check(cls, check: CheckResult) -> "CheckDocument":
        return cls(name=check.name, passed=check.passed, detail=check.detail)


class ContextDocument(Document):
    m: int = Field(..., ge=3)
    points: List[LabeledPointDocument]
    checks: List[CheckDocument] = []
    passed: bool = Field(..., alias="pass")

    @classmethod
    def from_layer(cls, ctx: ConstructionContext, layer: LayerResult,
                   extra_checks: Tuple[CheckResult, ...] = ()) -> "ContextDocument":
        points = sorted(list(anchor_points(ctx)) + list(layer.points), key=lambda p: (p.value, str(p.label)))
        checks = list(layer.checks) + list(extra_checks)
        return cls(m=ctx.m, points=[LabeledPointDocument.from_point(p) for p in points],
                   checks=[CheckDocument.from_check(c) for c in checks],
                   passed=layer.passed and all(c.passed for c in extra_checks))


class VerificationRow(BaseModel):
    label: str
    value: RatStr
    claimed: Optional[int] = None
    actual: Optional[int] = None
    guaranteed: bool = False
    passed: bool = Field(..., alias="pass")

    class Config:
        extra = "forbid"
        populate_by_name = True


class TowerDocument(Document):
    families: Dict[str, Dict[str, List[LabeledPointDocument]]]
    verification: List[VerificationRow]
    checks: List[CheckDocument]
    passed: bool = Field(..., alias="pass")

    @classmethod
    def from_tower(cls, tower: Tower) -> "TowerDocument":
        families = {
            family: {key: [LabeledPointDocument.from_point(p) for p in sorted(pts, key=lambda p: p.value)]
                     for key, pts in groups.items()}
            for family, groups in tower.families().items()
        }
        rows = [
            VerificationRow(label=str(p.label), value=format_rat(p.value), claimed=p.claimed_least_period,
                            actual=p.actual_least_period, guaranteed=p.claim_guaranteed, passed=p.verified)
            for p in tower.listing() if p.claimed_least_period is not None
        ]
        return cls(families=families, verification=rows,
                   checks=[CheckDocument.from_check(c) for c in tower.all_checks()],
                   passed=tower.passed)


class CriterionDocument(BaseModel):
    number: int = Field(..., ge=1, le=12)
    title: str
    passed: bool = Field(..., alias="pass")
    detail: str = ""
    seconds: float = Field(..., ge=0)

    class Config:
        extra = "forbid"
        populate_by_name = True


class AcceptanceDocument(Document):
    quick: bool = False
    criteria: List[CriterionDocument]
    passed: bool = Field(..., alias="pass")
