from fractions import Fraction
from pydantic import BaseModel, BeforeValidator, ConfigDict, Field, PlainSerializer, field_validator
from typing import Annotated, Dict, List, Optional, Tuple
from enum import Enum


def _parse_rational(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, str)):
        return Fraction(value)
    raise ValueError(f"cannot read {value!r} as a rational")


# Exact rationals travel as "p/q" strings ("p" when integral)
Rational = Annotated[
    Fraction,
    BeforeValidator(_parse_rational),
    PlainSerializer(lambda value: str(value), return_type=str),
]


class Record(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)


class InnerPolicy(str, Enum):
    INDEPENDENT = "independent"
    TRANSITIVE = "transitive"
    SEEDED_RANDOM = "seeded-random"

class Provenance(str, Enum):
    VERIFIED = "verified"
    CONSTANT = "constant"
    PAPER = "paper"
    DERIVED = "derived"
    TRIVIAL = "trivial"

class CheckStatus(str, Enum):
    PASSED = "passed"
    FAILED = "failed"
    ERRORED = "errored"
    SKIPPED = "skipped"

class Construction(str, Enum):
    EX34 = "ex34"
    EX35 = "ex35"
    EX39 = "ex39"
    TURAN = "turan"
    GNK = "gnk"

class SweepMode(str, Enum):
    EXHAUSTIVE = "exhaustive"
    SAMPLED = "sampled"


class GraphRecord(Record):
    n: int
    bits: Optional[str] = None
    arcs: List[Tuple[int, int]] = []

class DegreeReport(Record):
    out_degrees: List[int]
    in_degrees: List[int]
    degrees: List[int]
    min_out: int
    min_in: int
    min_semi: int
    min_total: int


class TilingWitness(Record):
    k: int
    blocks: List[List[int]] = []

    def masks(self) -> List[int]:
        return [sum(1 << v for v in block) for block in self.blocks]

    @classmethod
    def from_masks(cls, k: int, masks: List[int]) -> "TilingWitness":
        blocks = [[v for v in range(mask.bit_length()) if mask >> v & 1] for mask in masks]
        return cls(k=k, blocks=sorted(blocks))

    @property
    def covered(self) -> int:
        return sum(len(block) for block in self.blocks)

class LinkingSet(Record):
    x: int
    y: int
    z: List[int]
    witness_x: TilingWitness
    witness_y: TilingWitness
    via: str = Field(description="'triple' when found as a 3-set and extended, else 'septuple'")


class EdgeWeight(Record):
    edge: List[int]
    weight: Rational

class FractionalCertificate(Record):
    n: int
    k: int
    value: Rational
    primal: List[EdgeWeight] = []
    dual: List[Rational] = []
    pivots: int = 0


class SearchReport(Record):
    n: int
    predicate: str
    classes_examined: int
    classes_satisfying: int
    witnesses: List[str] = []
    wall_time: float = 0.0

class RamseyEntry(Record):
    k: int
    value: Optional[int] = None
    provenance: Provenance
    witness: Optional[str] = None
    exceeds: Optional[int] = None

class RamseyTable(Record):
    entries: Dict[int, RamseyEntry] = {}

    def value(self, k: int) -> Optional[int]:
        entry = self.entries.get(k)
        return entry.value if entry else None

class TilingSearchReport(Record):
    k: int
    n: int
    classes_examined: int
    all_tileable: bool
    counterexamples: List[str] = []
    wall_time: float = 0.0

class CatalogEntry(Record):
    n: int
    bits: str
    regular: bool
    out_degrees: List[int]

class SweepReport(Record):
    k: int
    n: int
    mode: SweepMode
    classes_examined: int
    minimum: Rational
    bound: Rational
    matches_bound: bool
    witnesses: List[str] = []
    seed: Optional[int] = None
    wall_time: float = 0.0

class ExtendabilityReport(Record):
    k: int
    n: int
    divisible: bool
    target: Rational
    link_values: List[Rational]
    min_link_value: Rational
    min_vertex: int
    nu_star: Rational
    premise_holds: bool
    conclusion_holds: bool
    asserted: bool

class FactCheck(Record):
    r: int
    s: int
    c: Rational
    hypotheses_hold: bool
    conclusion_holds: bool
    threshold: Rational
    subgraph_min_degree: int

    @property
    def ok(self) -> bool:
        return not self.hypotheses_hold or self.conclusion_holds


class BoundSheet(Record):
    k: int
    ramsey_prev: int
    ramsey_k: int
    uses_upper_bounds: bool = False
    trs_lower: Rational
    trs_upper: Rational
    tr_upper_caro: Optional[Rational] = None
    dg_upper: Optional[Rational] = None
    thm12_threshold: Rational
    ak1_upper: Rational
    yuster_upper: Rational
    dgo_lower: Rational
    frac_gap_lower: Rational
    absorbing_pigeonhole: int
    semidegree_threshold: Optional[Rational] = None
    ramsey_recursion_holds: bool


class AppendixLine(Record):
    line: int
    bits: str
    tileable: bool
    nu_star: Optional[Rational] = None
    canonical: str

class AppendixReport(Record):
    count: int
    all_untileable: bool
    pairwise_nonisomorphic: bool
    colliding_pair: Optional[Tuple[int, int]] = None
    all_fractional_perfect: bool
    checksum_ok: Optional[bool] = None
    lines: List[AppendixLine] = []
    errors: List[str] = []


class CheckResult(Record):
    name: str
    expected: str
    provenance: Provenance
    computed: str
    status: CheckStatus
    wall_time: float = 0.0
    detail: Optional[str] = None

class ReproductionReport(Record):
    seed: int
    workers: int
    passed: bool
    checks: List[CheckResult] = []
    errors: List[str] = []


class RunConfig(Record):
    subcommand: str
    input: Optional[str] = None
    output: Optional[str] = None
    k: Optional[int] = None
    n: Optional[int] = None
    seed: Optional[int] = None
    samples: Optional[int] = None
    workers: int = 1
    phase_budget_seconds: float = 900.0
    options: Dict[str, str] = {}
    only: List[str] = []
    quick: bool = False

    @field_validator("workers")
    @classmethod
    def _workers_positive(cls, value: int) -> int:
        if value < 1:
            raise ValueError("worker count must be at least 1")
        return value

    @field_validator("samples")
    @classmethod
    def _samples_positive(cls, value: Optional[int]) -> Optional[int]:
        if value is not None and value < 1:
            raise ValueError("sample count must be at least 1")
        return value

    @field_validator("phase_budget_seconds")
    @classmethod
    def _budget_positive(cls, value: float) -> float:
        if value <= 0:
            raise ValueError("time budget must be positive")
        return value
