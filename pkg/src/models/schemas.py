from pydantic import BaseModel, Field, field_validator, model_validator
from typing import Any, Dict, List, Literal, Optional

from src import __version__

REPORT_SCHEMA = 1

ClaimId = Literal[
    "theorem1", "theorem2",
    "lemma1", "lemma2", "lemma3", "lemma4", "lemma5", "lemma6",
    "minimality", "vanishing", "charp-explore",
    "charpoly", "remark-a", "remark-b", "crosscheck",
]

Status = Literal["verified", "refuted", "inconclusive"]

# claims que necesitan e
CLAIMS_WITH_E = ("theorem1", "minimality", "vanishing")


class ResourceLimits(BaseModel):
    max_degree: int = Field(6, ge=1)
    max_rows: int = Field(250000, ge=1)
    max_pairs: int = Field(5000, ge=1)
    modular_precheck: bool = False


class WitnessTerm(BaseModel):
    generator: int
    multiplier: str


class MembershipResult(BaseModel):
    status: Literal["member", "non-member", "inconclusive"]
    degree: int
    rows: int = 0
    cols: int = 0
    rank: int = 0
    rank_with_target: int = 0
    witness: Optional[List[WitnessTerm]] = None
    reason: Optional[str] = None

    @property
    def is_member(self) -> bool:
        return self.status == "member"


class VerificationTask(BaseModel):
    claim: ClaimId
    n: int = Field(..., ge=1)
    e: Optional[int] = None
    field: str = "q"
    seed: int = 42
    samples: int = Field(100, ge=1)
    partition: Optional[List[int]] = None
    witness: bool = False
    limits: ResourceLimits = Field(default_factory=ResourceLimits)

    @field_validator("field", mode="before")
    @classmethod
    def _normalize_field(cls, value):
        return value.strip().lower() if isinstance(value, str) else value

    @model_validator(mode="after")
    def _check_ranges(self):
        if self.claim in CLAIMS_WITH_E:
            if self.e is None:
                raise ValueError(f"claim {self.claim} needs --e")
            if not 1 <= self.e < self.n:
                raise ValueError(f"e must satisfy 1 <= e < n (n={self.n}, e={self.e})")
        if self.claim in ("theorem2", "charp-explore", "lemma3", "lemma4") and self.n < 2:
            raise ValueError(f"claim {self.claim} needs n >= 2")
        if self.claim in ("theorem1", "lemma1", "lemma2", "minimality", "remark-a", "remark-b") and self.field != "q":
            raise ValueError(f"claim {self.claim} is a characteristic-zero statement; use --field q")
        if self.claim == "charp-explore" and self.field == "q":
            raise ValueError("charp-explore needs a prime field")
        if self.partition is not None and sum(self.partition) != self.n:
            raise ValueError(f"partition {self.partition} does not have weight n={self.n}")
        return self


class ReportItem(BaseModel):
    ident: str
    status: str
    degree: Optional[int] = None
    member: Optional[bool] = None
    rows: Optional[int] = None
    cols: Optional[int] = None
    rank: Optional[int] = None
    details: Dict[str, Any] = Field(default_factory=dict)
    witness: Optional[Any] = None


class VanishingReport(BaseModel):
    generator_set: str
    partition: List[int]
    samples: int
    seed: int
    field: str
    all_zero: bool
    vanishing: Dict[str, bool]
    witness: Optional[Dict[str, Any]] = None


class Report(BaseModel):
    schema_version: int = Field(REPORT_SCHEMA, serialization_alias="schema")
    tool: str = "oil"
    version: str = __version__
    task: Dict[str, Any]
    status: Status
    seed: int
    items: List[ReportItem] = Field(default_factory=list)
    summary: Dict[str, Any] = Field(default_factory=dict)
    witness: Optional[Any] = None
    timing: Optional[Dict[str, float]] = None

    def to_dict(self) -> Dict[str, Any]:
        data = self.model_dump(mode="json", by_alias=True)
        if data.get("timing") is None:
            data.pop("timing", None)
        return data

    @property
    def exit_code(self) -> int:
        return {"verified": 0, "refuted": 1, "inconclusive": 2}[self.status]
