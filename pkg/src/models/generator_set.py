from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field

from src.core.fields import FieldSpec
from src.core.poly import Polynomial


class GeneratorMember(BaseModel):
    """Un polinomio del conjunto generador junto con su procedencia."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    family: str
    params: Dict[str, Any] = Field(default_factory=dict)
    polynomial: Polynomial

    @property
    def degree(self) -> int:
        return self.polynomial.homogeneous_degree()

    @property
    def ident(self) -> str:
        """Identificador textual estable, p. ej. ``rel(r=1,p=2,a=[1],b=[2])``."""
        args = ",".join(f"{k}={_compact(v)}" for k, v in sorted(self.params.items()))
        return f"{self.family}({args})"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "family": self.family,
            "params": self.params,
            "polynomial": self.polynomial.to_text(),
        }


def _compact(value) -> str:
    if isinstance(value, (list, tuple)):
        return "[" + ",".join(str(v) for v in value) + "]"
    return str(value)


class GeneratorSet(BaseModel):
    """Familia con nombre de generadores homogéneos (sin guardar polinomios nulos)."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    label: str
    n: int
    e: Optional[int] = None
    field: FieldSpec
    members: List[GeneratorMember] = []

    def add(self, family: str, polynomial: Polynomial, **params) -> None:
        """Añadir un generador; los ceros se descartan."""
        if polynomial.is_zero:
            return
        polynomial.homogeneous_degree()
        self.members.append(GeneratorMember(family=family, params=params, polynomial=polynomial))

    def polynomials(self) -> List[Polynomial]:
        return [m.polynomial for m in self.members]

    def degrees(self) -> Dict[int, int]:
        counts: Dict[int, int] = {}
        for m in self.members:
            counts[m.degree] = counts.get(m.degree, 0) + 1
        return dict(sorted(counts.items()))

    def to_records(self) -> List[Dict[str, Any]]:
        return [m.to_dict() for m in self.members]

    def __len__(self):
        return len(self.members)
