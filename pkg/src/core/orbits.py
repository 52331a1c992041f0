"""
Órbitas nilpotentes: particiones, matrices de Jordan, muestreo reproducible de
órbitas y pruebas de anulación de conjuntos generadores en sus clausuras.
"""

import logging
from itertools import accumulate
from typing import Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator

from src.models.schemas import VanishingReport

from .errors import DomainError, NotNilpotentError, ParseError
from .fields import FieldSpec
from .matrix_point import MatrixPoint

QQ = FieldSpec.rational()

# rango de los coeficientes de las matrices elementales sobre Q
ELEMENTARY_BOUND = 3


class Partition(BaseModel):
    """Sucesión débilmente decreciente de enteros positivos."""

    model_config = ConfigDict(frozen=True)

    parts: Tuple[int, ...]

    @field_validator("parts")
    @classmethod
    def _check_parts(cls, parts):
        parts = tuple(int(p) for p in parts)
        if any(p <= 0 for p in parts):
            raise ValueError(f"partition parts must be positive: {parts}")
        if any(a < b for a, b in zip(parts, parts[1:])):
            raise ValueError(f"partition parts must be weakly decreasing: {parts}")
        return parts

    @classmethod
    def of(cls, *parts: int) -> "Partition":
        return cls(parts=tuple(parts))

    @classmethod
    def parse(cls, text: str) -> "Partition":
        """Convertir ``"2,2,1"`` en partición; las partes se ordenan de mayor a menor."""
        try:
            parts = sorted((int(p) for p in text.replace(" ", "").split(",") if p), reverse=True)
            return cls(parts=tuple(parts))
        except ValueError as e:
            raise ParseError(f"invalid partition: {text!r}") from e

    @property
    def weight(self) -> int:
        return sum(self.parts)

    def __len__(self):
        return len(self.parts)

    def __str__(self):
        return ",".join(str(p) for p in self.parts)

    def to_list(self) -> List[int]:
        return list(self.parts)


def partition_mu(n: int, e: int) -> Partition:
    """mu(n, e) = (e^r, f) con n = r*e + f, 0 <= f < e."""
    if not 1 <= e < n:
        raise DomainError(f"mu(n, e) needs 1 <= e < n, got n={n}, e={e}")
    r, f = divmod(n, e)
    return Partition(parts=(e,) * r + ((f,) if f else ()))


def conjugate(lam: Partition) -> Partition:
    if not lam.parts:
        return lam
    return Partition(parts=tuple(sum(1 for p in lam.parts if p >= i) for i in range(1, lam.parts[0] + 1)))


def dominance_leq(lam: Partition, mu: Partition) -> bool:
    """lam <= mu en el orden de dominancia (sumas parciales de lam nunca mayores)."""
    if lam.weight != mu.weight:
        raise DomainError(f"dominance needs equal weights: {lam.weight} vs {mu.weight}")
    size = max(len(lam), len(mu))
    a = list(accumulate(lam.parts + (0,) * (size - len(lam))))
    b = list(accumulate(mu.parts + (0,) * (size - len(mu))))
    return all(x <= y for x, y in zip(a, b))


def partitions_of(n: int) -> List[Partition]:
    """Listar las particiones de n en orden lexicográfico inverso: (n) primero, (1^n) al final."""
    if n < 1:
        raise DomainError("partitions_of needs n >= 1")
    result: List[Partition] = []

    def build(remaining: int, largest: int, prefix: Tuple[int, ...]):
        if remaining == 0:
            result.append(Partition(parts=prefix))
            return
        for part in range(min(remaining, largest), 0, -1):
            build(remaining - part, part, prefix + (part,))

    build(n, n, ())
    return result


def jordan_matrix(lam: Partition, n: int, field: FieldSpec = QQ) -> MatrixPoint:
    """Construir la matriz nilpotente diagonal por bloques de tamaños lam."""
    if lam.weight != n:
        raise DomainError(f"partition {lam} has weight {lam.weight}, expected {n}")
    rows = [[0] * n for _ in range(n)]
    offset = 0
    for size in lam.parts:
        for i in range(size - 1):
            rows[offset + i][offset + i + 1] = 1
        offset += size
    return MatrixPoint(field, rows, _trusted=True)


def _conjugate_elementary(m: MatrixPoint, rng) -> MatrixPoint:
    """E M E^-1 para un producto de matrices elementales enteras (inversa exacta)."""
    n, f = m.n, m.field
    rows = m.rows()
    for _ in range(2 * n * n):
        i, j = (int(v) for v in rng.choice(n, size=2, replace=False))
        c = int(rng.integers(-ELEMENTARY_BOUND, ELEMENTARY_BOUND + 1))
        if not c:
            continue
        # fila i += c * fila j, luego columna j -= c * columna i
        rows[i] = [f.add(a, f.mul(c, b)) for a, b in zip(rows[i], rows[j])]
        for r in rows:
            r[j] = f.sub(r[j], f.mul(c, r[i]))
    return MatrixPoint(f, rows, _trusted=True)


def random_conjugate(m: MatrixPoint, seed: int) -> MatrixPoint:
    """Conjugar g M g^-1 con g elegida de forma determinista a partir de ``seed``."""
    rng = np.random.default_rng(seed)
    if m.n == 1:
        return m
    if m.field.is_rational:
        return _conjugate_elementary(m, rng)
    f, n = m.field, m.n
    while True:
        g = MatrixPoint(f, [[f.random_value(rng) for _ in range(n)] for _ in range(n)], _trusted=True)
        if g.is_invertible:
            return g @ m @ g.inverse()


def jordan_type(m: MatrixPoint) -> Partition:
    """Obtener el tipo de Jordan: #bloques de tamaño >= k es rank(M^(k-1)) - rank(M^k)."""
    n = m.n
    ranks = [n]
    power = MatrixPoint.identity(m.field, n)
    for _ in range(n):
        power = power @ m
        ranks.append(power.rank())
    if ranks[-1] != 0:
        raise NotNilpotentError("matrix is not nilpotent (M^n != 0)")
    dual = tuple(ranks[k - 1] - ranks[k] for k in range(1, n + 1) if ranks[k - 1] - ranks[k] > 0)
    return conjugate(Partition(parts=dual))


def vanishing_report(generator_set, lam: Partition, samples: int, seed: int) -> VanishingReport:
    """Evaluar cada generador en el punto de Jordan de lam y en ``samples`` conjugados."""
    n, f = generator_set.n, generator_set.field
    base = jordan_matrix(lam, n, f)
    members = generator_set.members
    vanishing: Dict[str, bool] = {m.ident: True for m in members}
    witness: Optional[Dict] = None
    pending = list(members)
    for k in range(-1, samples):
        if not pending:
            break
        point = base if k < 0 else random_conjugate(base, seed + k)
        still = []
        for member in pending:
            value = member.polynomial.evaluate(point)
            if value.is_zero:
                still.append(member)
                continue
            vanishing[member.ident] = False
            if witness is None:
                witness = {
                    "generator": member.ident,
                    "sample": "jordan" if k < 0 else k,
                    "point": point.to_text_rows(),
                    "value": str(value),
                }
        pending = still
    all_zero = all(vanishing.values())
    logging.info(f"Anulación de {generator_set.label} en O({lam}): {'sí' if all_zero else 'no'}")
    return VanishingReport(
        generator_set=generator_set.label, partition=lam.to_list(), samples=samples,
        seed=seed, field=f.label, all_zero=all_zero, vanishing=vanishing, witness=witness,
    )


def closure_table(n: int, e: int) -> List[Tuple[Partition, bool]]:
    mu = partition_mu(n, e)
    return [(lam, dominance_leq(lam, mu)) for lam in partitions_of(n)]


def closure_report(generator_set, n: int, e: int, samples: int, seed: int) -> Dict:
    """Comprobar anulación en la clausura de O(mu(n,e)) y un testigo en cada órbita de fuera."""
    rows = []
    verified = True
    for lam, dominated in closure_table(n, e):
        report = vanishing_report(generator_set, lam, samples, seed)
        ok = report.all_zero if dominated else report.witness is not None
        verified = verified and ok
        rows.append({"partition": lam.to_list(), "dominated": dominated, "ok": ok, "report": report})
    return {"verified": verified, "rows": rows}
