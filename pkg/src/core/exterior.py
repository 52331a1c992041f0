"""
Álgebra exterior de E = K^n sobre la base de subconjuntos.

e_S para S una tupla estrictamente creciente de índices en 1..n; la base de
∧^k E son los k-subconjuntos en orden lexicográfico. Los signos cuentan las
inversiones de la mezcla que ordena una concatenación.
"""

import logging
from fractions import Fraction
from itertools import combinations
from typing import Dict, List, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, field_validator

from .errors import DomainError, FieldMismatchError
from .fields import FieldSpec, RawValue, binom
from .linalg import SparseEchelon

QQ = FieldSpec.rational()

Subset = Tuple[int, ...]
Multivector = Dict[Subset, RawValue]


def subsets(n: int, k: int) -> List[Subset]:
    return list(combinations(range(1, n + 1), k))


def merge_sign(first: Sequence[int], second: Sequence[int]) -> int:
    """e_first ∧ e_second = merge_sign * e_(first ∪ second); 0 si se solapan."""
    if set(first) & set(second):
        return 0
    inversions = sum(1 for s in first for t in second if s > t)
    return -1 if inversions % 2 else 1


def sort_sign(seq: Sequence[int]) -> Tuple[int, Subset]:
    """Signo de la permutación que ordena y la tupla ordenada; signo 0 si hay repetidos."""
    if len(set(seq)) != len(seq):
        return 0, ()
    inversions = sum(1 for i in range(len(seq)) for j in range(i + 1, len(seq)) if seq[i] > seq[j])
    return (-1 if inversions % 2 else 1), tuple(sorted(seq))


def complement(subset: Sequence[int], n: int) -> Subset:
    chosen = set(subset)
    return tuple(i for i in range(1, n + 1) if i not in chosen)


def dual_to_complement(subset: Sequence[int], n: int) -> Tuple[int, Subset]:
    """e_S* -> sign(S, S^c) * e_(S^c), el emparejamiento ∧^m E* ≅ ∧^(n-m) E."""
    rest = complement(subset, n)
    return merge_sign(subset, rest), rest


class WeightVector(BaseModel):
    """Peso entero de GL(n); dominante si es débilmente decreciente."""

    model_config = ConfigDict(frozen=True)

    entries: Tuple[int, ...]

    @field_validator("entries")
    @classmethod
    def _as_ints(cls, entries):
        return tuple(int(x) for x in entries)

    @property
    def is_dominant(self) -> bool:
        return all(a >= b for a, b in zip(self.entries, self.entries[1:]))

    @property
    def degree(self) -> int:
        return sum(self.entries)

    @classmethod
    def hook(cls, j: int, n: int) -> "WeightVector":
        """(1^j, 0^(n-2j), (-1)^j)."""
        if 2 * j > n:
            raise DomainError(f"weight (1^{j}, 0, (-1)^{j}) does not fit n={n}")
        return cls(entries=(1,) * j + (0,) * (n - 2 * j) + (-1,) * j)


def weyl_dim(lam: WeightVector, n: int) -> int:
    """dim S_lam E = prod_{i<j} (lam_i - lam_j + j - i) / (j - i)."""
    if len(lam.entries) != n:
        raise DomainError(f"weight of length {len(lam.entries)} for n={n}")
    if not lam.is_dominant:
        raise DomainError(f"weight {lam.entries} is not dominant")
    value = Fraction(1)
    for i in range(n):
        for j in range(i + 1, n):
            value *= Fraction(lam.entries[i] - lam.entries[j] + j - i, j - i)
    return int(value)


class ExteriorTensor:
    """Elemento de ∧^a E ⊗ ∧^b E; coordenadas por (S, T), sin guardar ceros."""

    __slots__ = ("field", "n", "degrees", "coords")

    def __init__(self, field: FieldSpec, n: int, degrees: Tuple[int, int],
                 coords: Dict[Tuple[Subset, Subset], RawValue] = None):
        self.field = field
        self.n = n
        self.degrees = tuple(degrees)
        clean = {}
        for (s, t), c in (coords or {}).items():
            s, t = tuple(s), tuple(t)
            if len(s) != degrees[0] or len(t) != degrees[1]:
                raise DomainError(f"coordinate ({s}, {t}) does not have degrees {degrees}")
            if list(s) != sorted(set(s)) or list(t) != sorted(set(t)):
                raise DomainError(f"subsets must be strictly increasing: ({s}, {t})")
            c = field.coerce(c)
            if c:
                clean[(s, t)] = c
        self.coords = clean

    @classmethod
    def basis(cls, field: FieldSpec, n: int, first: Sequence[int], second: Sequence[int]) -> "ExteriorTensor":
        return cls(field, n, (len(first), len(second)), {(tuple(first), tuple(second)): 1})

    @property
    def is_zero(self) -> bool:
        return not self.coords

    def _check(self, other: "ExteriorTensor"):
        if (other.n != self.n or other.degrees != self.degrees
                or other.field.characteristic != self.field.characteristic):
            raise FieldMismatchError("tensors of different shape or field")

    def __add__(self, other: "ExteriorTensor") -> "ExteriorTensor":
        self._check(other)
        f = self.field
        coords = dict(self.coords)
        for k, c in other.coords.items():
            coords[k] = f.add(coords.get(k, 0), c)
        return ExteriorTensor(f, self.n, self.degrees, coords)

    def scale(self, c) -> "ExteriorTensor":
        f = self.field
        c = f.coerce(c)
        return ExteriorTensor(f, self.n, self.degrees, {k: f.mul(v, c) for k, v in self.coords.items()})

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def __eq__(self, other):
        return (isinstance(other, ExteriorTensor) and self.n == other.n and self.degrees == other.degrees
                and self.field.characteristic == other.field.characteristic and self.coords == other.coords)

    def __hash__(self):
        return hash((self.n, self.degrees, frozenset(self.coords.items())))

    def __repr__(self):
        return f"ExteriorTensor(n={self.n}, degrees={self.degrees}, terms={len(self.coords)})"


# --- multivectores de un solo factor -------------------------------------

def wedge(x: Multivector, y: Multivector, field: FieldSpec = QQ) -> Multivector:
    out: Multivector = {}
    for s, a in x.items():
        for t, b in y.items():
            sign = merge_sign(s, t)
            if not sign:
                continue
            key = tuple(sorted(s + t))
            value = field.add(out.get(key, 0), field.mul(sign, field.mul(a, b)))
            if value:
                out[key] = value
            else:
                out.pop(key, None)
    return out


def coproduct(x: Multivector, r: int, n: int, field: FieldSpec = QQ) -> ExteriorTensor:
    """Componente Δ: ∧^k E -> ∧^r E ⊗ ∧^(k-r) E, e_U -> sum sign(R, U-R) e_R ⊗ e_(U-R)."""
    if not x:
        raise DomainError("coproduct of an empty multivector needs its degree")
    k = len(next(iter(x)))
    if not 0 <= r <= k:
        raise DomainError(f"coproduct degree {r} outside 0..{k}")
    coords: Dict[Tuple[Subset, Subset], RawValue] = {}
    for u, c in x.items():
        for part in combinations(u, r):
            rest = tuple(i for i in u if i not in part)
            key = (part, rest)
            coords[key] = field.add(coords.get(key, 0), field.mul(merge_sign(part, rest), c))
    return ExteriorTensor(field, n, (r, k - r), coords)


def exterior_multiply(t: ExteriorTensor) -> Multivector:
    """Multiplicar ∧^a E ⊗ ∧^b E -> ∧^(a+b) E."""
    f = t.field
    out: Multivector = {}
    for (s, u), c in t.coords.items():
        sign = merge_sign(s, u)
        if sign:
            key = tuple(sorted(s + u))
            out[key] = f.add(out.get(key, 0), f.mul(sign, c))
    return {k: v for k, v in out.items() if v}


def permute(t: ExteriorTensor, sigma: Dict[int, int]) -> ExteriorTensor:
    """Aplicar la matriz de permutación de sigma en los dos factores."""
    f = t.field
    coords: Dict[Tuple[Subset, Subset], RawValue] = {}
    for (s, u), c in t.coords.items():
        s1, ss = sort_sign([sigma[i] for i in s])
        s2, uu = sort_sign([sigma[i] for i in u])
        coords[(ss, uu)] = f.add(coords.get((ss, uu), 0), f.mul(s1 * s2, c))
    return ExteriorTensor(f, t.n, t.degrees, coords)


# --- psi(r, m) ----------------------------------------------------------

def _psi_basis(s: Subset, u: Subset, r: int) -> List[Tuple[Tuple[Subset, Subset], int]]:
    """psi sobre e_S ⊗ e_U: suma sobre R ⊂ U de sign(R, U-R) (e_S ∧ e_R) ⊗ e_(U-R)."""
    out = []
    for part in combinations(u, r):
        wedge_sign = merge_sign(s, part)
        if not wedge_sign:
            continue
        rest = tuple(i for i in u if i not in part)
        out.append(((tuple(sorted(s + part)), rest), wedge_sign * merge_sign(part, rest)))
    return out


def psi(r: int, m: int, n: int, t: ExteriorTensor) -> ExteriorTensor:
    """ψ(r, m): ∧^(m-r) E ⊗ ∧^(n-m+r) E -> ∧^m E ⊗ ∧^(n-m) E, (mult ⊗ 1)(1 ⊗ Δ)."""
    if not 1 <= r <= m <= n:
        raise DomainError(f"psi({r},{m}) needs 1 <= r <= m <= n={n}")
    if t.degrees != (m - r, n - m + r) or t.n != n:
        raise DomainError(f"psi({r},{m}) expects degrees {(m - r, n - m + r)}, got {t.degrees}")
    f = t.field
    coords: Dict[Tuple[Subset, Subset], RawValue] = {}
    for (s, u), c in t.coords.items():
        for key, sign in _psi_basis(s, u, r):
            coords[key] = f.add(coords.get(key, 0), f.mul(sign, c))
    return ExteriorTensor(f, n, (m, n - m), coords)


def minor_tensor(rows: Sequence[int], cols: Sequence[int], n: int, field: FieldSpec = QQ) -> ExteriorTensor:
    """M(rows; cols) como e_I ⊗ e_J* leído por el emparejamiento del complemento."""
    size = len(rows)
    s1, rr = sort_sign(rows)
    s2, cc = sort_sign(cols)
    if not s1 or not s2:
        return ExteriorTensor(field, n, (size, n - size))
    s3, rest = dual_to_complement(cc, n)
    return ExteriorTensor(field, n, (size, n - size), {(rr, rest): s1 * s2 * s3})


def rel_tensor(r: int, m: int, a: Sequence[int], b: Sequence[int], n: int, field: FieldSpec = QQ) -> ExteriorTensor:
    """Obtener Rel(r, m) con la misma identificación que minor_tensor."""
    coords: Dict[Tuple[Subset, Subset], RawValue] = {}
    for chosen in combinations(range(1, n + 1), r):
        for key, c in minor_tensor(tuple(a) + chosen, tuple(b) + chosen, n, field).coords.items():
            coords[key] = field.add(coords.get(key, 0), c)
    return ExteriorTensor(field, n, (m, n - m), coords)


def psi_consistency(n: int, field: FieldSpec = QQ) -> Dict[str, bool]:
    """Comprobar ψ(r, m) sobre la base: relaciones, equivariancia y multiplicación.

    - ``relations``: ψ(e_a ⊗ e_b*) es Rel(r, m)(a; b) por el emparejamiento del complemento.
    - ``equivariant``: ψ conmuta con el desplazamiento cíclico i -> i+1 de los índices.
    - ``multiplication``: mult(ψ(t)) = C(n-m+r, r) mult(t).
    """
    if n < 1:
        raise DomainError("psi consistency needs n >= 1")
    m = n // 2 + 1
    shift = {i: i % n + 1 for i in range(1, n + 1)}
    checks = {"relations": True, "equivariant": True, "multiplication": True}
    for r in range(1, m + 1):
        factor = binom(n - m + r, r)
        for a in subsets(n, m - r):
            for b in subsets(n, m - r):
                sign, rest = dual_to_complement(b, n)
                source = ExteriorTensor.basis(field, n, a, rest).scale(sign)
                if psi(r, m, n, source) != rel_tensor(r, m, a, b, n, field):
                    checks["relations"] = False
        for s in subsets(n, m - r):
            for u in subsets(n, n - m + r):
                source = ExteriorTensor.basis(field, n, s, u)
                image = psi(r, m, n, source)
                if psi(r, m, n, permute(source, shift)) != permute(image, shift):
                    checks["equivariant"] = False
                scaled = {k: field.mul(factor, v) for k, v in exterior_multiply(source).items()}
                if exterior_multiply(image) != {k: v for k, v in scaled.items() if v}:
                    checks["multiplication"] = False
    logging.debug(f"Consistencia de psi n={n} sobre {field}: {checks}")
    return checks


# --- Lema 5 ------------------------------------------------------------

def _tensor_weight(s: Subset, u: Subset, n: int) -> Tuple[int, ...]:
    w = [0] * n
    for i in s:
        w[i - 1] += 1
    for i in u:
        w[i - 1] += 1
    return tuple(w)


def lemma5_weight_blocks(n: int, field: FieldSpec = QQ) -> List[Dict]:
    """Dimensión y rango de la imagen de ψ por peso en ∧^m E ⊗ ∧^(n-m) E, m = floor(n/2) + 1."""
    if n < 1:
        raise DomainError("lemma5 needs n >= 1")
    m = n // 2 + 1
    columns: Dict[Tuple[int, ...], Dict[Tuple[Subset, Subset], int]] = {}
    for s in subsets(n, m):
        for u in subsets(n, n - m):
            block = columns.setdefault(_tensor_weight(s, u, n), {})
            block[(s, u)] = len(block)
    engines = {w: SparseEchelon(field) for w in columns}
    for r in range(1, m + 1):
        for s in subsets(n, m - r):
            for u in subsets(n, n - m + r):
                image: Dict[int, int] = {}
                w = _tensor_weight(s, u, n)
                index = columns.get(w, {})
                for key, sign in _psi_basis(s, u, r):
                    col = index[key]
                    image[col] = image.get(col, 0) + sign
                image = {c: v for c, v in image.items() if v}
                if image:
                    engines[w].add_row(image)
    blocks = []
    for w in sorted(columns, reverse=True):
        blocks.append({"weight": list(w), "dimension": len(columns[w]), "rank": engines[w].rank,
                       "twos": sum(1 for x in w if x == 2)})
    return blocks


def lemma5_target(n: int) -> Tuple[int, int]:
    """(m, dim Λ^m E ⊗ Λ^{n-m} E) con m = n // 2 + 1."""
    m = n // 2 + 1
    return m, binom(n, m) * binom(n, n - m)


def lemma5_spanning(n: int, field: FieldSpec = QQ) -> Tuple[int, bool]:
    """(rango, completo): ψ respeta pesos, así que el rango global suma los rangos por bloque."""
    rank = sum(b["rank"] for b in lemma5_weight_blocks(n, field))
    _, target = lemma5_target(n)
    logging.info(f"Lema 5 n={n} sobre {field}: rango {rank} de {target}")
    return rank, rank == target


# --- Lema 1 ------------------------------------------------------------

def lemma1_ranks(i: int, p: int, n: int, field: FieldSpec = QQ) -> Tuple[int, int]:
    """(rango del generador de V_{i,p}, suma de dimensiones de Weyl a la que debe igualar)."""
    from .genmat import GenericMatrix

    if not field.is_rational:
        raise DomainError("Lemma 1 is a characteristic-zero statement; use the rational field")
    if not 0 <= i <= p <= n:
        raise DomainError(f"lemma1 needs 0 <= i <= p <= n, got i={i}, p={p}, n={n}")
    engine = SparseEchelon(field)
    columns: Dict[Tuple[int, ...], int] = {}
    for _, _, poly in GenericMatrix(n, field).v_space_spanning_set(i, p):
        row = {}
        for exps, c in poly.raw_terms.items():
            row[columns.setdefault(exps, len(columns))] = c
        engine.add_row(row)
    expected = sum(weyl_dim(WeightVector.hook(j, n), n) for j in range(min(i, n - p) + 1))
    return engine.rank, expected