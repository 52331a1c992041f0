"""
Familias polinómicas de la matriz genérica: menores, invariantes T_i,
entradas de potencias, relaciones de Strickland Rel(r, p) y conjuntos
generadores de los espacios V_{i,p}, junto con los conjuntos que comparan las afirmaciones.
"""

import logging
from functools import lru_cache
from itertools import combinations, permutations
from typing import Dict, List, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, model_validator

from .errors import DomainError
from .fields import FieldSpec
from .idealmem import HomogeneousIdeal, ideal_equal
from .linalg import polynomial_span_rank
from .poly import Exponents, Polynomial, sum_polynomials

QQ = FieldSpec.rational()

GENERATOR_SET_LABELS = ("theorem1", "theorem2", "nonminimal", "strickland_full", "minors")

# nombres alternativos admitidos en la CLI
GENERATOR_SET_ALIASES = {"weyman_thm5": "nonminimal"}


class MinorSpec(BaseModel):
    """Secuencias de filas y columnas de un menor, en el orden dado."""

    model_config = ConfigDict(frozen=True)

    rows: Tuple[int, ...]
    cols: Tuple[int, ...]

    @model_validator(mode="after")
    def _same_length(self):
        if not self.rows or len(self.rows) != len(self.cols):
            raise ValueError("a minor needs equal, non-empty row and column sequences")
        return self

    @property
    def size(self) -> int:
        return len(self.rows)


def permutation_sign(perm: Sequence[int]) -> int:
    inversions = sum(1 for i in range(len(perm)) for j in range(i + 1, len(perm)) if perm[i] > perm[j])
    return -1 if inversions % 2 else 1


@lru_cache(maxsize=None)
def _signed_permutations(size: int) -> Tuple[Tuple[Tuple[int, ...], int], ...]:
    return tuple((perm, permutation_sign(perm)) for perm in permutations(range(size)))


class GenericMatrix:
    """Constructores para un tamaño n y un cuerpo fijos; guarda los menores en caché."""

    def __init__(self, n: int, field: FieldSpec = QQ):
        if n < 1:
            raise DomainError(f"matrix size must be positive, got {n}")
        self.n = n
        self.field = field
        self._minor_terms: Dict[Tuple[Tuple[int, ...], Tuple[int, ...]], Dict[Exponents, int]] = {}
        self._powers: Dict[int, List[List[Polynomial]]] = {}

    # --- menores --------------------------------------------------------

    def _check_indices(self, indices: Sequence[int]):
        for k in indices:
            if not 1 <= k <= self.n:
                raise DomainError(f"index {k} outside 1..{self.n}")

    def _minor_raw(self, rows: Tuple[int, ...], cols: Tuple[int, ...]) -> Dict[Exponents, int]:
        key = (rows, cols)
        cached = self._minor_terms.get(key)
        if cached is not None:
            return cached
        n = self.n
        terms: Dict[Exponents, int] = {}
        if len(set(rows)) == len(rows) and len(set(cols)) == len(cols):
            for perm, sign in _signed_permutations(len(rows)):
                exps = [0] * (n * n)
                for k, row in enumerate(rows):
                    exps[(row - 1) * n + cols[perm[k]] - 1] += 1
                terms[tuple(exps)] = sign
        self._minor_terms[key] = terms
        return terms

    def minor(self, rows: Sequence[int], cols: Sequence[int]) -> Polynomial:
        rows, cols = tuple(rows), tuple(cols)
        if not rows or len(rows) != len(cols):
            raise DomainError("a minor needs equal, non-empty row and column sequences")
        self._check_indices(rows)
        self._check_indices(cols)
        return Polynomial(self.field, self.n, self._minor_raw(rows, cols))

    def minors_of_size(self, size: int) -> List[Tuple[Tuple[int, ...], Tuple[int, ...], Polynomial]]:
        if not 1 <= size <= self.n:
            raise DomainError(f"minor size {size} outside 1..{self.n}")
        subsets = list(combinations(range(1, self.n + 1), size))
        return [(I, J, self.minor(I, J)) for I in subsets for J in subsets]

    # --- invariantes y potencias --------------------------------------

    def trace_invariant(self, i: int) -> Polynomial:
        """Obtener T_i, la suma de los menores principales i x i."""
        if not 1 <= i <= self.n:
            raise DomainError(f"T_{i} undefined for n={self.n}")
        acc: Dict[Exponents, int] = {}
        for subset in combinations(range(1, self.n + 1), i):
            for exps, c in self._minor_raw(subset, subset).items():
                acc[exps] = acc.get(exps, 0) + c
        return Polynomial(self.field, self.n, acc)

    def invariant(self, i: int) -> Polynomial:
        """Obtener T_i con T_0 = 1."""
        if i == 0:
            return Polynomial.constant(self.field, self.n, 1)
        return self.trace_invariant(i)

    def power_matrix(self, e: int) -> List[List[Polynomial]]:
        """Calcular la potencia e-ésima simbólica de la matriz genérica (e = 0 da la identidad)."""
        if e < 0:
            raise DomainError("negative matrix power")
        if e in self._powers:
            return self._powers[e]
        n, f = self.n, self.field
        if e == 0:
            result = [[Polynomial.constant(f, n, 1 if a == b else 0) for b in range(n)] for a in range(n)]
        else:
            previous = self.power_matrix(e - 1)
            result = []
            for a in range(n):
                row = []
                for b in range(n):
                    parts = []
                    for c in range(n):
                        unit = [0] * (n * n)
                        unit[c * n + b] = 1
                        parts.append(previous[a][c].multiply_monomial(tuple(unit)))
                    row.append(sum_polynomials(parts, f, n))
                result.append(row)
        self._powers[e] = result
        return result

    def matrix_power_entries(self, e: int) -> List[Polynomial]:
        if e < 1:
            raise DomainError(f"matrix power needs e >= 1, got {e}")
        return [entry for row in self.power_matrix(e) for entry in row]

    # --- relaciones y espacios V --------------------------------------

    def rel(self, r: int, p: int, a: Sequence[int], b: Sequence[int]) -> Polynomial:
        """Obtener Rel(r, p), la suma sobre i_1 < ... < i_r de M(a, i; b, i).

        Con r = 0 da el menor M(a; b).
        """
        a, b = tuple(a), tuple(b)
        if not 1 <= p <= self.n or not 0 <= r <= p:
            raise DomainError(f"Rel({r},{p}) outside 0 <= r <= p <= n={self.n}")
        if len(a) != p - r or len(b) != p - r:
            raise DomainError(f"Rel({r},{p}) needs sequences of length {p - r}")
        self._check_indices(a)
        self._check_indices(b)
        acc: Dict[Exponents, int] = {}
        for chosen in combinations(range(1, self.n + 1), r):
            for exps, c in self._minor_raw(a + chosen, b + chosen).items():
                acc[exps] = acc.get(exps, 0) + c
        return Polynomial(self.field, self.n, acc)

    def v_space_spanning_set(self, i: int, p: int) -> List[Tuple[Tuple[int, ...], Tuple[int, ...], Polynomial]]:
        """Generar V_{i,p} con Rel(p - i, p, u, v) sobre u, v crecientes de tamaño i.

        Otras secuencias dan los mismos polinomios salvo signo, o cero.
        """
        if not 0 <= i <= p <= self.n:
            raise DomainError(f"V_{{{i},{p}}} needs 0 <= i <= p <= n={self.n}")
        if i == 0:
            return [((), (), self.trace_invariant(p))]
        subsets = list(combinations(range(1, self.n + 1), i))
        result = []
        for u in subsets:
            for v in subsets:
                poly = self.rel(p - i, p, u, v)
                if not poly.is_zero:
                    result.append((u, v, poly))
        return result

    def cayley_hamilton_residual(self) -> List[Polynomial]:
        """Obtener las entradas de sum_i (-1)^i T_i Phi^(n-i); todas nulas."""
        n, f = self.n, self.field
        residual = [[Polynomial.zero(f, n) for _ in range(n)] for _ in range(n)]
        for i in range(n + 1):
            t = self.invariant(i)
            if i % 2:
                t = -t
            power = self.power_matrix(n - i)
            for a in range(n):
                for b in range(n):
                    residual[a][b] = residual[a][b] + t * power[a][b]
        return [entry for row in residual for entry in row]


# --- operaciones de módulo -----------------------------------------------

def minor(spec: MinorSpec, n: int, field: FieldSpec = QQ) -> Polynomial:
    return GenericMatrix(n, field).minor(spec.rows, spec.cols)


def trace_invariant(i: int, n: int, field: FieldSpec = QQ) -> Polynomial:
    return GenericMatrix(n, field).trace_invariant(i)


def matrix_power_entries(e: int, n: int, field: FieldSpec = QQ) -> List[Polynomial]:
    return GenericMatrix(n, field).matrix_power_entries(e)


def rel(r: int, p: int, a: Sequence[int], b: Sequence[int], n: int, field: FieldSpec = QQ) -> Polynomial:
    return GenericMatrix(n, field).rel(r, p, a, b)


def v_space_spanning_set(i: int, p: int, n: int, field: FieldSpec = QQ) -> List[Polynomial]:
    return [poly for _, _, poly in GenericMatrix(n, field).v_space_spanning_set(i, p)]


# --- conjuntos generadores ----------------------------------------------

def _check_e(n: int, e: int):
    if not 1 <= e < n:
        raise DomainError(f"e must satisfy 1 <= e < n, got n={n}, e={e}")


def _add_invariants(gs, gm: GenericMatrix, upto: int):
    for i in range(1, upto + 1):
        gs.add("T", gm.trace_invariant(i), i=i)


def _add_power_entries(gs, gm: GenericMatrix, e: int):
    n = gm.n
    for idx, poly in enumerate(gm.matrix_power_entries(e)):
        gs.add("power_entry", poly, e=e, a=idx // n + 1, b=idx % n + 1)


def theorem1_set(n: int, e: int, field: FieldSpec = QQ, gm: GenericMatrix = None):
    """Construir T_1..T_{e-1} y las entradas de Phi^e."""
    from src.models.generator_set import GeneratorSet

    _check_e(n, e)
    gm = gm or GenericMatrix(n, field)
    gs = GeneratorSet(label="theorem1", n=n, e=e, field=field)
    _add_invariants(gs, gm, e - 1)
    _add_power_entries(gs, gm, e)
    return gs


def theorem2_set(n: int, field: FieldSpec = QQ, gm: GenericMatrix = None):
    """Construir T_1..T_n y las entradas de Phi^2."""
    from src.models.generator_set import GeneratorSet

    if n < 2:
        raise DomainError("the square-zero set needs n >= 2")
    gm = gm or GenericMatrix(n, field)
    gs = GeneratorSet(label="theorem2", n=n, e=2, field=field)
    _add_invariants(gs, gm, n)
    _add_power_entries(gs, gm, 2)
    return gs


def nonminimal_set(n: int, e: int, field: FieldSpec = QQ, gm: GenericMatrix = None):
    """Construir T_1..T_n y V_{i, ie-i+1} para 1 <= i <= r, con n = re + f."""
    from src.models.generator_set import GeneratorSet

    _check_e(n, e)
    gm = gm or GenericMatrix(n, field)
    gs = GeneratorSet(label="nonminimal", n=n, e=e, field=field)
    _add_invariants(gs, gm, n)
    r = n // e
    for i in range(1, r + 1):
        p = i * e - i + 1
        if i > p:
            continue
        for u, v, poly in gm.v_space_spanning_set(i, p):
            gs.add("v_space", poly, i=i, p=p, u=list(u), v=list(v))
    return gs


def strickland_full_set(n: int, field: FieldSpec = QQ, gm: GenericMatrix = None):
    """Añadir al conjunto de cuadrado nulo todo Rel(r, p) y todo menor de tamaño floor(n/2)+1."""
    gm = gm or GenericMatrix(n, field)
    gs = theorem2_set(n, field, gm)
    gs.label = "strickland_full"
    for member in relation_members(gm):
        gs.add(member[0], member[1], **member[2])
    m = n // 2 + 1
    if m <= n:
        for I, J, poly in gm.minors_of_size(m):
            gs.add("minor", poly, rows=list(I), cols=list(J))
    return gs


def relation_members(gm: GenericMatrix):
    """Construir todo Rel(r, p), 1 <= r <= p <= n, sobre subconjuntos crecientes a, b."""
    out = []
    for p in range(1, gm.n + 1):
        for r in range(1, p + 1):
            subsets = list(combinations(range(1, gm.n + 1), p - r))
            for a in subsets:
                for b in subsets:
                    poly = gm.rel(r, p, a, b)
                    out.append(("rel", poly, {"r": r, "p": p, "a": list(a), "b": list(b)}))
    return out


def minors_set(n: int, size: int, field: FieldSpec = QQ, gm: GenericMatrix = None):
    """Construir todos los menores size x size."""
    from src.models.generator_set import GeneratorSet

    gm = gm or GenericMatrix(n, field)
    gs = GeneratorSet(label=f"minors{size}", n=n, field=field)
    for I, J, poly in gm.minors_of_size(size):
        gs.add("minor", poly, rows=list(I), cols=list(J))
    return gs


def build_generator_set(label: str, n: int, e: int = None, field: FieldSpec = QQ, size: int = None):
    """Construir el conjunto generador de una etiqueta (o de uno de sus alias)."""
    label = GENERATOR_SET_ALIASES.get(label, label)
    if label not in GENERATOR_SET_LABELS:
        raise DomainError(f"unknown generator set {label!r}")
    gm = GenericMatrix(n, field)
    logging.info(f"Construyendo conjunto {label} (n={n}, e={e}, field={field})")
    if label == "theorem1":
        return theorem1_set(n, e, field, gm)
    if label == "theorem2":
        return theorem2_set(n, field, gm)
    if label == "nonminimal":
        return nonminimal_set(n, e, field, gm)
    if label == "strickland_full":
        return strickland_full_set(n, field, gm)
    if size is None:
        raise DomainError("the minors family needs a size")
    return minors_set(n, size, field, gm)


# --- observaciones sobre los espacios V ---------------------------------

def remark_a_comparison(p: int, n: int, field: FieldSpec = QQ, limits=None) -> Dict:
    """Comparar V_{1,p} con las entradas de Phi^p, como subespacios y módulo T_1..T_{p-1}."""
    gm = GenericMatrix(n, field)
    v1 = [poly for _, _, poly in gm.v_space_spanning_set(1, p)]
    powers = [poly for poly in gm.matrix_power_entries(p) if not poly.is_zero]
    lower = [gm.trace_invariant(i) for i in range(1, p)]
    rank_v1 = polynomial_span_rank(v1, field)
    rank_powers = polynomial_span_rank(powers, field)
    rank_union = polynomial_span_rank(v1 + powers, field)
    first = HomogeneousIdeal(lower + v1, field, n, limits)
    second = HomogeneousIdeal(lower + powers, field, n, limits)
    return {
        "p": p,
        "rank_v1": rank_v1,
        "rank_powers": rank_powers,
        "rank_union": rank_union,
        "same_span": rank_v1 == rank_powers == rank_union,
        "ideals_equal": ideal_equal(first, second),
    }


def remark_b_ranks(i: int, p: int, n: int, field: FieldSpec = QQ) -> Tuple[int, int]:
    """Devolver (rango de V_{i-1,p} ∪ V_{i,p}, rango de V_{i,p}); iguales si y solo si V_{i-1,p} ⊆ V_{i,p}."""
    if not 1 <= i <= p <= n:
        raise DomainError(f"remark (b) needs 1 <= i <= p <= n, got i={i}, p={p}, n={n}")
    gm = GenericMatrix(n, field)
    upper = [poly for _, _, poly in gm.v_space_spanning_set(i, p)]
    lower = [poly for _, _, poly in gm.v_space_spanning_set(i - 1, p)]
    return polynomial_span_rank(lower + upper, field), polynomial_span_rank(upper, field)
