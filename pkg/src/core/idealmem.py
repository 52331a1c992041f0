"""
Pertenencia e igualdad de ideales homogéneos mediante álgebra lineal de Macaulay graduada.

Para un ideal homogéneo I y un grado d, I_d está generado por los productos
m*g con deg(m*g) = d. Si todos los generadores son homogéneos para el peso
del toro diagonal, esos productos se separan en bloques por (grado, peso) y
cada bloque se elimina por separado; los bloques quedan en caché en el ideal.
"""

import logging
from operator import add, sub
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from src.models.schemas import MembershipResult, ResourceLimits, WitnessTerm

from .errors import FieldMismatchError, DomainError, ResourceLimitExceeded
from .fields import FieldSpec, binom
from .linalg import SparseEchelon, modular_rank, random_prime
from .poly import Exponents, Polynomial, monomials_by_weight, monomials_of_degree, parse_polynomial

Weight = Optional[Tuple[int, ...]]


class _Block:
    """Filas de Macaulay de un bloque (grado, peso)."""

    __slots__ = ("columns", "index", "engine", "vectors", "tags")

    def __init__(self, columns: Sequence[Exponents], engine: SparseEchelon):
        self.columns = columns
        self.index = {exps: i for i, exps in enumerate(columns)}
        self.engine = engine
        self.vectors: List[Dict[int, object]] = []
        self.tags: List[Tuple[int, Exponents]] = []

    @property
    def tracked(self) -> bool:
        return self.engine.track

    def coordinates(self, f: Polynomial) -> Dict[int, object]:
        return {self.index[exps]: c for exps, c in f.raw_terms.items()}


class HomogeneousIdeal:
    """Ideal dado por generadores homogéneos no nulos sobre un mismo cuerpo y n."""

    def __init__(self, generators: Iterable[Polynomial], field: FieldSpec = None, n: int = None,
                 limits: ResourceLimits = None, seed: int = 0):
        gens = tuple(generators)
        if field is None or n is None:
            if not gens:
                raise DomainError("an empty ideal needs an explicit field and n")
            field, n = gens[0].field, gens[0].n
        for g in gens:
            if g.n != n or g.field.characteristic != field.characteristic:
                raise FieldMismatchError(f"generator over {g.field}/n={g.n}, ideal over {field}/n={n}")
            if g.is_zero:
                raise DomainError("generators must be nonzero")
            g.homogeneous_degree()
        self.field = field
        self.n = n
        self.generators = gens
        self.limits = limits or ResourceLimits()
        self.seed = seed
        self._degrees = [g.homogeneous_degree() for g in gens]
        weights = [g.weight() for g in gens]
        self.weighted = all(w is not None for w in weights)
        self._weights = weights
        self._blocks: Dict[Tuple[int, Weight, int], _Block] = {}

    def __len__(self):
        return len(self.generators)

    def with_generators(self, extra: Iterable[Polynomial]) -> "HomogeneousIdeal":
        return HomogeneousIdeal(self.generators + tuple(extra), self.field, self.n, self.limits, self.seed)

    # --- bloques --------------------------------------------------------

    def _columns(self, d: int, w: Weight) -> Sequence[Exponents]:
        if w is None:
            return monomials_of_degree(self.n, d)
        return monomials_by_weight(self.n, d).get(w, ())

    def _multipliers(self, k: int, d: int, w: Weight) -> Sequence[Exponents]:
        dm = d - self._degrees[k]
        if w is None:
            return monomials_of_degree(self.n, dm)
        return monomials_by_weight(self.n, dm).get(tuple(map(sub, w, self._weights[k])), ())

    def _block(self, d: int, w: Weight, track: bool = False, below: bool = False) -> _Block:
        """Obtener el bloque de grado d y peso w; ``below`` deja solo generadores de grado < d."""
        if d > self.limits.max_degree:
            raise ResourceLimitExceeded(f"degree {d} above max_degree {self.limits.max_degree}",
                                        limit="max_degree", value=d)
        if not self.weighted:
            w = None
        key = (d, w, below)
        block = self._blocks.get(key)
        if block is not None and (block.tracked or not track):
            return block
        cap = d - 1 if below else d
        rows = sum(len(self._multipliers(k, d, w)) for k, dg in enumerate(self._degrees) if dg <= cap)
        if rows > self.limits.max_rows:
            logging.warning(f"Bloque (d={d}, w={w}) con {rows} filas supera max_rows={self.limits.max_rows}")
            raise ResourceLimitExceeded(f"block of degree {d} needs {rows} rows (max_rows {self.limits.max_rows})",
                                        limit="max_rows", value=rows)
        block = _Block(self._columns(d, w), SparseEchelon(self.field, track_witness=track))
        for k, g in enumerate(self.generators):
            if self._degrees[k] > cap:
                continue
            for m in self._multipliers(k, d, w):
                vector = {block.index[tuple(map(add, e, m))]: c for e, c in g.raw_terms.items()}
                block.vectors.append(vector)
                block.tags.append((k, m))
                block.engine.add_row(vector, len(block.tags) - 1)
        logging.debug(f"Bloque d={d} w={w}: {len(block.vectors)} filas x {len(block.columns)} columnas, "
                      f"rango {block.engine.rank}")
        self._blocks[key] = block
        return block

    def _weights_of_degree(self, d: int) -> List[Weight]:
        if not self.weighted:
            return [None]
        return list(monomials_by_weight(self.n, d))

    # --- pertenencia ----------------------------------------------------

    def _check_target(self, f: Polynomial) -> int:
        if f.n != self.n or f.field.characteristic != self.field.characteristic:
            raise FieldMismatchError(f"polynomial over {f.field}/n={f.n}, ideal over {self.field}/n={self.n}")
        return f.homogeneous_degree()

    def _modular_rejects(self, block: _Block, target: Dict[int, object]) -> bool:
        prime = random_prime(self.seed)
        base = modular_rank(block.vectors, len(block.columns), prime)
        return modular_rank(block.vectors + [target], len(block.columns), prime) > base

    def membership(self, f: Polynomial, witness: bool = False) -> MembershipResult:
        """Decidir la pertenencia exacta con datos de rango y, si se pide, un testigo."""
        d = self._check_target(f)
        if f.is_zero:
            return MembershipResult(status="member", degree=-1, witness=[] if witness else None)
        if not any(dg <= d for dg in self._degrees):
            return MembershipResult(status="non-member", degree=d, rank_with_target=1)
        parts = f.weight_components() if self.weighted else {None: f}
        rows = cols = rank = 0
        member = True
        combination: Dict[int, Dict[Exponents, object]] = {}
        try:
            for w in sorted(parts, key=lambda x: x or ()):
                block = self._block(d, w, track=witness)
                target = block.coordinates(parts[w])
                rows += len(block.vectors)
                cols += len(block.columns)
                rank += block.engine.rank
                if (self.limits.modular_precheck and not witness and self.field.is_rational
                        and self._modular_rejects(block, target)):
                    member = False
                    continue
                if witness:
                    coeffs = block.engine.express(target)
                    if coeffs is None:
                        member = False
                        continue
                    for tag, c in coeffs.items():
                        k, m = block.tags[tag]
                        slot = combination.setdefault(k, {})
                        slot[m] = self.field.add(slot.get(m, 0), c)
                elif not block.engine.contains(target):
                    member = False
        except ResourceLimitExceeded as e:
            logging.warning(f"Pertenencia inconclusa en grado {d}: {e}")
            return MembershipResult(status="inconclusive", degree=d, reason=str(e))
        result = MembershipResult(
            status="member" if member else "non-member",
            degree=d, rows=rows, cols=cols, rank=rank,
            rank_with_target=rank if member else rank + 1,
        )
        if witness and member:
            terms = []
            for k in sorted(combination):
                multiplier = Polynomial(self.field, self.n, combination[k])
                if not multiplier.is_zero:
                    terms.append(WitnessTerm(generator=k, multiplier=multiplier.to_text()))
            result.witness = terms
        return result

    def member(self, f: Polynomial) -> bool:
        result = self.membership(f)
        if result.status == "inconclusive":
            raise ResourceLimitExceeded(result.reason or "membership undecided")
        return result.is_member

    def reexpand(self, witness: Sequence[WitnessTerm]) -> Polynomial:
        """Reconstruir sum multiplicador * generador a partir de un testigo."""
        total = Polynomial.zero(self.field, self.n)
        for term in witness:
            total = total + parse_polynomial(term.multiplier, self.field, self.n) * self.generators[term.generator]
        return total

    # --- dimensiones graduadas ------------------------------------------

    def graded_dimension(self, d: int) -> Tuple[int, int]:
        """(dim I_d, dim A_d)."""
        if d < 0:
            raise DomainError("negative degree")
        ambient = binom(self.n * self.n + d - 1, d)
        if not any(dg <= d for dg in self._degrees):
            return 0, ambient
        return sum(self._block(d, w).engine.rank for w in self._weights_of_degree(d)), ambient

    def minimal_generator_count(self, d: int) -> int:
        """dim I_d - dim(A_1 * I_{d-1})."""
        if not any(dg == d for dg in self._degrees):
            return 0
        if self.weighted:
            weights = sorted({self._weights[k] for k, dg in enumerate(self._degrees) if dg == d})
        else:
            weights = [None]
        count = 0
        for w in weights:
            full = self._block(d, w).engine.rank
            lower = self._block(d, w, below=True).engine.rank
            count += full - lower
        return count


def member(ideal: HomogeneousIdeal, f: Polynomial) -> bool:
    return ideal.member(f)


def ideal_contains(big: HomogeneousIdeal, small: HomogeneousIdeal) -> bool:
    return all(big.member(g) for g in small.generators)


def ideal_equal(first: HomogeneousIdeal, second: HomogeneousIdeal) -> bool:
    """Comprobar las dos inclusiones, generador a generador."""
    if first.n != second.n or first.field.characteristic != second.field.characteristic:
        raise FieldMismatchError("ideals over different fields or sizes")
    return ideal_contains(first, second) and ideal_contains(second, first)


def minimal_generator_count(ideal: HomogeneousIdeal, d: int) -> int:
    return ideal.minimal_generator_count(d)
