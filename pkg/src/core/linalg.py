"""
Motor de forma escalonada dispersa y exacta para la pertenencia por Macaulay.

Sobre Q las filas se guardan como vectores enteros primitivos y se eliminan
sin fracciones; sobre F_p las filas pivote son mónicas. Una fila es un dict
``{columna: valor}`` y su columna líder es el menor índice.
"""

import logging
import math
from fractions import Fraction
from typing import Dict, Hashable, Iterable, Optional, Sequence, Tuple

import numpy as np
import sympy

from .fields import FieldSpec, RawValue

SparseRow = Dict[int, int]
Expression = Dict[Hashable, RawValue]

# clave reservada para el vector objetivo dentro de una expresión
_TARGET = ("__target__",)


def _clear_denominators(vector: Dict[int, RawValue]) -> Tuple[SparseRow, int]:
    den = 1
    for v in vector.values():
        if isinstance(v, Fraction):
            den = den * v.denominator // math.gcd(den, v.denominator)
    if den == 1:
        return {c: int(v) for c, v in vector.items() if v}, 1
    return {c: int(v * den) for c, v in vector.items() if v}, den


def _combine(left: Expression, a, right: Expression, b) -> Expression:
    """a*izquierda - b*derecha."""
    out = {k: a * v for k, v in left.items()} if a != 1 else dict(left)
    for k, v in right.items():
        nv = out.get(k, 0) - b * v
        if nv:
            out[k] = nv
        else:
            out.pop(k, None)
    return out


class SparseEchelon:
    """Forma escalonada incremental con registro opcional de combinaciones de filas.

    Con el registro activo cada fila guardada lleva su expresión como
    combinación lineal de las filas de entrada etiquetadas; de ahí salen los
    testigos de pertenencia.
    """

    def __init__(self, field: FieldSpec, track_witness: bool = False):
        self.field = field
        self.track = track_witness
        self._rows: Dict[int, SparseRow] = {}
        self._exprs: Dict[int, Expression] = {}

    @property
    def rank(self) -> int:
        return len(self._rows)

    def _start(self, vector: Dict[int, RawValue], tag) -> Tuple[SparseRow, Expression]:
        p = self.field.characteristic
        if p:
            cur = {}
            for c, v in vector.items():
                v = self.field.coerce(v)
                if v:
                    cur[c] = v
            return cur, ({tag: 1} if self.track else {})
        cur, den = _clear_denominators(vector)
        return cur, ({tag: den} if self.track else {})

    def _eliminate(self, cur: SparseRow, expr: Expression) -> Tuple[SparseRow, Expression]:
        p = self.field.characteristic
        while cur:
            lead = min(cur)
            row = self._rows.get(lead)
            if row is None:
                break
            b = cur[lead]
            if p:
                for c, v in row.items():
                    nv = (cur.get(c, 0) - b * v) % p
                    if nv:
                        cur[c] = nv
                    else:
                        cur.pop(c, None)
                if self.track:
                    expr = {k: v % p for k, v in _combine(expr, 1, self._exprs[lead], b).items() if v % p}
                continue
            a = row[lead]
            g = math.gcd(a, b)
            a //= g
            b //= g
            if a != 1:
                cur = {c: a * v for c, v in cur.items()}
            for c, v in row.items():
                nv = cur.get(c, 0) - b * v
                if nv:
                    cur[c] = nv
                else:
                    cur.pop(c, None)
            if self.track:
                expr = _combine(expr, a, self._exprs[lead], b)
            content = math.gcd(*cur.values()) if cur else 1
            if content > 1:
                cur = {c: v // content for c, v in cur.items()}
                if self.track:
                    expr = {k: Fraction(v, content) if isinstance(v, int) else v / content
                            for k, v in expr.items()}
        return cur, expr

    def add_row(self, vector: Dict[int, RawValue], tag: Hashable = None) -> bool:
        """Insertar una fila; True si sube el rango."""
        cur, expr = self._start(vector, tag)
        cur, expr = self._eliminate(cur, expr)
        if not cur:
            return False
        lead = min(cur)
        p = self.field.characteristic
        if p and cur[lead] != 1:
            inv = pow(cur[lead], -1, p)
            cur = {c: v * inv % p for c, v in cur.items()}
            if self.track:
                expr = {k: v * inv % p for k, v in expr.items()}
        elif not p:
            content = math.gcd(*cur.values())
            if content > 1:
                cur = {c: v // content for c, v in cur.items()}
                if self.track:
                    expr = {k: Fraction(v) / content for k, v in expr.items()}
        self._rows[lead] = cur
        if self.track:
            self._exprs[lead] = expr
        return True

    def contains(self, vector: Dict[int, RawValue]) -> bool:
        cur, _ = self._eliminate(*self._start(vector, _TARGET))
        return not cur

    def express(self, vector: Dict[int, RawValue]) -> Optional[Dict[Hashable, RawValue]]:
        """Obtener c_t con vector = sum c_t * fila_t, o None si queda fuera del espacio."""
        if not self.track:
            raise RuntimeError("express() needs an engine built with track_witness=True")
        cur, expr = self._eliminate(*self._start(vector, _TARGET))
        if cur:
            return None
        p = self.field.characteristic
        scale = expr.pop(_TARGET)
        if p:
            inv = pow(scale, -1, p)
            return {tag: -v * inv % p for tag, v in expr.items() if v % p}
        return {tag: self.field.coerce(Fraction(-v) / scale) for tag, v in expr.items() if v}


def polynomial_span_rank(polys: Iterable, field: FieldSpec) -> int:
    """Calcular la dimensión del espacio generado por unos polinomios."""
    engine = SparseEchelon(field)
    columns: Dict[Tuple[int, ...], int] = {}
    for poly in polys:
        engine.add_row({columns.setdefault(exps, len(columns)): c for exps, c in poly.raw_terms.items()})
    return engine.rank


def random_prime(seed: int, bits: int = 30) -> int:
    """Elegir un primo determinista de 30 bits para el rango modular."""
    rng = np.random.default_rng(seed)
    start = int(rng.integers(2 ** (bits - 1), 2 ** bits))
    return int(sympy.nextprime(start))


def modular_rank(vectors: Sequence[Dict[int, RawValue]], ncols: int, prime: int) -> int:
    """Calcular el rango denso módulo ``prime`` con filas int64 de numpy (primo < 2^31)."""
    if not vectors or not ncols:
        return 0
    mat = np.zeros((len(vectors), ncols), dtype=np.int64)
    for i, vector in enumerate(vectors):
        for c, v in vector.items():
            if isinstance(v, Fraction):
                mat[i, c] = v.numerator * pow(v.denominator, -1, prime) % prime
            else:
                mat[i, c] = int(v) % prime
    rows = mat.shape[0]
    rank = 0
    for col in range(ncols):
        if rank == rows:
            break
        nonzero = np.nonzero(mat[rank:, col])[0]
        if not len(nonzero):
            continue
        pivot = rank + int(nonzero[0])
        if pivot != rank:
            mat[[rank, pivot], :] = mat[[pivot, rank], :]
        inv = pow(int(mat[rank, col]), -1, prime)
        mat[rank, :] = mat[rank, :] * inv % prime
        below = np.nonzero(mat[rank + 1:, col])[0] + rank + 1
        if len(below):
            mat[below, :] = (mat[below, :] - np.outer(mat[below, col], mat[rank, :])) % prime
        rank += 1
    logging.debug(f"Rango modular {rank} ({rows}x{ncols}, p={prime})")
    return rank
