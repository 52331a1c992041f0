"""
Polinomios dispersos en las n² funciones coordenadas F[i,j] de la matriz genérica.

Los monomios se guardan como tuplas densas de exponentes de longitud n²; la
variable ``(i, j)`` ocupa la posición ``(i-1)*n + (j-1)`` (por filas), de modo
que F[1,1] > F[1,2] > ... > F[n,n] en los dos órdenes admitidos.
"""

import re
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement
from operator import add
from typing import Dict, Iterable, List, NamedTuple, Optional, Sequence, Tuple

from .errors import DomainError, FieldMismatchError, NonHomogeneousError, ParseError
from .fields import FieldSpec, RawValue, Scalar

Exponents = Tuple[int, ...]
SparseVector = Dict[int, RawValue]


class MonomialOrder(str, Enum):
    DEGREVLEX = "degrevlex"
    LEX = "lex"

    def key(self, exps: Exponents):
        """Obtener la clave de orden; clave mayor, monomio mayor."""
        if self is MonomialOrder.LEX:
            return exps
        return (sum(exps), tuple(-e for e in reversed(exps)))


DEFAULT_ORDER = MonomialOrder.DEGREVLEX


class VariableIndex(NamedTuple):
    row: int
    col: int

    def position(self, n: int) -> int:
        if not (1 <= self.row <= n and 1 <= self.col <= n):
            raise DomainError(f"variable F[{self.row},{self.col}] outside 1..{n}")
        return (self.row - 1) * n + (self.col - 1)


class Monomial:
    """Vista pública de un vector de exponentes."""

    __slots__ = ("n", "exponents", "degree")

    def __init__(self, n: int, exponents: Exponents):
        if len(exponents) != n * n:
            raise DomainError(f"monomial needs {n * n} exponents, got {len(exponents)}")
        self.n = n
        self.exponents = tuple(exponents)
        self.degree = sum(self.exponents)

    def __eq__(self, other):
        return isinstance(other, Monomial) and self.exponents == other.exponents

    def __hash__(self):
        return hash(self.exponents)

    def __repr__(self):
        return f"Monomial({monomial_text(self.exponents, self.n) or '1'})"


def monomial_weight(exps: Exponents, n: int) -> Tuple[int, ...]:
    """Calcular el peso del toro: contenido por filas menos contenido por columnas."""
    w = [0] * n
    for v, e in enumerate(exps):
        if e:
            w[v // n] += e
            w[v % n] -= e
    return tuple(w)


def monomial_text(exps: Exponents, n: int) -> str:
    factors = []
    for v, e in enumerate(exps):
        if e:
            factor = f"F[{v // n + 1},{v % n + 1}]"
            factors.append(factor if e == 1 else f"{factor}^{e}")
    return "*".join(factors)


@lru_cache(maxsize=None)
def monomials_of_degree(n: int, d: int, order: MonomialOrder = DEFAULT_ORDER) -> Tuple[Exponents, ...]:
    """Listar los exponentes de grado d en n² variables, de mayor a menor."""
    nvars = n * n
    result = []
    for combo in combinations_with_replacement(range(nvars), d):
        exps = [0] * nvars
        for v in combo:
            exps[v] += 1
        result.append(tuple(exps))
    result.sort(key=order.key, reverse=True)
    return tuple(result)


@lru_cache(maxsize=None)
def monomials_by_weight(n: int, d: int) -> Dict[Tuple[int, ...], Tuple[Exponents, ...]]:
    """Agrupar los monomios de grado d por peso del toro."""
    groups: Dict[Tuple[int, ...], List[Exponents]] = {}
    for exps in monomials_of_degree(n, d):
        groups.setdefault(monomial_weight(exps, n), []).append(exps)
    return {w: tuple(ms) for w, ms in groups.items()}


class Polynomial:
    """Polinomio disperso e inmutable sobre un FieldSpec en n² variables."""

    __slots__ = ("field", "n", "_terms", "_hash")

    def __init__(self, field: FieldSpec, n: int, terms: Optional[Dict[Exponents, object]] = None,
                 _trusted: bool = False):
        self.field = field
        self.n = n
        self._hash = None
        if _trusted:
            self._terms = terms if terms is not None else {}
            return
        clean: Dict[Exponents, RawValue] = {}
        nvars = n * n
        for exps, coeff in (terms or {}).items():
            exps = tuple(exps)
            if len(exps) != nvars:
                raise DomainError(f"exponent vector of length {len(exps)} for n={n}")
            value = field.coerce(coeff.value if isinstance(coeff, Scalar) else coeff)
            if value:
                clean[exps] = field.add(clean.get(exps, 0), value)
                if not clean[exps]:
                    del clean[exps]
        self._terms = clean

    # --- constructors ---------------------------------------------------

    @classmethod
    def zero(cls, field: FieldSpec, n: int) -> "Polynomial":
        return cls(field, n, {}, _trusted=True)

    @classmethod
    def constant(cls, field: FieldSpec, n: int, value=1) -> "Polynomial":
        value = field.coerce(value)
        if not value:
            return cls.zero(field, n)
        return cls(field, n, {(0,) * (n * n): value}, _trusted=True)

    @classmethod
    def variable(cls, field: FieldSpec, n: int, i: int, j: int) -> "Polynomial":
        exps = [0] * (n * n)
        exps[VariableIndex(i, j).position(n)] = 1
        return cls(field, n, {tuple(exps): 1}, _trusted=True)

    @classmethod
    def monomial(cls, field: FieldSpec, n: int, exps: Exponents, coeff=1) -> "Polynomial":
        return cls(field, n, {tuple(exps): coeff})

    # --- inspection -----------------------------------------------------

    @property
    def raw_terms(self) -> Dict[Exponents, RawValue]:
        return self._terms

    def terms(self, order: MonomialOrder = DEFAULT_ORDER) -> List[Tuple[Exponents, RawValue]]:
        return sorted(self._terms.items(), key=lambda t: order.key(t[0]), reverse=True)

    def monomials(self, order: MonomialOrder = DEFAULT_ORDER) -> List[Monomial]:
        return [Monomial(self.n, exps) for exps, _ in self.terms(order)]

    def coefficient(self, monomial) -> Scalar:
        exps = monomial.exponents if isinstance(monomial, Monomial) else tuple(monomial)
        return Scalar(self.field, self._terms.get(exps, 0))

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    @property
    def degree(self) -> int:
        """Grado total; -1 para el polinomio cero."""
        return max((sum(e) for e in self._terms), default=-1)

    @property
    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self._terms}) <= 1

    def homogeneous_degree(self) -> int:
        degrees = {sum(e) for e in self._terms}
        if len(degrees) > 1:
            raise NonHomogeneousError(f"polynomial mixes degrees {sorted(degrees)}")
        return degrees.pop() if degrees else -1

    def weight(self) -> Optional[Tuple[int, ...]]:
        """Obtener el peso común de los términos, o None si difieren."""
        weights = {monomial_weight(e, self.n) for e in self._terms}
        if len(weights) == 1:
            return weights.pop()
        if not weights:
            return (0,) * self.n
        return None

    def weight_components(self) -> Dict[Tuple[int, ...], "Polynomial"]:
        parts: Dict[Tuple[int, ...], Dict[Exponents, RawValue]] = {}
        for exps, c in self._terms.items():
            parts.setdefault(monomial_weight(exps, self.n), {})[exps] = c
        return {w: Polynomial(self.field, self.n, t, _trusted=True) for w, t in parts.items()}

    def leading_term(self, order: MonomialOrder = DEFAULT_ORDER) -> Tuple[Exponents, RawValue]:
        if not self._terms:
            raise DomainError("zero polynomial has no leading term")
        exps = max(self._terms, key=order.key)
        return exps, self._terms[exps]

    # --- arithmetic -----------------------------------------------------

    def _check(self, other: "Polynomial"):
        if other.n != self.n or other.field.characteristic != self.field.characteristic:
            raise FieldMismatchError(
                f"cannot combine polynomials over {self.field}/n={self.n} and {other.field}/n={other.n}")

    def _lift(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        if isinstance(other, Scalar):
            return Polynomial.constant(self.field, self.n, other.value)
        return Polynomial.constant(self.field, self.n, other)

    def __add__(self, other):
        other = self._lift(other)
        f = self.field
        terms = dict(self._terms)
        for exps, c in other._terms.items():
            value = f.add(terms.get(exps, 0), c)
            if value:
                terms[exps] = value
            else:
                terms.pop(exps, None)
        return Polynomial(f, self.n, terms, _trusted=True)

    __radd__ = __add__

    def __neg__(self):
        f = self.field
        return Polynomial(f, self.n, {e: f.neg(c) for e, c in self._terms.items()}, _trusted=True)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def scale(self, c) -> "Polynomial":
        f = self.field
        c = f.coerce(c.value if isinstance(c, Scalar) else c)
        if not c:
            return Polynomial.zero(f, self.n)
        return Polynomial(f, self.n, {e: f.mul(v, c) for e, v in self._terms.items()}, _trusted=True)

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            return self.scale(other)
        self._check(other)
        f = self.field
        acc: Dict[Exponents, RawValue] = {}
        for ea, ca in self._terms.items():
            for eb, cb in other._terms.items():
                e = tuple(map(add, ea, eb))
                acc[e] = acc.get(e, 0) + ca * cb
        terms = {}
        for e, c in acc.items():
            c = f.coerce(c)
            if c:
                terms[e] = c
        return Polynomial(f, self.n, terms, _trusted=True)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, k: int):
        if k < 0:
            raise DomainError("negative power of a polynomial")
        result = Polynomial.constant(self.field, self.n, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def multiply_monomial(self, exps: Exponents, coeff: RawValue = 1) -> "Polynomial":
        f = self.field
        terms = {tuple(map(add, e, exps)): f.mul(c, coeff) for e, c in self._terms.items()}
        return Polynomial(f, self.n, terms, _trusted=True)

    # --- comparison -----------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return (self.n == other.n
                    and self.field.characteristic == other.field.characteristic
                    and self._terms == other._terms)
        if isinstance(other, (int, Fraction)):
            return self == Polynomial.constant(self.field, self.n, other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.field.characteristic, self.n, frozenset(self._terms.items())))
        return self._hash

    # --- evaluation and text --------------------------------------------

    def evaluate(self, point) -> Scalar:
        """Evaluar en un MatrixPoint sustituyendo F[i,j] por point[i,j]."""
        if point.n != self.n:
            raise FieldMismatchError(f"point is {point.n}x{point.n}, polynomial has n={self.n}")
        if point.field.characteristic != self.field.characteristic:
            raise FieldMismatchError(f"point over {point.field}, polynomial over {self.field}")
        values = point.flat
        total = 0
        for exps, c in self._terms.items():
            term = c
            for v, e in enumerate(exps):
                if e:
                    term = term * (values[v] if e == 1 else values[v] ** e)
                    if not term:
                        break
            total += term
        return Scalar(self.field, total)

    def to_text(self) -> str:
        if not self._terms:
            return "0"
        p = self.field.characteristic
        pieces = []
        for idx, (exps, c) in enumerate(self.terms()):
            negative = not p and c < 0
            magnitude = -c if negative else c
            body = monomial_text(exps, self.n)
            coeff = _coefficient_text(magnitude)
            if not body:
                text = coeff
            elif magnitude == 1:
                text = body
            else:
                text = f"{coeff}*{body}"
            if idx == 0:
                pieces.append(f"-{text}" if negative else text)
            else:
                pieces.append(f" - {text}" if negative else f" + {text}")
        return "".join(pieces)

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"Polynomial({self.field.label}, n={self.n}, {self.to_text()!r})"


def _coefficient_text(value: RawValue) -> str:
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    return str(value)


def graded_component(polys: Sequence[Polynomial], d: int,
                     order: MonomialOrder = DEFAULT_ORDER) -> List[SparseVector]:
    """Construir los vectores de coordenadas de cada m*f con deg(m*f) = d.

    Las columnas siguen ``monomials_of_degree(n, d, order)``; las filas van por
    generador, con los multiplicadores en orden descendente.
    """
    if not polys:
        return []
    n = polys[0].n
    basis = monomials_of_degree(n, d, order)
    column = {exps: i for i, exps in enumerate(basis)}
    vectors: List[SparseVector] = []
    for f in polys:
        if f.n != n:
            raise FieldMismatchError("graded_component needs a common matrix size")
        if f.is_zero:
            continue
        df = f.homogeneous_degree()
        if df > d:
            raise DomainError(f"generator of degree {df} above target degree {d}")
        for m in monomials_of_degree(n, d - df, order):
            vectors.append({column[tuple(map(add, e, m))]: c for e, c in f.raw_terms.items()})
    return vectors


_TOKEN = re.compile(r"\s*(?:(F)\[\s*(\d+)\s*,\s*(\d+)\s*\](?:\s*\^\s*(\d+))?|(\d+)(?:\s*/\s*(\d+))?|([+\-*]))")


def _tokenize(text: str):
    pos = 0
    tokens = []
    text = text.rstrip()
    while pos < len(text):
        match = _TOKEN.match(text, pos)
        if not match or match.end() == pos:
            raise ParseError(f"unexpected input at position {pos}: {text[pos:pos + 20]!r}")
        if match.group(1):
            exponent = int(match.group(4)) if match.group(4) else 1
            tokens.append(("factor", (int(match.group(2)), int(match.group(3)), exponent)))
        elif match.group(5):
            den = int(match.group(6)) if match.group(6) else 1
            if den == 0:
                raise ParseError("zero denominator in coefficient")
            tokens.append(("coeff", Fraction(int(match.group(5)), den)))
        else:
            tokens.append(("op", match.group(7)))
        pos = match.end()
    return tokens


def max_index(text: str) -> int:
    """Obtener el mayor índice usado en un texto polinómico (0 si es constante)."""
    best = 0
    for kind, value in _tokenize(text):
        if kind == "factor":
            best = max(best, value[0], value[1])
    return best


def parse_polynomial(text: str, field: FieldSpec, n: Optional[int] = None) -> Polynomial:
    """Convertir texto del estilo ``F[1,1]*F[2,2] - F[1,2]*F[2,1]`` en polinomio."""
    tokens = _tokenize(text)
    if not tokens:
        raise ParseError("empty polynomial text")
    if n is None:
        n = max(1, max((v[0] for k, v in tokens if k == "factor"), default=1),
                max((v[1] for k, v in tokens if k == "factor"), default=1))
    nvars = n * n
    terms: Dict[Exponents, Fraction] = {}
    i = 0
    sign = 1
    if tokens[0] == ("op", "-") or tokens[0] == ("op", "+"):
        sign = -1 if tokens[0][1] == "-" else 1
        i = 1
    while True:
        coeff = Fraction(sign)
        exps = [0] * nvars
        expect_item = True
        seen_item = False
        while i < len(tokens):
            kind, value = tokens[i]
            if expect_item:
                if kind == "coeff":
                    if seen_item:
                        raise ParseError("coefficient must lead its term")
                    coeff *= value
                elif kind == "factor":
                    row, col, e = value
                    if not (1 <= row <= n and 1 <= col <= n):
                        raise ParseError(f"F[{row},{col}] outside 1..{n}")
                    exps[(row - 1) * n + (col - 1)] += e
                else:
                    raise ParseError(f"unexpected operator {value!r}")
                seen_item = True
                expect_item = False
                i += 1
            elif kind == "op" and value == "*":
                expect_item = True
                i += 1
            else:
                break
        if expect_item:
            raise ParseError("term ends with an operator")
        key = tuple(exps)
        terms[key] = terms.get(key, 0) + coeff
        if i >= len(tokens):
            break
        kind, value = tokens[i]
        if kind != "op" or value not in "+-":
            raise ParseError(f"expected '+' or '-' between terms, got {value!r}")
        sign = 1 if value == "+" else -1
        i += 1
        if i >= len(tokens):
            raise ParseError("dangling sign at end of polynomial")
    return Polynomial(field, n, terms)


def variables(field: FieldSpec, n: int) -> List[List[Polynomial]]:
    """Obtener la matriz genérica como rejilla n x n de variables."""
    return [[Polynomial.variable(field, n, i, j) for j in range(1, n + 1)] for i in range(1, n + 1)]


def sum_polynomials(polys: Iterable[Polynomial], field: FieldSpec, n: int) -> Polynomial:
    f = field
    acc: Dict[Exponents, RawValue] = {}
    for p in polys:
        for e, c in p.raw_terms.items():
            acc[e] = acc.get(e, 0) + c
    return Polynomial(f, n, acc)
