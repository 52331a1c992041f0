"""
Aritmética escalar exacta sobre los racionales y sobre cuerpos primos F_p.

Los valores crudos son los que circulan por el código de polinomios y de
álgebra lineal: sobre Q un ``int`` si es entero y un ``Fraction`` si no, sobre
F_p un ``int`` en ``[0, p)``. ``Scalar`` envuelve un valor crudo junto a su
cuerpo para la API pública.
"""

import math
from fractions import Fraction
from typing import Union

import sympy
from pydantic import BaseModel, ConfigDict, field_validator

from .errors import DomainError, FieldMismatchError, ParseError

RawValue = Union[int, Fraction]

# p tiene que caber en una palabra de máquina
MAX_PRIME = 2 ** 63


class FieldSpec(BaseModel):
    """Selector de cuerpo: característica 0 es Q, un primo p es F_p."""

    model_config = ConfigDict(frozen=True)

    characteristic: int = 0

    @field_validator("characteristic")
    @classmethod
    def _check_characteristic(cls, value: int) -> int:
        if value == 0:
            return value
        if value < 0 or value >= MAX_PRIME:
            raise ValueError(f"characteristic {value} outside [0, 2^63)")
        if not sympy.isprime(value):
            raise ValueError(f"characteristic {value} is not prime")
        return value

    @classmethod
    def rational(cls) -> "FieldSpec":
        return cls(characteristic=0)

    @classmethod
    def prime(cls, p: int) -> "FieldSpec":
        return cls(characteristic=p)

    @property
    def is_rational(self) -> bool:
        return self.characteristic == 0

    @property
    def label(self) -> str:
        return "q" if self.characteristic == 0 else f"fp:{self.characteristic}"

    def __str__(self) -> str:
        return self.label

    # --- aritmética cruda -----------------------------------------------

    def coerce(self, value) -> RawValue:
        """Convertir un int, Fraction o literal numérico a su forma canónica."""
        p = self.characteristic
        if isinstance(value, str):
            try:
                value = Fraction(value)
            except (ValueError, ZeroDivisionError) as e:
                raise ParseError(f"invalid scalar literal: {value!r}") from e
        if p:
            if isinstance(value, Fraction):
                den = value.denominator % p
                if den == 0:
                    raise DomainError(f"denominator of {value} vanishes in F_{p}")
                return value.numerator * pow(den, -1, p) % p
            return int(value) % p
        if isinstance(value, Fraction):
            return value.numerator if value.denominator == 1 else value
        if isinstance(value, int):
            return int(value)
        return _normalize_rational(Fraction(value))

    def add(self, a: RawValue, b: RawValue) -> RawValue:
        if self.characteristic:
            return (a + b) % self.characteristic
        return _normalize_rational(a + b)

    def sub(self, a: RawValue, b: RawValue) -> RawValue:
        if self.characteristic:
            return (a - b) % self.characteristic
        return _normalize_rational(a - b)

    def mul(self, a: RawValue, b: RawValue) -> RawValue:
        if self.characteristic:
            return a * b % self.characteristic
        return _normalize_rational(a * b)

    def neg(self, a: RawValue) -> RawValue:
        if self.characteristic:
            return -a % self.characteristic
        return -a

    def inv(self, a: RawValue) -> RawValue:
        if a == 0:
            raise ZeroDivisionError("zero is not invertible")
        if self.characteristic:
            return pow(a, -1, self.characteristic)
        return _normalize_rational(Fraction(1) / a)

    def div(self, a: RawValue, b: RawValue) -> RawValue:
        return self.mul(a, self.inv(b))

    def scalar(self, value) -> "Scalar":
        return Scalar(self, value)

    def random_value(self, rng, bound: int = 5) -> RawValue:
        """Obtener un elemento aleatorio con un Generator de numpy; fracciones pequeñas sobre Q."""
        if self.characteristic:
            return int(rng.integers(0, self.characteristic))
        num = int(rng.integers(-bound, bound + 1))
        den = int(rng.integers(1, bound + 1))
        return _normalize_rational(Fraction(num, den))


def _normalize_rational(value: RawValue) -> RawValue:
    if isinstance(value, Fraction) and value.denominator == 1:
        return value.numerator
    return value


class Scalar:
    """Elemento exacto e inmutable de un cuerpo."""

    __slots__ = ("field", "value")

    def __init__(self, field: FieldSpec, value=0):
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "value", field.coerce(value))

    def __setattr__(self, name, value):
        raise AttributeError("Scalar is immutable")

    def _other(self, other) -> RawValue:
        if isinstance(other, Scalar):
            if other.field.characteristic != self.field.characteristic:
                raise FieldMismatchError(f"{self.field} vs {other.field}")
            return other.value
        return self.field.coerce(other)

    def __add__(self, other):
        return Scalar(self.field, self.field.add(self.value, self._other(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return Scalar(self.field, self.field.sub(self.value, self._other(other)))

    def __rsub__(self, other):
        return Scalar(self.field, self.field.sub(self._other(other), self.value))

    def __mul__(self, other):
        return Scalar(self.field, self.field.mul(self.value, self._other(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return Scalar(self.field, self.field.div(self.value, self._other(other)))

    def __neg__(self):
        return Scalar(self.field, self.field.neg(self.value))

    def __pow__(self, exponent: int):
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = Scalar(self.field, 1)
        for _ in range(exponent):
            result = result * self
        return result

    def inverse(self) -> "Scalar":
        return Scalar(self.field, self.field.inv(self.value))

    @property
    def is_zero(self) -> bool:
        return self.value == 0

    def __eq__(self, other):
        if isinstance(other, Scalar):
            return (self.field.characteristic == other.field.characteristic
                    and self.value == other.value)
        if isinstance(other, (int, Fraction)):
            return self.value == self.field.coerce(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.field.characteristic, self.value))

    def __repr__(self):
        return f"Scalar({self.field.label}, {self})"

    def __str__(self):
        return str(self.value)


def parse_field(text: str) -> FieldSpec:
    """Interpretar el selector de cuerpo de la CLI: ``q`` o ``fp:P``."""
    text = (text or "").strip().lower()
    if text in ("q", "qq"):
        return FieldSpec.rational()
    if text.startswith("fp:"):
        try:
            p = int(text[3:])
        except ValueError as e:
            raise ParseError(f"invalid prime in field selector: {text!r}") from e
        try:
            return FieldSpec.prime(p)
        except ValueError as e:
            raise ParseError(str(e)) from e
    raise ParseError(f"unknown field selector: {text!r} (expected 'q' or 'fp:P')")


def binom(a: int, b: int) -> int:
    """Obtener C(a, b); cero cuando b > a."""
    if a < 0 or b < 0:
        raise DomainError(f"binom({a}, {b}) needs non-negative arguments")
    return math.comb(a, b)


def _carries(a: int, b: int, p: int) -> int:
    """Contar acarreos al sumar a y b en base p (valuación p-ádica de C(a+b, a))."""
    count = carry = 0
    while a or b or carry:
        carry = 1 if a % p + b % p + carry >= p else 0
        count += carry
        a //= p
        b //= p
    return count


def gcd_binomials(n: int) -> int:
    """Calcular el mcd de C(n - m + r, r) para r = 1..m, m = floor(n/2) + 1.

    Con k = n - m + 1 el término r = 1 vale k, así que solo cuentan los primos
    de k. Para cada p la valuación mínima sobre r <= m se alcanza en una
    potencia r = p^j, y vale el número de acarreos de r + (k - 1) en base p.
    """
    if n < 1:
        raise DomainError(f"gcd_binomials needs n >= 1, got {n}")
    m = n // 2 + 1
    k = n - m + 1
    g = 1
    for p in sympy.factorint(k):
        valuation = None
        power = 1
        while power <= m:
            v = _carries(power, k - 1, p)
            valuation = v if valuation is None else min(valuation, v)
            power *= p
        g *= p ** valuation
    return g
