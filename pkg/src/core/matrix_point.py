from typing import List, Sequence

from .errors import DomainError, FieldMismatchError
from .fields import FieldSpec, RawValue, Scalar


class MatrixPoint:
    """Matriz exacta n x n sobre un FieldSpec: un punto de Hom(E, E)."""

    __slots__ = ("field", "n", "flat")

    def __init__(self, field: FieldSpec, rows: Sequence[Sequence], _trusted: bool = False):
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise DomainError("matrix point must be square")
        self.field = field
        self.n = n
        if _trusted:
            self.flat = tuple(v for r in rows for v in r)
        else:
            self.flat = tuple(field.coerce(v.value if isinstance(v, Scalar) else v)
                              for r in rows for v in r)

    @classmethod
    def zero(cls, field: FieldSpec, n: int) -> "MatrixPoint":
        return cls(field, [[0] * n for _ in range(n)], _trusted=True)

    @classmethod
    def identity(cls, field: FieldSpec, n: int) -> "MatrixPoint":
        return cls(field, [[1 if i == j else 0 for j in range(n)] for i in range(n)], _trusted=True)

    def rows(self) -> List[List[RawValue]]:
        n = self.n
        return [list(self.flat[i * n:(i + 1) * n]) for i in range(n)]

    def entry(self, i: int, j: int) -> Scalar:
        """Obtener la entrada (i, j), con índices desde 1 como F[i,j]."""
        return Scalar(self.field, self.flat[(i - 1) * self.n + (j - 1)])

    def _check(self, other: "MatrixPoint"):
        if other.n != self.n or other.field.characteristic != self.field.characteristic:
            raise FieldMismatchError("matrix points of different shape or field")

    def __matmul__(self, other: "MatrixPoint") -> "MatrixPoint":
        self._check(other)
        n, f = self.n, self.field
        a, b = self.flat, other.flat
        rows = []
        for i in range(n):
            row = []
            for j in range(n):
                row.append(f.coerce(sum(a[i * n + k] * b[k * n + j] for k in range(n))))
            rows.append(row)
        return MatrixPoint(f, rows, _trusted=True)

    def __add__(self, other: "MatrixPoint") -> "MatrixPoint":
        self._check(other)
        f = self.field
        flat = [f.add(x, y) for x, y in zip(self.flat, other.flat)]
        n = self.n
        return MatrixPoint(f, [flat[i * n:(i + 1) * n] for i in range(n)], _trusted=True)

    def power(self, k: int) -> "MatrixPoint":
        result = MatrixPoint.identity(self.field, self.n)
        for _ in range(k):
            result = result @ self
        return result

    def trace(self) -> Scalar:
        n = self.n
        return Scalar(self.field, sum(self.flat[i * n + i] for i in range(n)))

    @property
    def is_zero(self) -> bool:
        return not any(self.flat)

    def _echelon(self, augment: bool = False):
        """Reducir por Gauss-Jordan; devuelve (rango, filas reducidas)."""
        f = self.field
        n = self.n
        rows = self.rows()
        if augment:
            for i in range(n):
                rows[i] += [1 if i == j else 0 for j in range(n)]
        width = len(rows[0]) if rows else 0
        rank = 0
        for col in range(n):
            pivot = next((r for r in range(rank, n) if rows[r][col] != 0), None)
            if pivot is None:
                continue
            rows[rank], rows[pivot] = rows[pivot], rows[rank]
            inv = f.inv(rows[rank][col])
            rows[rank] = [f.mul(v, inv) for v in rows[rank]]
            for r in range(n):
                if r != rank and rows[r][col] != 0:
                    factor = rows[r][col]
                    rows[r] = [f.sub(rows[r][c], f.mul(factor, rows[rank][c])) for c in range(width)]
            rank += 1
        return rank, rows

    def rank(self) -> int:
        return self._echelon()[0]

    def inverse(self) -> "MatrixPoint":
        rank, rows = self._echelon(augment=True)
        if rank < self.n:
            raise DomainError("matrix is singular")
        n = self.n
        return MatrixPoint(self.field, [r[n:] for r in rows], _trusted=True)

    @property
    def is_invertible(self) -> bool:
        return self.rank() == self.n

    def to_text_rows(self) -> List[List[str]]:
        return [[str(v) for v in row] for row in self.rows()]

    def __eq__(self, other):
        return (isinstance(other, MatrixPoint) and self.n == other.n
                and self.field.characteristic == other.field.characteristic
                and self.flat == other.flat)

    def __hash__(self):
        return hash((self.field.characteristic, self.flat))

    def __repr__(self):
        return f"MatrixPoint({self.field.label}, {self.to_text_rows()})"
