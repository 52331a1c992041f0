class OilError(Exception):
    """Clase base de todos los errores del proyecto."""


class FieldMismatchError(OilError):
    """Operandos sobre cuerpos o tamaños de matriz distintos."""


class NonHomogeneousError(OilError):
    """Se necesitaba un polinomio homogéneo."""


class DomainError(OilError, ValueError):
    """Parámetro fuera de su rango admisible."""


class NotNilpotentError(OilError):
    """Tipo de Jordan pedido para una matriz no nilpotente."""


class ParseError(OilError, ValueError):
    """Texto de entrada que no sigue la gramática esperada."""


class ResourceLimitExceeded(OilError):
    """Se alcanzó un límite de cálculo: la respuesta es desconocida, no falsa."""

    def __init__(self, message: str, limit: str = "", value: int = 0):
        super().__init__(message)
        self.limit = limit
        self.value = value
