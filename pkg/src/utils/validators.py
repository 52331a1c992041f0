import logging
from pathlib import Path
from typing import Optional, Tuple

from src.core.errors import DomainError, ParseError
from src.core.fields import FieldSpec, parse_field
from src.core.orbits import Partition


def validate_field_text(text: str) -> FieldSpec:
    """
    Valida el selector de cuerpo de la CLI

    Args:
        text: 'q' o 'fp:P' con P primo

    Returns:
        FieldSpec: cuerpo correspondiente
    """
    try:
        return parse_field(text)
    except ParseError:
        logging.error(f"Selector de cuerpo no válido: {text}")
        raise


def validate_partition(text: str, n: int) -> Partition:
    try:
        lam = Partition.parse(text)
    except ValueError as e:
        raise ParseError(f"invalid partition {text!r}: {e}") from e
    if lam.weight != n:
        raise DomainError(f"partition {lam} has weight {lam.weight}, expected n={n}")
    return lam


def validate_dimension(n: int, e: Optional[int] = None) -> None:
    if n < 1:
        raise DomainError(f"n must be positive, got {n}")
    if e is not None and not 1 <= e < n:
        raise DomainError(f"e must satisfy 1 <= e < n (n={n}, e={e})")


def validate_input_file(path: Path) -> Tuple[bool, str]:
    if not path.exists():
        return False, f"File does not exist: {path}"
    if not path.is_file():
        return False, f"Not a regular file: {path}"
    return True, "Valid file"
