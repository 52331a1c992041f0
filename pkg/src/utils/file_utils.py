import json
import logging
from pathlib import Path
from typing import List, Optional

from src.core.errors import ParseError
from src.core.fields import FieldSpec
from src.core.poly import Polynomial, max_index, parse_polynomial
from src.models.generator_set import GeneratorSet


def read_polynomial_texts(path: Path) -> List[str]:
    """
    Lee polinomios de un fichero

    Acepta texto plano (uno por línea, '#' para comentarios) o el JSON que
    emite el subcomando gens (lista de objetos con clave 'polynomial').
    """
    content = Path(path).read_text(encoding="utf-8")
    stripped = content.lstrip()
    if stripped.startswith("["):
        try:
            records = json.loads(content)
        except json.JSONDecodeError as e:
            raise ParseError(f"invalid JSON in {path}: {e}") from e
        texts = []
        for record in records:
            if isinstance(record, str):
                texts.append(record)
            elif isinstance(record, dict) and "polynomial" in record:
                texts.append(record["polynomial"])
            else:
                raise ParseError(f"unexpected record in {path}: {record!r}")
        return texts
    return [line.strip() for line in content.splitlines()
            if line.strip() and not line.strip().startswith("#")]


def infer_dimension(texts: List[str]) -> int:
    return max((max_index(t) for t in texts), default=1) or 1


def load_polynomials(path: Path, field: FieldSpec, n: Optional[int] = None) -> List[Polynomial]:
    texts = read_polynomial_texts(path)
    n = n or infer_dimension(texts)
    polys = [parse_polynomial(t, field, n) for t in texts]
    logging.info(f"Leídos {len(polys)} polinomios de {path} (n={n}, {field})")
    return polys


def load_generator_set(path: Path, field: FieldSpec, n: int) -> GeneratorSet:
    """Cargar un fichero de generadores como GeneratorSet con el nombre del fichero."""
    path = Path(path)
    gs = GeneratorSet(label=path.stem, n=n, field=field)
    for k, poly in enumerate(load_polynomials(path, field, n)):
        gs.add("file", poly, line=k + 1)
    return gs


def write_text(path: Path, content: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(content, encoding="utf-8")
    return path
