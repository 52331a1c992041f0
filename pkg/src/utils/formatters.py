import json
import logging
from pathlib import Path
from typing import Any, Union

STATUS_MARKERS = {
    "verified": "✅",
    "member": "✅",
    "refuted": "❌",
    "non-member": "❌",
    "inconclusive": "⚠️",
}


def format_status(status: str) -> str:
    return f"{STATUS_MARKERS.get(status, '•')} {status}"


def _normalize(value: Any) -> Any:
    """Redondear floats a microsegundos; las tuplas pasan a listas."""
    if isinstance(value, float):
        return round(value, 6)
    if isinstance(value, dict):
        return {str(k): _normalize(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_normalize(v) for v in value]
    return value


def canonical_json(data: Any) -> str:
    """Claves ordenadas, sangría fija y salto final: mismos datos, mismo texto."""
    return json.dumps(_normalize(data), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def emit_report(report, path: Union[str, Path]) -> Path:
    """
    Escribe un Report como JSON canónico

    Args:
        report: Report (o dict ya serializado)
        path: fichero destino; se crean los directorios intermedios

    Returns:
        Path: ruta escrita
    """
    path = Path(path)
    data = report.to_dict() if hasattr(report, "to_dict") else report
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_bytes(canonical_json(data).encode("utf-8"))
    except OSError as e:
        logging.error(f"No se pudo escribir el informe en {path}: {e}")
        raise
    logging.info(f"Informe escrito en {path}")
    return path
