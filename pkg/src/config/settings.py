import os
import logging
from pathlib import Path
from dotenv import load_dotenv

from src.models.schemas import ResourceLimits


def _env_int(name: str, default: int, minimum: int = 1) -> int:
    raw = os.getenv(name)
    if raw is None or raw == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        logging.error(f"Valor no numérico en {name}: {raw!r}")
        raise ValueError(f"{name} must be an integer, got {raw!r}")
    if value < minimum:
        logging.error(f"{name}={value} por debajo del mínimo {minimum}")
        raise ValueError(f"{name} must be >= {minimum}, got {value}")
    return value


def _env_flag(name: str, default: bool = False) -> bool:
    raw = os.getenv(name)
    if raw is None:
        return default
    return raw.strip().lower() in ("1", "true", "yes", "on")


class Settings:
    def __init__(self):
        load_dotenv()

        # Base directories
        self.BASE_DIR = Path(__file__).resolve().parent.parent.parent
        self.REPORTS_DIR = Path(os.getenv('OIL_REPORTS_DIR', self.BASE_DIR / "reports"))
        self.LOGS_DIR = Path(os.getenv('OIL_LOGS_DIR', self.BASE_DIR / "logs"))

        # Paralelismo de los lotes
        self.THREADS = _env_int('OIL_THREADS', os.cpu_count() or 1)

        # Límites de cálculo
        self.MAX_DEGREE = _env_int('OIL_MAX_DEGREE', 6)
        self.MAX_ROWS = _env_int('OIL_MAX_ROWS', 250000)
        self.MAX_PAIRS = _env_int('OIL_MAX_PAIRS', 5000)
        self.MODULAR_PRECHECK = _env_flag('OIL_MODULAR_PRECHECK')

        # Informes
        self.REPORT_TIMING = _env_flag('OIL_REPORT_TIMING')
        self.DEFAULT_SEED = _env_int('OIL_SEED', 42, minimum=0)
        self.DEFAULT_SAMPLES = _env_int('OIL_SAMPLES', 100)

        # Logging
        self.LOG_LEVEL = os.getenv('OIL_LOG_LEVEL', 'WARNING').upper()
        self.LOG_TO_FILE = _env_flag('OIL_LOG_TO_FILE')

    def resource_limits(self, **overrides) -> ResourceLimits:
        values = {
            "max_degree": self.MAX_DEGREE,
            "max_rows": self.MAX_ROWS,
            "max_pairs": self.MAX_PAIRS,
            "modular_precheck": self.MODULAR_PRECHECK,
        }
        values.update({k: v for k, v in overrides.items() if v is not None})
        return ResourceLimits(**values)

    def report_path(self, path: str) -> Path:
        """Resolver la ruta de un informe: un nombre sin directorio va a REPORTS_DIR."""
        target = Path(path).expanduser()
        if not target.is_absolute() and target.parent == Path('.'):
            return self.REPORTS_DIR / target
        return target
