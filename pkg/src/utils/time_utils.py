import time
from typing import Dict


class Stopwatch:
    """Vueltas con nombre de reloj de pared; solo se leen con los tiempos activados."""

    def __init__(self):
        self._start = time.perf_counter()
        self._last = self._start
        self.laps: Dict[str, float] = {}

    def lap(self, name: str) -> float:
        now = time.perf_counter()
        self.laps[name] = now - self._last
        self._last = now
        return self.laps[name]

    @property
    def total(self) -> float:
        return time.perf_counter() - self._start

    def as_dict(self) -> Dict[str, float]:
        data = dict(self.laps)
        data["total"] = self.total
        return data
