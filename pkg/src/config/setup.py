import logging
from pathlib import Path


def setup_logging(logs_dir: Path, level: str = "WARNING", to_file: bool = False):
    handlers = [logging.StreamHandler()]
    if to_file:
        logs_dir.mkdir(parents=True, exist_ok=True)
        handlers.append(logging.FileHandler(logs_dir / 'oil.log'))

    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.WARNING),
        format='%(asctime)s - %(levelname)s - %(message)s',
        handlers=handlers,
        force=True,
    )
