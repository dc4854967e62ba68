"""
Common utilities for projcone
Logging setup, chart sampling grids and small formatting helpers shared across the pipeline
"""
import logging
import math
import sys
from pathlib import Path
from typing import Optional, Sequence, Tuple

import numpy as np

from ..errors import InputError

MAX_GRID_DIMENSION = 4


def load_env_file(env_path: Optional[Path] = None) -> bool:
    """
    Load environment variables from a .env file if present.

    Args:
        env_path: Path to .env file (if None, uses the project root)

    Returns:
        True if a .env file was loaded, False otherwise
    """
    try:
        from dotenv import load_dotenv
    except ImportError:
        return False

    if env_path is None:
        env_path = Path(__file__).resolve().parent.parent.parent / '.env'

    if env_path.exists():
        load_dotenv(env_path)
        return True
    return False


def setup_logging(name: str, level: str = "INFO", log_dir: Optional[Path] = None) -> logging.Logger:
    """Setup consistent logging across modules"""
    logger = logging.getLogger(name)

    # Don't add handlers if they already exist
    if logger.handlers:
        return logger

    logger.setLevel(getattr(logging, level.upper()))
    logger.propagate = False

    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(logging.WARNING)

    if log_dir:
        log_dir.mkdir(parents=True, exist_ok=True)
        file_handler = logging.FileHandler(log_dir / f"{name}.log")
        file_handler.setLevel(logging.DEBUG)
        file_handler.setFormatter(logging.Formatter(
            '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
        ))
        logger.addHandler(file_handler)

    console_handler.setFormatter(logging.Formatter('%(levelname)s - %(message)s'))
    logger.addHandler(console_handler)

    return logger


def set_console_level(level: str) -> None:
    """Raise or lower console verbosity for every projcone logger already created."""
    for name, logger in logging.Logger.manager.loggerDict.items():
        if not name.startswith("projcone") or not isinstance(logger, logging.Logger):
            continue
        for handler in logger.handlers:
            if isinstance(handler, logging.StreamHandler) and not isinstance(handler, logging.FileHandler):
                handler.setLevel(getattr(logging, level.upper()))


def sample_grid(domain: Sequence[Tuple[float, float]], resolution: int) -> np.ndarray:
    """
    Uniform tensor grid over a box, endpoints included.

    Args:
        domain: Sequence of (lo, hi) pairs, one per axis
        resolution: Points per axis (>= 2)

    Returns:
        Array of shape (resolution**n, n), first axis varying slowest
    """
    n = len(domain)
    if n > MAX_GRID_DIMENSION:
        raise InputError(f"grid operations are limited to n <= {MAX_GRID_DIMENSION}, got n={n}")
    if resolution < 2:
        raise InputError(f"grid resolution must be >= 2, got {resolution}")
    axes = [np.linspace(lo, hi, resolution) for lo, hi in domain]
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.reshape(-1) for m in mesh], axis=1)


def box_center(domain: Sequence[Tuple[float, float]]) -> np.ndarray:
    return np.array([(lo + hi) / 2.0 for lo, hi in domain])


def parse_vector(text: Optional[str], name: str) -> Optional[np.ndarray]:
    """Parse a comma-separated vector such as ``0.5,-1``."""
    if text is None:
        return None
    try:
        return np.array([float(part) for part in text.split(",") if part.strip()])
    except ValueError:
        raise InputError(f"--{name} expects comma-separated numbers, got {text!r}")


def format_point(point: Optional[Sequence[float]]) -> str:
    if point is None:
        return "()"
    return "(" + ", ".join(f"{float(v):.6g}" for v in point) + ")"


def christoffel_label(symbol: str, i: int, j: int, k: int) -> str:
    """1-based label for a 0-based (i, j, k) component, e.g. Γ^1_{22}."""
    return f"{symbol}^{i + 1}_{{{j + 1}{k + 1}}}"


def is_finite_number(value) -> bool:
    """JSON number check: rejects booleans, NaN, ±Infinity and ints too large for a float."""
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        return False
    try:
        return math.isfinite(value)
    except OverflowError:
        return False
