"""
projcone - Core Configuration
Run-time tolerances, step sizes and project paths shared by every command
"""
import os
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Any, Dict, Optional

import numpy as np

from .errors import ConfigError
from .utils.common import load_env_file

ENV_PREFIX = "PROJCONE_"


@dataclass
class RunConfig:
    """Tolerances, integration settings and output location for one run"""
    flat_tol: float = 1e-8
    equality_tol: float = 1e-9
    step: float = 0.01
    max_steps: int = 100
    match_tol: float = 1e-5
    line_tol: float = 1e-6
    grid: int = 5
    seed: int = 0
    out_dir: Optional[Path] = None
    expect_flat: bool = False
    verbose: bool = False

    def __post_init__(self):
        """Validate every field"""
        for name in ("flat_tol", "equality_tol", "match_tol", "line_tol", "step"):
            value = getattr(self, name)
            if not isinstance(value, (int, float)) or not value > 0:
                raise ConfigError(f"{name} must be > 0, got {value!r}")
        if self.max_steps < 1:
            raise ConfigError(f"max_steps must be >= 1, got {self.max_steps}")
        if self.grid < 2:
            raise ConfigError(f"grid resolution must be >= 2, got {self.grid}")
        if self.seed < 0:
            raise ConfigError(f"seed must be >= 0, got {self.seed}")
        if self.out_dir is not None:
            self.out_dir = Path(self.out_dir)

    @classmethod
    def from_env(cls, env: Optional[Dict[str, str]] = None, **overrides: Any) -> "RunConfig":
        """
        Build a config from PROJCONE_* environment variables.

        Args:
            env: Mapping to read instead of os.environ (a .env file is loaded first
                when reading the real environment)
            **overrides: Explicit values; None entries are ignored

        Returns:
            Validated RunConfig
        """
        if env is None:
            load_env_file()
            env = dict(os.environ)
        parsers = {"flat_tol": float, "step": float, "grid": int, "seed": int}
        values: Dict[str, Any] = {}
        for name, parse in parsers.items():
            raw = env.get(f"{ENV_PREFIX}{name.upper()}")
            if raw is None or raw == "":
                continue
            try:
                values[name] = parse(raw)
            except ValueError:
                raise ConfigError(f"{ENV_PREFIX}{name.upper()} must be a number, got {raw!r}")
        known = {f.name for f in fields(cls)}
        for name, value in overrides.items():
            if name not in known:
                raise ConfigError(f"unknown configuration field {name!r}")
            if value is not None:
                values[name] = value
        return cls(**values)

    def rng(self, stream: int = 0) -> np.random.Generator:
        """Generator for randomized property checks; each stream is independent for one seed."""
        return np.random.default_rng([self.seed, stream])

    def with_overrides(self, **changes: Any) -> "RunConfig":
        return replace(self, **{k: v for k, v in changes.items() if v is not None})

    def to_dict(self) -> Dict[str, Any]:
        return {
            "flat_tol": self.flat_tol,
            "equality_tol": self.equality_tol,
            "step": self.step,
            "max_steps": self.max_steps,
            "match_tol": self.match_tol,
            "line_tol": self.line_tol,
            "grid": self.grid,
            "seed": self.seed,
        }


def log_level_from_env(default: str = "WARNING") -> str:
    return os.getenv(f"{ENV_PREFIX}LOG_LEVEL", default).upper()


class ProjectPaths:
    """Centralized path management"""

    def __init__(self, project_root: Optional[Path] = None):
        # Auto-detect project root from current file location
        if project_root is None:
            project_root = Path(__file__).resolve().parent.parent

        self.root = Path(project_root)
        self.output = self.root / "output"

    def report_path(self, out_dir: Optional[Path], command: str) -> Path:
        """Report file for a command inside out_dir (default output/)"""
        base = Path(out_dir) if out_dir is not None else self.output
        return base / f"{command}_report.json"

    def trace_path(self, out_dir: Optional[Path], command: str) -> Path:
        base = Path(out_dir) if out_dir is not None else self.output
        return base / f"{command}_trace.csv"

    def developed_path(self, out_dir: Optional[Path]) -> Path:
        base = Path(out_dir) if out_dir is not None else self.output
        return base / "develop_points.csv"


PATHS = ProjectPaths()
