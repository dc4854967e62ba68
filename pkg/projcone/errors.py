"""
Exception hierarchy for projcone.

Input problems (bad documents, out-of-range arguments, points outside the chart)
derive from ``InputError`` and map to exit status 2; semantic negatives that the
caller may legitimately expect (a non-flat structure refusing to develop) map to 1.
"""

from typing import Optional, Sequence


class ProjconeError(Exception):
    """Base class for all projcone errors."""


class InputError(ProjconeError, ValueError):
    """Invalid input: dimension mismatch, bad index, point outside the domain, ..."""


class ParseError(InputError):
    """Malformed connection document; ``pointer`` is a JSON pointer to the culprit."""

    def __init__(self, message: str, pointer: str = ""):
        self.pointer = pointer or "/"
        super().__init__(f"{message} (at {self.pointer})")


class ConfigError(InputError):
    """Invalid run configuration value."""


class ContractViolation(ProjconeError):
    """An operation was handed data that breaks its documented precondition."""


class NotFlatError(ProjconeError):
    """Raised when an operation that needs a flat cone is given a curved one."""

    def __init__(self, magnitude: float, point: Sequence[float], component: str,
                 message: Optional[str] = None):
        self.magnitude = float(magnitude)
        self.point = [float(v) for v in point]
        self.component = component
        if message is None:
            coords = ", ".join(f"{v:.6g}" for v in self.point)
            message = (
                f"structure is not projectively flat: |{component}| = "
                f"{self.magnitude:.6g} at ({coords})"
            )
        super().__init__(message)
