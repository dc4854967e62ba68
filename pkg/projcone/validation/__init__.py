# Validation package: cone connection conformance checks
from .theorem_validator import TheoremValidator, verify_theorem

__all__ = [
    'TheoremValidator',
    'verify_theorem'
]
