"""
Projective invariants and flatness classification
"""

from .invariants import (
    FLAT,
    NON_FLAT,
    InvariantField,
    InvariantReport,
    classify,
    cotton_york,
    projective_invariants,
    weyl,
    weyl_trace_defect,
)

__all__ = [
    'FLAT',
    'NON_FLAT',
    'InvariantField',
    'InvariantReport',
    'classify',
    'cotton_york',
    'projective_invariants',
    'weyl',
    'weyl_trace_defect',
]
