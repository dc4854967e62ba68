# Algebra package: exact polynomial substrate
from .polyfields import (
    PolyField,
    FieldArrayEvaluator,
    poly_sum,
    zero_array,
    grid_max_abs,
)

__all__ = [
    'PolyField',
    'FieldArrayEvaluator',
    'poly_sum',
    'zero_array',
    'grid_max_abs',
]
