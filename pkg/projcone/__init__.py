"""
projcone - Source Package
Thomas cone connections of projective structures: invariants, geodesics and developing maps
"""

# Main package exports for convenient access
from .algebra import PolyField
from .analysis import classify, projective_invariants
from .config import RunConfig
from .data import parse_connection, serialize_connection
from .dynamics import develop, geodesic_classical, geodesic_rho, line_certificate, loop_holonomy
from .geometry import ChartConnection, OneFormField, build_cone, projective_shift, thomas_symbols
from .pipeline import CommandRunner, run_command
from .validation import verify_theorem

__version__ = "1.0.0"

__all__ = [
    'PolyField',
    'ChartConnection',
    'OneFormField',
    'projective_shift',
    'thomas_symbols',
    'build_cone',
    'projective_invariants',
    'classify',
    'verify_theorem',
    'geodesic_classical',
    'geodesic_rho',
    'loop_holonomy',
    'develop',
    'line_certificate',
    'parse_connection',
    'serialize_connection',
    'RunConfig',
    'CommandRunner',
    'run_command',
    '__version__'
]
