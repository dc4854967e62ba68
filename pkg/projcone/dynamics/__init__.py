"""
Geodesic flows, horizontal transport and the developing map
"""

from .devmap import (
    LineCertificate,
    ProjPoint,
    TransportFrame,
    develop,
    develop_trace,
    horizontal_transport,
    line_certificate,
    loop_holonomy,
)
from .geoflow import (
    GeodesicTrace,
    MatchReport,
    collinearity_residual,
    compare_unparametrized,
    geodesic_classical,
    geodesic_rho,
)

__all__ = [
    'LineCertificate',
    'ProjPoint',
    'TransportFrame',
    'develop',
    'develop_trace',
    'horizontal_transport',
    'line_certificate',
    'loop_holonomy',
    'GeodesicTrace',
    'MatchReport',
    'collinearity_residual',
    'compare_unparametrized',
    'geodesic_classical',
    'geodesic_rho',
]
