# Geometry package: chart connections and the Thomas cone
from .chartconn import (
    CURVATURE_CONVENTION,
    ChartConnection,
    CurvatureField,
    NotEquivalent,
    OneFormField,
    extract_alpha,
    first_bianchi_residual,
    projective_shift,
    ricci_asymmetry,
    riemann,
    shift_form_defect,
    symmetrize,
    thomas_symbols,
    trace_defect,
)
from .thomascone import (
    ConeConnection,
    ConeCurvature,
    build_cone,
    cone_curvature,
    cone_max_curvature,
    cone_ricci,
    cone_torsion_residual,
    descend,
)

__all__ = [
    'CURVATURE_CONVENTION',
    'ChartConnection',
    'CurvatureField',
    'NotEquivalent',
    'OneFormField',
    'extract_alpha',
    'first_bianchi_residual',
    'projective_shift',
    'ricci_asymmetry',
    'riemann',
    'shift_form_defect',
    'symmetrize',
    'thomas_symbols',
    'trace_defect',
    'ConeConnection',
    'ConeCurvature',
    'build_cone',
    'cone_curvature',
    'cone_max_curvature',
    'cone_ricci',
    'cone_torsion_residual',
    'descend',
]
