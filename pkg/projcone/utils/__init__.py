"""
Utility modules for projcone
"""

# Utils package init
from .common import load_env_file, sample_grid, setup_logging
from .report_io import dump_report, read_points_csv, write_trace_csv

__all__ = [
    'load_env_file',
    'sample_grid',
    'setup_logging',
    'dump_report',
    'read_points_csv',
    'write_trace_csv',
]
