# CLI package init
from .arguments import (
    create_projcone_parser,
    add_connection_arguments,
    add_tolerance_arguments,
    add_launch_arguments,
    add_common_arguments
)
from .main import main

__all__ = [
    'create_projcone_parser',
    'add_connection_arguments',
    'add_tolerance_arguments',
    'add_launch_arguments',
    'add_common_arguments',
    'main'
]
