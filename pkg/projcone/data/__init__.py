# Data package init
from .connection_loader import (
    BUILTINS,
    ConnectionSpec,
    build_builtin,
    load_builtin,
    load_connection,
    parse_builtin_spec,
    parse_connection,
    parse_one_form,
    serialize_connection,
)

__all__ = [
    'BUILTINS',
    'ConnectionSpec',
    'build_builtin',
    'load_builtin',
    'load_connection',
    'parse_builtin_spec',
    'parse_connection',
    'parse_one_form',
    'serialize_connection',
]
