"""Interface de linha de comando (`python -m src.cli`)."""

from .commands import (
    EXIT_DISAGREEMENT,
    EXIT_IO,
    EXIT_OK,
    EXIT_VALIDATION,
    build_parser,
    main,
    run_classify,
    run_grid,
    run_verify,
)
from .grid import GRID_HEADER, GridRow, evaluate_grid_point, ordered_map
from .runspec import RunSpec, RunSpecError, axis_from_range, run_spec_from_args

__all__ = [
    'EXIT_DISAGREEMENT', 'EXIT_IO', 'EXIT_OK', 'EXIT_VALIDATION', 'build_parser', 'main',
    'run_classify', 'run_grid', 'run_verify', 'GRID_HEADER', 'GridRow', 'evaluate_grid_point',
    'ordered_map', 'RunSpec', 'RunSpecError', 'axis_from_range', 'run_spec_from_args',
]
