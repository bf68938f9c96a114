"""Tipos de domínio para configurações de fluxos e validação das hipóteses."""

from .singularity import Singularity
from .configuration import (
    INFINITE,
    Configuration,
    ConfigurationError,
    ValidationReport,
    Violation,
    build_configuration,
    cutoff_feasibility,
    load_configuration,
    min_separation,
    serialize_index,
    validate_configuration,
)

__all__ = [
    'Singularity', 'Configuration', 'ConfigurationError', 'ValidationReport', 'Violation',
    'INFINITE', 'build_configuration', 'cutoff_feasibility', 'load_configuration',
    'min_separation', 'serialize_index', 'validate_configuration',
]
