"""Motor de integração de EDOs lineares complexas de segunda ordem."""

from .integrator import (
    RENORMALIZATION_THRESHOLD,
    DomainViolationError,
    IntegrationError,
    LinearODE,
    StepCollapseError,
    Trajectory,
    integrate,
    log_transform_integrate,
    wronskian,
    wronskian_drift,
)
from .growth import (
    DegenerateSamplesError,
    Growth,
    GrowthReport,
    LineFit,
    classify_growth,
    fit_line,
    growth_monitor,
)

__all__ = [
    'RENORMALIZATION_THRESHOLD', 'DomainViolationError', 'IntegrationError', 'LinearODE',
    'StepCollapseError', 'Trajectory', 'integrate', 'log_transform_integrate', 'wronskian',
    'wronskian_drift', 'DegenerateSamplesError', 'Growth', 'GrowthReport', 'LineFit',
    'classify_growth', 'fit_line', 'growth_monitor',
]
