"""Cálculo fechado dos índices de deficiência por harmônico, por singularidade e total."""

from .harmonics import (
    INTEGER_FLUX_TOL,
    classify_harmonic,
    contributing_harmonics,
    effective_flux,
    harmonic_window,
    radial_coupling,
    reduced_flux,
)
from .deficiency import (
    DeficiencyReport,
    HarmonicCoupling,
    SingularityClass,
    SingularityDeficiency,
    class_counts,
    closed_form_total,
    nearest_couplings,
    singularity_class,
    singularity_index,
    total_index,
)

__all__ = [
    'INTEGER_FLUX_TOL', 'classify_harmonic', 'contributing_harmonics', 'effective_flux',
    'harmonic_window', 'radial_coupling', 'reduced_flux',
    'DeficiencyReport', 'HarmonicCoupling', 'SingularityClass', 'SingularityDeficiency',
    'class_counts', 'closed_form_total', 'nearest_couplings', 'singularity_class',
    'singularity_index', 'total_index',
]
