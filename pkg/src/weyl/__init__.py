"""Oráculo de Weyl: contagem de soluções L² nos extremos do operador radial."""

from .frobenius import (
    RadialProblem,
    SeriesNotConvergedError,
    estimate_exponent,
    fit_power_law,
    frobenius_exponents,
    seed_solution_near_zero,
)
from .endpoints import (
    Endpoint,
    EndpointReport,
    Verdict,
    count_l2_solutions_at_infinity,
    count_l2_solutions_at_zero,
)
from .oracle import (
    INCONCLUSIVE,
    LAMBDAS,
    NOT_RUN,
    HarmonicVerdict,
    OracleResult,
    VerificationResult,
    WeylOracle,
)

__all__ = [
    'RadialProblem', 'SeriesNotConvergedError', 'estimate_exponent', 'fit_power_law',
    'frobenius_exponents', 'seed_solution_near_zero',
    'Endpoint', 'EndpointReport', 'Verdict', 'count_l2_solutions_at_infinity',
    'count_l2_solutions_at_zero',
    'INCONCLUSIVE', 'LAMBDAS', 'NOT_RUN', 'HarmonicVerdict', 'OracleResult',
    'VerificationResult', 'WeylOracle',
]
