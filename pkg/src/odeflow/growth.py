"""Classificação do crescimento de |u|: exponencial (em r) ou lei de potência (em ln r)."""

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy import stats

from .integrator import IntegrationError, Trajectory

MIN_SAMPLES = 8
# Alcance mínimo: 10 unidades de comprimento (lado do infinito) ou 3 décadas (lado de 0)
MIN_LENGTH_SPAN = 10.0
MIN_DECADES = 3.0
# Resíduos com diferença relativa menor que isso não decidem o modelo
RESIDUAL_SEPARATION = 0.10


class DegenerateSamplesError(IntegrationError):
    code = "DEGENERATE_SAMPLES"


class Growth(Enum):
    GROWING = "GROWING"
    DECAYING = "DECAYING"
    POWER_LAW = "POWER_LAW"
    UNRESOLVED = "UNRESOLVED"


@dataclass(frozen=True)
class GrowthReport:
    """Modelo escolhido e as taxas ajustadas dos dois modelos."""
    growth: Growth
    rate: float
    exponential_rate: float
    power_exponent: float
    exponential_residual: float
    power_residual: float


@dataclass(frozen=True)
class LineFit:
    slope: float
    intercept: float
    residual: float


def fit_line(x: np.ndarray, y: np.ndarray) -> LineFit:
    """Mínimos quadrados y ~ slope x + intercept com resíduo RMS por amostra."""
    result = stats.linregress(x, y)
    predicted = result.intercept + result.slope * x
    residual = float(np.sqrt(np.mean((y - predicted) ** 2)))
    return LineFit(float(result.slope), float(result.intercept), residual)


def classify_growth(r: np.ndarray, log_abs: np.ndarray) -> GrowthReport:
    """Compara ln|u| ~ k r com ln|u| ~ mu ln r e fica com o menor resíduo."""
    r = np.asarray(r, dtype=float)
    log_abs = np.asarray(log_abs, dtype=float)
    if len(r) < MIN_SAMPLES:
        raise DegenerateSamplesError(f"apenas {len(r)} amostras (mínimo {MIN_SAMPLES})")
    if np.any(r <= 0) or not np.all(np.isfinite(log_abs)):
        raise DegenerateSamplesError("amostras com r <= 0 ou |u| nulo/infinito")
    span = float(r.max() - r.min())
    decades = math.log10(r.max() / r.min())
    if span < MIN_LENGTH_SPAN and decades < MIN_DECADES - 1e-9:
        raise DegenerateSamplesError(
            f"alcance insuficiente: {span:.3g} unidades, {decades:.3g} décadas"
        )

    exponential = fit_line(r, log_abs)
    power = fit_line(np.log(r), log_abs)

    worst = max(exponential.residual, power.residual)
    if abs(exponential.residual - power.residual) < RESIDUAL_SEPARATION * worst or worst == 0.0:
        growth, rate = Growth.UNRESOLVED, exponential.slope
    elif exponential.residual < power.residual:
        rate = exponential.slope
        growth = Growth.GROWING if rate > 0 else Growth.DECAYING
    else:
        growth, rate = Growth.POWER_LAW, power.slope

    return GrowthReport(growth, rate, exponential.slope, power.slope,
                        exponential.residual, power.residual)


def growth_monitor(traj: Trajectory) -> GrowthReport:
    """Classifica uma trajetória como GROWING, DECAYING, POWER_LAW ou UNRESOLVED."""
    return classify_growth(traj.r, traj.log_abs_u())
