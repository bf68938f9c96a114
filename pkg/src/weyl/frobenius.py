"""Operador radial h = -d²/dr² + (nu² - 1/4)/r² + q/r e suas séries de Frobenius em r = 0."""

import math
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from ..odeflow import DegenerateSamplesError, LinearODE, fit_line

# Limite de cancelamento: maior termo da série / soma
CANCELLATION_LIMIT = 1e6
MAX_TERMS = 60
MIN_EXPONENT_SAMPLES = 8
MIN_EXPONENT_DECADES = 3.0


class SeriesNotConvergedError(ArithmeticError):
    code = "SERIES_NOT_CONVERGED"


@dataclass(frozen=True)
class RadialProblem:
    """Problema h u = lambda u de um harmônico angular.

    Attributes:
        nu_squared: (l + alpha)² + p.
        q: intensidade de Coulomb.
        lam: parâmetro espectral; ±i na contagem de deficiência.
    """

    nu_squared: float
    q: float = 0.0
    lam: complex = 1j

    @property
    def nu(self) -> float:
        return math.sqrt(self.nu_squared)

    @property
    def lambda_label(self) -> str:
        if self.lam == 1j:
            return "+i"
        if self.lam == -1j:
            return "-i"
        return str(self.lam)

    def to_ode(self) -> LinearODE:
        """u'' = (V(r) - lambda) u."""
        a, q, lam = self.nu_squared - 0.25, self.q, complex(self.lam)

        def coefficient(r):
            return a / (r * r) + q / r - lam

        return LinearODE(coefficient, (0.0, math.inf), inverse_square=a)


def frobenius_exponents(nu_squared: float) -> Tuple[float, float, bool]:
    """Raízes de mu(mu - 1) = nu² - 1/4: (1/2 + nu, 1/2 - nu, raiz dupla)."""
    nu = math.sqrt(nu_squared)
    return 0.5 + nu, 0.5 - nu, nu_squared == 0


def _coefficients(problem: RadialProblem, mu: float, count: int) -> List[complex]:
    # c_k k (2 mu + k - 1) = q c_{k-1} - lambda c_{k-2}
    c = [1.0 + 0j]
    for k in range(1, count):
        numerator = problem.q * c[k - 1] - (problem.lam * c[k - 2] if k >= 2 else 0)
        denominator = k * (2 * mu + k - 1)
        if abs(denominator) < 1e-12:
            if numerator != 0:
                raise SeriesNotConvergedError(
                    f"expoentes diferem pelo inteiro {k}: a série exige termo logarítmico"
                )
            c.append(0j)
        else:
            c.append(numerator / denominator)
    return c


def _log_coefficients(problem: RadialProblem, mu: float, c: Sequence[complex]) -> List[complex]:
    # d_k k (2 mu + k - 1) = q d_{k-1} - lambda d_{k-2} - (2 mu + 2k - 1) c_k, d_0 = 0
    d = [0j]
    for k in range(1, len(c)):
        numerator = (problem.q * d[k - 1] - (problem.lam * d[k - 2] if k >= 2 else 0)
                     - (2 * mu + 2 * k - 1) * c[k])
        d.append(numerator / (k * (2 * mu + k - 1)))
    return d


def _sum_series(coefficients: Sequence[complex], mu: float, r0: float, tol: float) -> Tuple[complex, complex]:
    value = derivative = 0j
    largest = 0.0
    previous = math.inf
    for k, ck in enumerate(coefficients):
        term = ck * r0 ** k
        value += term
        derivative += ck * (mu + k) * r0 ** k
        largest = max(largest, abs(term))
        if k >= 2 and abs(term) + previous <= tol * abs(value):
            if largest > CANCELLATION_LIMIT * abs(value):
                raise SeriesNotConvergedError(f"cancelamento catastrófico em r0 = {r0}")
            return value, derivative
        previous = abs(term)
    raise SeriesNotConvergedError(f"série não convergiu em {len(coefficients)} termos para r0 = {r0}")


def seed_solution_near_zero(problem: RadialProblem, mu: float, r0: float, tol: float = 1e-10,
                            log_branch: bool = False) -> Tuple[complex, complex]:
    """(u(r0), u'(r0)) da solução r^mu (1 + c1 r + c2 r² + ...).

    Com `log_branch` (apenas no caso de raiz dupla mu = 1/2) devolve a segunda
    solução u1 ln r + r^mu (d1 r + d2 r² + ...).

    Raises:
        ValueError: mu não é expoente de Frobenius do problema.
        SeriesNotConvergedError: r0 grande demais para a tolerância ou ressonância.
    """
    a = problem.nu_squared - 0.25
    if abs(mu * (mu - 1) - a) > 1e-9 * max(1.0, abs(a)):
        raise ValueError(f"mu = {mu} não satisfaz mu(mu - 1) = {a}")
    if r0 <= 0:
        raise ValueError("r0 deve ser positivo")

    c = _coefficients(problem, mu, MAX_TERMS)
    s, ds = _sum_series(c, mu, r0, tol)
    u, du = r0 ** mu * s, r0 ** (mu - 1) * ds
    if not log_branch:
        return u, du

    if not frobenius_exponents(problem.nu_squared)[2]:
        raise ValueError("o ramo logarítmico só existe para nu² = 0")
    d = _log_coefficients(problem, mu, c)
    w, dw = _sum_series(d, mu, r0, tol) if any(d) else (0j, 0j)
    log_r = math.log(r0)
    return u * log_r + r0 ** mu * w, du * log_r + u / r0 + r0 ** (mu - 1) * dw


def fit_power_law(r: np.ndarray, log_abs: np.ndarray) -> Tuple[float, float]:
    """Inclinação de ln|u| contra ln r e resíduo RMS (amostras com >= 3 décadas)."""
    r = np.asarray(r, dtype=float)
    log_abs = np.asarray(log_abs, dtype=float)
    if len(r) < MIN_EXPONENT_SAMPLES:
        raise DegenerateSamplesError(f"apenas {len(r)} amostras para a regressão")
    if np.any(r <= 0) or not np.all(np.isfinite(log_abs)):
        raise DegenerateSamplesError("amostras com r <= 0 ou |u| nulo")
    if math.log10(r.max() / r.min()) < MIN_EXPONENT_DECADES - 1e-9:
        raise DegenerateSamplesError("a regressão exige ao menos 3 décadas em r")
    fit = fit_line(np.log(r), log_abs)
    return fit.slope, fit.residual


def estimate_exponent(samples: Sequence[Tuple[float, float]]) -> Tuple[float, float]:
    """Expoente mu_hat de |u| ~ r^mu a partir de pares (r, |u|)."""
    data = np.asarray(samples, dtype=float)
    if data.ndim != 2 or data.shape[0] < MIN_EXPONENT_SAMPLES:
        raise DegenerateSamplesError("amostras insuficientes para a regressão")
    if np.any(data[:, 1] <= 0):
        raise DegenerateSamplesError("|u| deve ser positivo")
    return fit_power_law(data[:, 0], np.log(data[:, 1]))
