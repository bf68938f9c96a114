"""Alternativa de Weyl nos extremos 0 e infinito do operador radial."""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.special import logsumexp

from ..odeflow import (
    Growth,
    IntegrationError,
    Trajectory,
    classify_growth,
    integrate,
    log_transform_integrate,
    wronskian_drift,
)
from ..settings import OracleSettings
from .frobenius import (
    RadialProblem,
    SeriesNotConvergedError,
    fit_power_law,
    frobenius_exponents,
    seed_solution_near_zero,
)

logger = logging.getLogger(__name__)

# Limiar de integrabilidade quadrática de r^mu perto de 0
L2_EXPONENT_THRESHOLD = -0.5
# Duas soluções independentes em r_mid: (u, u') = (1, 0) e (0, 1)
BASIS = ((1.0 + 0j, 0j), (0j, 1.0 + 0j))
# Início do trecho de ajuste no infinito, em unidades de max(nu, |q|) / sqrt(|lambda|)
WEAK_POTENTIAL_FACTOR = 3.0


class Endpoint(Enum):
    ZERO = "ZERO"
    INFINITY = "INFINITY"


class Verdict(Enum):
    LIMIT_POINT = "LIMIT_POINT"
    LIMIT_CIRCLE = "LIMIT_CIRCLE"
    INCONCLUSIVE = "INCONCLUSIVE"


@dataclass(frozen=True)
class EndpointReport:
    """Veredito em um extremo: número de soluções L² (1 ou 2) ou inconclusivo."""
    endpoint: Endpoint
    verdict: Verdict
    l2_count: Optional[int] = None
    reason: Optional[str] = None
    evidence: Dict[str, Any] = field(default_factory=dict, compare=False)
    trajectories: Tuple[Trajectory, ...] = field(default=(), compare=False, repr=False)

    @classmethod
    def counted(cls, endpoint: Endpoint, l2_count: int, evidence: Dict[str, Any],
                trajectories: Sequence[Trajectory] = ()) -> "EndpointReport":
        verdict = Verdict.LIMIT_CIRCLE if l2_count == 2 else Verdict.LIMIT_POINT
        return cls(endpoint, verdict, l2_count, None, evidence, tuple(trajectories))

    @classmethod
    def inconclusive(cls, endpoint: Endpoint, reason: str, evidence: Dict[str, Any],
                     trajectories: Sequence[Trajectory] = ()) -> "EndpointReport":
        return cls(endpoint, Verdict.INCONCLUSIVE, None, reason, evidence, tuple(trajectories))

    @property
    def is_conclusive(self) -> bool:
        return self.verdict is not Verdict.INCONCLUSIVE

    def to_dict(self) -> Dict[str, Any]:
        return {
            "endpoint": self.endpoint.value,
            "verdict": self.verdict.value,
            "l2_count": self.l2_count,
            "reason": self.reason,
            "evidence": self.evidence,
        }


def _require_nonreal(problem: RadialProblem) -> None:
    if complex(problem.lam).imag == 0:
        raise ValueError("a contagem de deficiência exige lambda não real (±i)")


def _decade_ratio(r: np.ndarray, log_abs: np.ndarray) -> float:
    """Razão entre ∫|u|² dr na década mais interna e na seguinte.

    Para |u| ~ r^mu a razão é 10^-(2 mu + 1): menor que 1 exatamente quando as
    integrais parciais convergem com epsilon -> 0.
    """
    order = np.argsort(r)
    r, log_abs = r[order], log_abs[order]
    integrand = 2.0 * log_abs + np.log(r)  # |u|² dr = |u|² r dt
    edges = r[0] * np.array([1.0, 10.0, 100.0])

    def decade(low, high):
        mask = (r >= low * (1 - 1e-9)) & (r <= high * (1 + 1e-9))
        weights = np.ones(int(mask.sum()))
        weights[0] = weights[-1] = 0.5
        return logsumexp(integrand[mask], b=weights)

    return float(math.exp(decade(edges[0], edges[1]) - decade(edges[1], edges[2])))


def _solution_votes(traj: Trajectory, settings: OracleSettings) -> Dict[str, Any]:
    window = traj.r <= settings.fit_r_max * (1 + 1e-9)
    log_abs = traj.log_abs_u()
    mu_hat, residual = fit_power_law(traj.r[window], log_abs[window])
    ratio = _decade_ratio(traj.r[window], log_abs[window])

    margin = settings.exponent_margin
    if mu_hat > L2_EXPONENT_THRESHOLD + margin:
        exponent_vote = True
    elif mu_hat < L2_EXPONENT_THRESHOLD - margin:
        exponent_vote = False
    else:
        exponent_vote = None
    integral_vote = ratio < 1.0

    if exponent_vote is None:
        l2, reason = None, "exponent-band"
    elif exponent_vote != integral_vote:
        l2, reason = None, "vote-conflict"
    else:
        l2, reason = exponent_vote, None
    return {
        "mu_hat": mu_hat,
        "residual": residual,
        "decade_ratio": ratio,
        "exponent_vote": exponent_vote,
        "integral_vote": integral_vote,
        "l2": l2,
        "reason": reason,
        "renormalizations": len(traj.ledger),
    }


def count_l2_solutions_at_zero(problem: RadialProblem, settings: OracleSettings = OracleSettings()) -> EndpointReport:
    """Conta as soluções de h u = lambda u quadrado-integráveis perto de r = 0.

    Duas soluções independentes são integradas de r_mid até r_min em t = ln r. A
    solução genérica segue o menor expoente de Frobenius; ela é L² sse o expoente
    estimado passa de -1/2 e as integrais parciais de |u|² convergem. A solução
    do expoente maior (>= 1/2) é sempre L², logo a contagem é 2 ou 1.
    """
    _require_nonreal(problem)
    mu_plus, mu_minus, log_case = frobenius_exponents(problem.nu_squared)
    evidence: Dict[str, Any] = {"exponents": [mu_plus, mu_minus], "log_case": log_case}
    if log_case:
        # r^{1/2} e r^{1/2} ln r são ambas L² em (0, 1)
        return EndpointReport.counted(Endpoint.ZERO, 2, evidence)
    if problem.nu_squared == 1.0:
        # expoente menor exatamente -1/2: ∫ r^-1 dr diverge
        return EndpointReport.counted(Endpoint.ZERO, 1, evidence)

    ode = problem.to_ode()
    trajectories = []
    try:
        for state in BASIS:
            trajectories.append(log_transform_integrate(
                ode, settings.r_mid, state, settings.r_min, settings.rel_tol,
                settings.samples_per_decade,
            ))
        recessive = _recessive_exponent(problem, mu_plus, settings)
        votes = [_solution_votes(traj, settings) for traj in trajectories]
    except (IntegrationError, SeriesNotConvergedError) as e:
        logger.warning("integração perto de 0 falhou para nu² = %s: %s", problem.nu_squared, e)
        evidence["error"] = getattr(e, "code", "INTEGRATION_FAILURE")
        return EndpointReport.inconclusive(Endpoint.ZERO, "integration-failure", evidence, trajectories)

    evidence["solutions"] = votes
    evidence["recessive_mu_hat"] = recessive
    evidence["wronskian_initial"] = abs(BASIS[0][0] * BASIS[1][1] - BASIS[1][0] * BASIS[0][1])
    evidence["wronskian_drift"] = wronskian_drift(*trajectories)

    undecided = [v["reason"] for v in votes if v["l2"] is None]
    if recessive <= L2_EXPONENT_THRESHOLD + settings.exponent_margin:
        undecided.append("seed-mismatch")
    if undecided:
        logger.debug("nu² = %s inconclusivo em 0: %s", problem.nu_squared, undecided)
        return EndpointReport.inconclusive(Endpoint.ZERO, undecided[0], evidence, trajectories)
    count = 2 if all(v["l2"] for v in votes) else 1
    return EndpointReport.counted(Endpoint.ZERO, count, evidence, trajectories)


def _recessive_exponent(problem: RadialProblem, mu_plus: float, settings: OracleSettings) -> float:
    """Expoente medido da solução r^{mu+} semeada pela série em r_min e integrada até fit_r_max."""
    seed = seed_solution_near_zero(problem, mu_plus, settings.r_min, settings.series_tol)
    traj = log_transform_integrate(problem.to_ode(), settings.r_min, seed, settings.fit_r_max,
                                   settings.rel_tol, settings.samples_per_decade)
    mu_hat, _ = fit_power_law(traj.r, traj.log_abs_u())
    return mu_hat


def _log_singular_values(first: Trajectory, second: Trajectory) -> np.ndarray:
    """ln do maior valor singular da matriz fundamental [[u1, u2], [u1', u2']]."""
    top = np.maximum(first.log_scale, second.log_scale)
    f1 = 10.0 ** (first.log_scale - top)
    f2 = 10.0 ** (second.log_scale - top)
    matrix = np.empty((len(first), 2, 2), dtype=complex)
    matrix[:, 0, 0] = first.u * f1
    matrix[:, 1, 0] = first.du * f1
    matrix[:, 0, 1] = second.u * f2
    matrix[:, 1, 1] = second.du * f2
    singular = np.linalg.svd(matrix, compute_uv=False)
    return np.log(singular[:, 0]) + top * math.log(10.0)


def tail_window(problem: RadialProblem, settings: OracleSettings) -> Tuple[float, float]:
    """Trecho [início, fim] onde |V(r)| << |lambda| e o ajuste de crescimento é feito.

    O início afasta o termo (nu² - 1/4)/r² e o de Coulomb; o comprimento do trecho
    é sempre r_max - r_mid, estendendo a integração além de r_max quando preciso.
    """
    reach = max(problem.nu, abs(problem.q)) / math.sqrt(abs(complex(problem.lam)))
    start = max(settings.r_mid, WEAK_POTENTIAL_FACTOR * reach)
    return start, max(settings.r_max, start + settings.r_max - settings.r_mid)


def count_l2_solutions_at_infinity(problem: RadialProblem, settings: OracleSettings = OracleSettings()) -> EndpointReport:
    """Conta as direções que decaem exponencialmente no infinito.

    O produto dos valores singulares da matriz fundamental é o wronskiano, constante;
    se o maior cresce exponencialmente no trecho onde o potencial é desprezível, o
    menor decai, e essa direção é L² no infinito.
    """
    _require_nonreal(problem)
    ode = problem.to_ode()
    tail_start, r_end = tail_window(problem, settings)
    count = int(math.ceil((r_end - settings.r_mid) * settings.samples_per_unit)) + 1
    samples = np.linspace(settings.r_mid, r_end, count)
    evidence: Dict[str, Any] = {"tail": [tail_start, r_end]}
    try:
        first, second = [integrate(ode, settings.r_mid, state, r_end, settings.rel_tol, samples)
                         for state in BASIS]
    except IntegrationError as e:
        logger.warning("integração até o infinito falhou para nu² = %s: %s", problem.nu_squared, e)
        evidence["error"] = getattr(e, "code", "INTEGRATION_FAILURE")
        return EndpointReport.inconclusive(Endpoint.INFINITY, "integration-failure", evidence)

    w0 = abs(BASIS[0][0] * BASIS[1][1] - BASIS[1][0] * BASIS[0][1])
    tail = first.r >= tail_start * (1 - 1e-12)
    log_largest = _log_singular_values(first, second)[tail]
    log_smallest = math.log(w0) - log_largest
    try:
        largest = classify_growth(first.r[tail], log_largest)
        directions: List[Growth] = [largest.growth, classify_growth(first.r[tail], log_smallest).growth]
    except IntegrationError as e:
        evidence["error"] = getattr(e, "code", "INTEGRATION_FAILURE")
        return EndpointReport.inconclusive(Endpoint.INFINITY, "growth-unresolved", evidence, (first, second))

    renormalizations = len(first.ledger) + len(second.ledger)
    if renormalizations:
        logger.debug("nu² = %s: %d renormalizações no lado do infinito", problem.nu_squared, renormalizations)
    evidence.update({
        "directions": [d.value for d in directions],
        "growth_rate": largest.exponential_rate,
        "wronskian_initial": w0,
        "wronskian_drift": wronskian_drift(first, second),
        "renormalizations": renormalizations,
    })

    if largest.growth is Growth.UNRESOLVED:
        return EndpointReport.inconclusive(Endpoint.INFINITY, "growth-unresolved", evidence, (first, second))
    # o menor valor singular só decai se o maior crescer
    if largest.growth is not Growth.GROWING:
        return EndpointReport.inconclusive(Endpoint.INFINITY, "no-decaying-direction", evidence, (first, second))
    return EndpointReport.counted(Endpoint.INFINITY, 1, evidence, (first, second))
