"""Oráculo numérico: recalcula o índice de deficiência de cada harmônico pela alternativa de Weyl."""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Tuple, Union

from ..calculus import effective_flux, harmonic_window, radial_coupling, singularity_index
from ..model import Singularity
from ..settings import OracleSettings
from .endpoints import (
    EndpointReport,
    count_l2_solutions_at_infinity,
    count_l2_solutions_at_zero,
)
from .frobenius import RadialProblem

logger = logging.getLogger(__name__)

INCONCLUSIVE = "inconclusive"
NOT_RUN = "not_run"
BOUNDARY_BAND = "boundary-band"
LAMBDAS = {"+i": 1j, "-i": -1j}


@dataclass(frozen=True)
class HarmonicVerdict:
    """Resultado do oráculo para um harmônico l.

    Attributes:
        ell: número do harmônico angular.
        nu_squared: acoplamento (l + alpha)² + p.
        m0: soluções L² perto de 0 (None se inconclusivo).
        minf: soluções L² perto do infinito (None se inconclusivo).
        index: m0 + minf - 2, ou None.
        reason: motivo da inconclusão ("boundary-band", "vote-conflict", ...).
    """

    ell: int
    nu_squared: float
    m0: Optional[int] = None
    minf: Optional[int] = None
    index: Optional[int] = None
    reason: Optional[str] = None
    endpoints: Tuple[EndpointReport, ...] = field(default=(), compare=False, repr=False)

    @property
    def is_inconclusive(self) -> bool:
        return self.index is None

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {"ell": self.ell, "nu_squared": self.nu_squared,
                                "m0": self.m0, "minf": self.minf}
        if self.is_inconclusive:
            data[INCONCLUSIVE] = self.reason
        else:
            data["index"] = self.index
        return data


@dataclass(frozen=True)
class OracleResult:
    """Índice numérico de uma singularidade para um valor de lambda."""

    singularity_id: str
    lambda_label: str
    harmonics: Tuple[HarmonicVerdict, ...]
    closed_form: Optional[int] = None

    @property
    def total(self) -> Optional[int]:
        if any(h.is_inconclusive for h in self.harmonics):
            return None
        return sum(h.index for h in self.harmonics)

    @property
    def agreement(self) -> Union[bool, str]:
        if self.closed_form is None or self.total is None:
            return NOT_RUN
        return self.total == self.closed_form

    @property
    def boundary_only(self) -> bool:
        """True quando há inconclusões e todas vêm da faixa de fronteira."""
        reasons = [h.reason for h in self.harmonics if h.is_inconclusive]
        return bool(reasons) and all(r == BOUNDARY_BAND for r in reasons)

    @property
    def indices(self) -> List[Optional[int]]:
        return [h.index for h in self.harmonics]

    @property
    def max_wronskian_drift(self) -> float:
        """Maior desvio relativo do wronskiano entre todas as integrações feitas."""
        drifts = [e.evidence["wronskian_drift"] for h in self.harmonics for e in h.endpoints
                  if "wronskian_drift" in e.evidence]
        return max(drifts, default=0.0)

    def to_dict(self) -> Dict[str, Any]:
        total = self.total
        return {
            "id": self.singularity_id,
            "lambda": self.lambda_label,
            "harmonics": [h.to_dict() for h in self.harmonics],
            "total": INCONCLUSIVE if total is None else total,
            "agreement": self.agreement,
            "closed_form": self.closed_form,
            "boundary_only": self.boundary_only,
        }


@dataclass(frozen=True)
class VerificationResult:
    """Execuções do oráculo com lambda = +i e -i para a mesma singularidade."""

    plus: OracleResult
    minus: OracleResult

    @property
    def singularity_id(self) -> str:
        return self.plus.singularity_id

    @property
    def conjugation_symmetric(self) -> bool:
        return self.plus.indices == self.minus.indices

    @property
    def status(self) -> str:
        """Status agregado: agree, disagree, boundary-inconclusive ou inconclusive."""
        results = (self.plus, self.minus)
        decided = all(r.total is not None for r in results)
        if any(r.agreement is False for r in results) or (decided and not self.conjugation_symmetric):
            return "disagree"
        if all(r.agreement is True for r in results):
            return "agree"
        if all(r.boundary_only for r in results if r.total is None):
            return "boundary-inconclusive"
        return INCONCLUSIVE

    def to_dict(self) -> Dict[str, Any]:
        return {
            "id": self.singularity_id,
            "status": self.status,
            "conjugation_symmetric": self.conjugation_symmetric,
            "results": [self.plus.to_dict(), self.minus.to_dict()],
        }


class WeylOracle:
    """Conta soluções L² nos extremos do operador radial de cada harmônico.

    Args:
        settings: parâmetros numéricos (raios, tolerâncias, faixa de fronteira).
        dump_dir: se informado, grava as trajetórias de cada extremo em CSV.
    """

    def __init__(self, settings: Optional[OracleSettings] = None,
                 dump_dir: Optional[Union[str, Path]] = None):
        self.settings = settings or OracleSettings()
        self.dump_dir = Path(dump_dir) if dump_dir is not None else None

    def count_l2_solutions_at_zero(self, problem: RadialProblem) -> EndpointReport:
        return count_l2_solutions_at_zero(problem, self.settings)

    def count_l2_solutions_at_infinity(self, problem: RadialProblem) -> EndpointReport:
        return count_l2_solutions_at_infinity(problem, self.settings)

    def in_boundary_band(self, nu_squared: float) -> bool:
        """Perto de nu² = 1 sem ser exatamente 1 (caso resolvido analiticamente)."""
        return nu_squared != 1.0 and abs(nu_squared - 1.0) < self.settings.boundary_band

    def evaluate_harmonic(self, problem: RadialProblem, ell: int = 0) -> HarmonicVerdict:
        """Veredito completo (m0, minf, índice ou motivo) de um problema radial."""
        if self.in_boundary_band(problem.nu_squared):
            logger.debug("l = %d, nu² = %s na faixa de fronteira", ell, problem.nu_squared)
            return HarmonicVerdict(ell, problem.nu_squared, reason=BOUNDARY_BAND)

        zero = self.count_l2_solutions_at_zero(problem)
        infinity = self.count_l2_solutions_at_infinity(problem)
        endpoints = (zero, infinity)
        if not zero.is_conclusive or not infinity.is_conclusive:
            reason = zero.reason if not zero.is_conclusive else infinity.reason
            logger.warning("l = %d, nu² = %s, lambda = %s inconclusivo: %s",
                           ell, problem.nu_squared, problem.lambda_label, reason)
            return HarmonicVerdict(ell, problem.nu_squared, zero.l2_count, infinity.l2_count,
                                   reason=reason, endpoints=endpoints)

        index = zero.l2_count + infinity.l2_count - 2
        if index not in (0, 1):
            return HarmonicVerdict(ell, problem.nu_squared, zero.l2_count, infinity.l2_count,
                                   reason="index-out-of-range", endpoints=endpoints)
        return HarmonicVerdict(ell, problem.nu_squared, zero.l2_count, infinity.l2_count,
                               index, endpoints=endpoints)

    def numerical_harmonic_index(self, problem: RadialProblem) -> Union[int, str]:
        """m0 + minf - 2, ou "inconclusive"."""
        verdict = self.evaluate_harmonic(problem)
        return INCONCLUSIVE if verdict.is_inconclusive else verdict.index

    def radial_problems(self, singularity: Singularity, lam: complex = 1j) -> Iterable[Tuple[int, RadialProblem]]:
        alpha = effective_flux(singularity.alpha)
        for ell in harmonic_window(singularity.alpha):
            yield ell, RadialProblem(radial_coupling(ell, alpha, singularity.p), singularity.q, lam)

    def numerical_singularity_index(self, singularity: Singularity, lam: complex = 1j,
                                    compare: bool = True) -> OracleResult:
        """Soma os índices numéricos sobre a mesma janela de harmônicos do cálculo fechado."""
        verdicts = []
        for ell, problem in self.radial_problems(singularity, lam):
            verdict = self.evaluate_harmonic(problem, ell)
            verdicts.append(verdict)
            if self.dump_dir is not None:
                self._dump(singularity.id, problem.lambda_label, verdict)

        closed_form = singularity_index(singularity)[0] if compare else None
        result = OracleResult(singularity.id, RadialProblem(0.0, lam=lam).lambda_label,
                              tuple(verdicts), closed_form)
        logger.info("%s (lambda = %s): total = %s, closed form = %s",
                    singularity.id, result.lambda_label, result.total, closed_form)
        return result

    def verify_singularity(self, singularity: Singularity) -> VerificationResult:
        plus = self.numerical_singularity_index(singularity, LAMBDAS["+i"])
        minus = self.numerical_singularity_index(singularity, LAMBDAS["-i"])
        verification = VerificationResult(plus, minus)
        if not verification.conjugation_symmetric:
            logger.warning("%s: resultados de +i e -i diferem (%s, %s)",
                           singularity.id, plus.indices, minus.indices)
        return verification

    def _dump(self, singularity_id: str, lambda_label: str, verdict: HarmonicVerdict) -> None:
        self.dump_dir.mkdir(parents=True, exist_ok=True)
        sign = "plus" if lambda_label == "+i" else "minus"
        for endpoint in verdict.endpoints:
            for k, traj in enumerate(endpoint.trajectories):
                name = f"{singularity_id}_ell{verdict.ell}_{sign}_{endpoint.endpoint.value.lower()}_{k}.csv"
                traj.to_csv(self.dump_dir / name)
