"""Classificação por singularidade (J2 / J1 / Y / interação pontual) e teorema da soma."""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Tuple, Union

from ..model import Configuration, Singularity, serialize_index
from .harmonics import (
    classify_harmonic,
    contributing_harmonics,
    effective_flux,
    radial_coupling,
    reduced_flux,
)

logger = logging.getLogger(__name__)


class SingularityClass(Enum):
    """Classes de singularidade segundo quantos harmônicos contribuem."""
    J2 = "J2"
    J1 = "J1"
    Y = "Y"
    POINT_INTERACTION = "POINT_INTERACTION"

    @property
    def expected_index(self) -> int:
        return {"J2": 2, "J1": 1, "Y": 0, "POINT_INTERACTION": 1}[self.value]


@dataclass(frozen=True)
class HarmonicCoupling:
    """Acoplamento nu² = (ell + alpha)² + p de um harmônico angular."""
    ell: int
    nu_squared: float

    @classmethod
    def of(cls, ell: int, singularity: Singularity) -> "HarmonicCoupling":
        return cls(ell, radial_coupling(ell, effective_flux(singularity.alpha), singularity.p))

    @property
    def index(self) -> int:
        return classify_harmonic(self.nu_squared)


@dataclass(frozen=True)
class SingularityDeficiency:
    """Índice e classe de uma singularidade, com os harmônicos que contribuem."""
    id: str
    index: int
    klass: SingularityClass
    harmonics: Tuple[int, ...]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "id": self.id,
            "index": self.index,
            "class": self.klass.value,
            "harmonics": list(self.harmonics),
        }


@dataclass(frozen=True)
class DeficiencyReport:
    """n± do operador completo com o detalhamento por singularidade.

    `total` é inteiro ou math.inf (quando o índice de fundo é infinito).
    n+ = n- sempre: o operador é real e limitado inferiormente.
    """
    per_singularity: Tuple[SingularityDeficiency, ...]
    background_index: Union[int, float]
    total: Union[int, float]
    nplus_equals_nminus: bool = True
    friedrichs_extension_exists: bool = True
    singularities: Tuple[Singularity, ...] = field(default=(), compare=False, repr=False)

    @property
    def is_infinite(self) -> bool:
        return self.total == math.inf

    @property
    def self_adjoint(self) -> bool:
        """Índices nulos: o operador mínimo já é autoadjunto."""
        return self.total == 0

    @property
    def class_counts(self) -> Dict[str, int]:
        return class_counts(self)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "total": serialize_index(self.total),
            "background_index": serialize_index(self.background_index),
            "per_singularity": [entry.to_dict() for entry in self.per_singularity],
            "nplus_equals_nminus": self.nplus_equals_nminus,
            "class_counts": self.class_counts,
            "self_adjoint": self.self_adjoint,
            "friedrichs_extension_exists": self.friedrichs_extension_exists,
        }


def nearest_couplings(singularity: Singularity) -> Tuple[HarmonicCoupling, HarmonicCoupling]:
    """Os dois harmônicos com |l + alpha| < 1 possível: l + alpha = frac e frac - 1."""
    ell = -math.floor(effective_flux(singularity.alpha))
    return HarmonicCoupling.of(ell, singularity), HarmonicCoupling.of(ell - 1, singularity)


def singularity_class(singularity: Singularity) -> SingularityClass:
    _, is_integer = reduced_flux(singularity.alpha)
    if is_integer and singularity.p == 0:
        return SingularityClass.POINT_INTERACTION

    first, second = nearest_couplings(singularity)
    if max(first.nu_squared, second.nu_squared) < 1:
        return SingularityClass.J2
    if min(first.nu_squared, second.nu_squared) < 1:
        return SingularityClass.J1
    return SingularityClass.Y


def singularity_index(singularity: Singularity) -> Tuple[int, SingularityClass, List[int]]:
    """Índice n±(H_j), classe e harmônicos que contribuem para uma singularidade."""
    harmonics = contributing_harmonics(singularity.alpha, singularity.p)
    klass = singularity_class(singularity)
    if klass.expected_index != len(harmonics):
        raise RuntimeError(
            f"{singularity.id}: classe {klass.value} incompatível com harmônicos {harmonics}"
        )
    return len(harmonics), klass, harmonics


def total_index(config: Configuration) -> DeficiencyReport:
    """Soma n±(H) = n±(H0) + Σ_j n±(H_j) sobre uma configuração validada."""
    entries = []
    for s in config.singularities:
        index, klass, harmonics = singularity_index(s)
        entries.append(SingularityDeficiency(s.id, index, klass, tuple(harmonics)))

    total = config.background_index + sum(entry.index for entry in entries)
    logger.debug("n0 = %s, total = %s", config.background_index, total)
    return DeficiencyReport(tuple(entries), config.background_index, total,
                            singularities=config.singularities)


def class_counts(report: DeficiencyReport) -> Dict[str, int]:
    counts = {klass.value: 0 for klass in SingularityClass}
    for entry in report.per_singularity:
        counts[entry.klass.value] += 1
    return counts


def closed_form_total(counts: Dict[str, int], background_index: Union[int, float]) -> Union[int, float]:
    """n0 + 2|J2| + |J1| + |interações pontuais|."""
    return (background_index + 2 * counts["J2"] + counts["J1"]
            + counts["POINT_INTERACTION"])
