"""Configurações de fluxos e validação das hipóteses geométricas (H1)-(H3)."""

import json
import logging
import math
from dataclasses import dataclass
from numbers import Real
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.spatial.distance import pdist

from .singularity import Singularity

logger = logging.getLogger(__name__)

INFINITE = "infinite"

# Chaves que descrevem conjuntos singulares não pontuais (curvas, discos, ...)
EXTENDED_GEOMETRY_KEYS = ("radius", "curve", "points", "shape", "segment")

# delta = r / CUTOFF_FRACTION satisfaz 0 < delta < r/2
CUTOFF_FRACTION = 4.0
# delta convencional quando não há par de singularidades
UNCONSTRAINED_DELTA = 1.0

BackgroundIndex = Union[int, float]


class ConfigurationError(ValueError):
    """Configuração rejeitada; `code` identifica a primeira violação."""

    def __init__(self, code: str, message: str, report: Optional["ValidationReport"] = None):
        super().__init__(message)
        self.code = code
        self.report = report


@dataclass(frozen=True)
class Violation:
    """Uma hipótese violada: regra (H1, H2, H3, LOWER_BOUND), código e mensagem."""

    rule: str
    code: str
    message: str
    singularity_id: Optional[str] = None

    def to_dict(self) -> Dict[str, Any]:
        return {"rule": self.rule, "code": self.code, "message": self.message, "id": self.singularity_id}


@dataclass(frozen=True)
class ValidationReport:
    """Resultado da validação de uma descrição bruta."""

    violations: Tuple[Violation, ...] = ()
    cutoff_feasible: bool = True
    delta: float = UNCONSTRAINED_DELTA

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self) -> Dict[str, Any]:
        return {
            "ok": self.ok,
            "violations": [v.to_dict() for v in self.violations],
            "cutoff_feasible": self.cutoff_feasible,
            "delta": self.delta,
        }


@dataclass(frozen=True)
class Configuration:
    """Lista finita de singularidades pontuais mais o índice de fundo n0.

    `background_index` é um inteiro não negativo ou `math.inf`; `min_separation`
    é None quando há menos de duas singularidades (sem restrição).
    """

    singularities: Tuple[Singularity, ...]
    background_index: BackgroundIndex = 0
    min_separation: Optional[float] = None

    @property
    def ids(self) -> List[str]:
        return [s.id for s in self.singularities]

    def __len__(self) -> int:
        return len(self.singularities)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "background_index": serialize_index(self.background_index),
            "singularities": [s.to_dict() for s in self.singularities],
        }

    def translated(self, dx: float, dy: float) -> "Configuration":
        moved = [s.moved_to(s.x + dx, s.y + dy) for s in self.singularities]
        return _rebuild(moved, self.background_index)

    def rotated(self, theta: float) -> "Configuration":
        c, s_ = math.cos(theta), math.sin(theta)
        moved = [s.moved_to(c * s.x - s_ * s.y, s_ * s.x + c * s.y) for s in self.singularities]
        return _rebuild(moved, self.background_index)


def serialize_index(value: BackgroundIndex) -> Union[int, str]:
    """Converte um índice (possivelmente infinito) para JSON."""
    return INFINITE if value == math.inf else int(value)


def min_separation(positions: Sequence[Tuple[float, float]]) -> Optional[float]:
    """Menor distância euclidiana entre pares; None quando há menos de dois pontos."""
    if len(positions) < 2:
        return None
    return float(pdist(np.asarray(positions, dtype=float)).min())


def _cutoff_from_separation(r: Optional[float]) -> Tuple[bool, float]:
    if r is None:
        return True, UNCONSTRAINED_DELTA
    delta = r / CUTOFF_FRACTION
    return (0 < delta < r / 2), delta


def cutoff_feasibility(config: Configuration) -> Tuple[bool, float]:
    """Verifica que existe 0 < delta < r/2 para a partição da unidade (delta = r/4)."""
    return _cutoff_from_separation(config.min_separation)


def _is_number(value: Any) -> bool:
    return isinstance(value, Real) and not isinstance(value, bool)


def _parse_background(raw: Mapping[str, Any]) -> BackgroundIndex:
    value = raw.get("background_index", 0)
    if value == INFINITE:
        return math.inf
    if isinstance(value, bool) or not isinstance(value, int) or value < 0:
        raise ConfigurationError(
            "MALFORMED", f"background_index deve ser inteiro >= 0 ou '{INFINITE}', recebido {value!r}"
        )
    return value


def _parse_singularity(index: int, item: Any) -> Tuple[Singularity, List[Violation]]:
    if not isinstance(item, Mapping):
        raise ConfigurationError("MALFORMED", f"singularidade #{index} não é um objeto JSON")
    sid = item.get("id")
    if not isinstance(sid, str) or not sid:
        raise ConfigurationError("MALFORMED", f"singularidade #{index} sem 'id' textual")

    violations = []
    for key in EXTENDED_GEOMETRY_KEYS:
        if key in item:
            violations.append(Violation(
                "H2", "NON_POINT_SET",
                f"{sid}: apenas singularidades pontuais são suportadas (chave '{key}')", sid,
            ))

    values = {}
    for key, default in (("x", None), ("y", None), ("alpha", None), ("p", 0.0), ("q", 0.0)):
        value = item.get(key, default)
        if value is None or not _is_number(value):
            raise ConfigurationError("MALFORMED", f"{sid}: campo '{key}' ausente ou não numérico")
        values[key] = float(value)

    for key in ("x", "y"):
        if not math.isfinite(values[key]):
            violations.append(Violation("H2", "NONFINITE_FIELD", f"{sid}: posição '{key}' não finita", sid))
    for key in ("alpha", "p", "q"):
        if not math.isfinite(values[key]):
            violations.append(Violation("LOWER_BOUND", "NONFINITE_FIELD", f"{sid}: '{key}' não finito", sid))

    if values["p"] < 0:
        violations.append(Violation("LOWER_BOUND", "NEGATIVE_P", f"{sid}: p = {values['p']} < 0", sid))
    elif values["p"] == 0 and values["q"] < 0:
        violations.append(Violation(
            "LOWER_BOUND", "UNBOUNDED_POTENTIAL",
            f"{sid}: q = {values['q']} < 0 com p = 0 torna q/r ilimitado inferiormente", sid,
        ))

    singularity = Singularity(sid, (values["x"], values["y"]), values["alpha"], values["p"], values["q"])
    return singularity, violations


def _parse(raw: Any) -> Tuple[List[Singularity], BackgroundIndex, List[Violation]]:
    if not isinstance(raw, Mapping):
        raise ConfigurationError("MALFORMED", "a configuração deve ser um objeto JSON")
    items = raw.get("singularities", [])
    if not isinstance(items, list):
        raise ConfigurationError("MALFORMED", "'singularities' deve ser uma lista")

    background = _parse_background(raw)
    singularities, violations = [], []
    for index, item in enumerate(items):
        singularity, found = _parse_singularity(index, item)
        singularities.append(singularity)
        violations.extend(found)

    seen = set()
    for s in singularities:
        if s.id in seen:
            violations.append(Violation("H1", "DUPLICATE_ID", f"id repetido: {s.id}", s.id))
        seen.add(s.id)

    by_position: Dict[Tuple[float, float], List[str]] = {}
    for s in singularities:
        if all(math.isfinite(c) for c in s.position):
            by_position.setdefault(s.position, []).append(s.id)
    for position, ids in by_position.items():
        if len(ids) > 1:
            ids = sorted(ids)
            violations.append(Violation(
                "H3", "DUPLICATE_POSITION",
                f"{', '.join(ids)} ocupam a mesma posição {position} (r = 0)", ids[0],
            ))
    return singularities, background, violations


def validate_configuration(raw: Any) -> ValidationReport:
    """Valida a descrição bruta coletando todas as violações.

    Descrições estruturalmente inválidas (tipos errados, campos ausentes) levantam
    ConfigurationError(MALFORMED) em vez de gerar violações.
    """
    singularities, _, violations = _parse(raw)
    finite_positions = [s.position for s in singularities if all(math.isfinite(c) for c in s.position)]
    feasible, delta = _cutoff_from_separation(min_separation(finite_positions))
    violations.sort(key=lambda v: (v.rule, v.code, v.singularity_id or ""))
    return ValidationReport(tuple(violations), feasible, delta)


def build_configuration(raw: Any) -> Configuration:
    """Constrói uma Configuration validada a partir de um dicionário (formato JSON)."""
    singularities, background, _ = _parse(raw)
    report = validate_configuration(raw)
    if not report.ok:
        first = report.violations[0]
        raise ConfigurationError(first.code, first.message, report)

    separation = min_separation([s.position for s in singularities])
    config = Configuration(tuple(singularities), background, separation)
    logger.debug("Configuração com %d singularidades, r = %s", len(config), separation)
    return config


def _rebuild(singularities: Sequence[Singularity], background: BackgroundIndex) -> Configuration:
    return build_configuration({
        "background_index": serialize_index(background),
        "singularities": [s.to_dict() for s in singularities],
    })


def load_configuration(path: Union[str, Path]) -> Configuration:
    """Lê e valida um arquivo de configuração JSON.

    Raises:
        OSError: arquivo inexistente ou ilegível.
        json.JSONDecodeError: conteúdo não é JSON válido.
        ConfigurationError: conteúdo viola as hipóteses.
    """
    with open(path, "r", encoding="utf-8") as f:
        raw = json.load(f)
    return build_configuration(raw)
