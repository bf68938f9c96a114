"""Singularidade pontual: fluxo de Aharonov-Bohm com potenciais inverso-quadrado e Coulomb."""

from dataclasses import dataclass
from typing import Any, Dict, Tuple


@dataclass(frozen=True)
class Singularity:
    """Um ponto de fluxo no plano.

    Attributes:
        id: rótulo único dentro da configuração.
        position: coordenadas (x, y) do ponto.
        alpha: parâmetro de fluxo magnético.
        p: intensidade do termo p/|x - x_j|² (p >= 0).
        q: intensidade do termo q/|x - x_j|.
    """

    id: str
    position: Tuple[float, float]
    alpha: float
    p: float = 0.0
    q: float = 0.0

    @property
    def x(self) -> float:
        return self.position[0]

    @property
    def y(self) -> float:
        return self.position[1]

    def is_bounded_below(self) -> bool:
        """q/r + p/r² é limitado inferiormente (por -q²/4p quando q < 0)."""
        return self.p >= 0 and (self.q >= 0 or self.p > 0)

    def moved_to(self, x: float, y: float) -> "Singularity":
        return Singularity(self.id, (x, y), self.alpha, self.p, self.q)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "id": self.id,
            "x": self.x,
            "y": self.y,
            "alpha": self.alpha,
            "p": self.p,
            "q": self.q,
        }
