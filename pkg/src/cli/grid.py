"""Varredura de concordância entre o cálculo fechado e o oráculo numérico."""

import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, List, Optional, Sequence, Tuple, TypeVar, Union

from tqdm import tqdm

from ..calculus import singularity_index
from ..model import Singularity
from ..settings import OracleSettings
from ..weyl import INCONCLUSIVE, OracleResult, WeylOracle

logger = logging.getLogger(__name__)

SKIPPED = "SKIPPED"
GRID_HEADER = ("alpha", "p", "q", "closed_form", "oracle_plus", "oracle_minus", "agree")

T = TypeVar("T")
R = TypeVar("R")


@dataclass(frozen=True)
class GridRow:
    """Uma linha da grade; oráculos valem int, "inconclusive" ou SKIPPED."""

    alpha: float
    p: float
    q: float
    closed_form: Optional[int]
    oracle_plus: Union[int, str]
    oracle_minus: Union[int, str]
    agree: str
    boundary_only: bool = False
    wronskian_drift: float = 0.0

    @property
    def is_failure(self) -> bool:
        """Discordância real: valores diferentes ou inconclusão fora da faixa de fronteira."""
        if self.agree == "false":
            return True
        return self.agree == INCONCLUSIVE and not self.boundary_only

    def as_tuple(self) -> Tuple[str, ...]:
        closed = SKIPPED if self.closed_form is None else str(self.closed_form)
        return (_number(self.alpha), _number(self.p), _number(self.q), closed,
                str(self.oracle_plus), str(self.oracle_minus), self.agree)


def _number(value: float) -> str:
    return format(value, ".12g")


def _oracle_value(result: OracleResult) -> Union[int, str]:
    return INCONCLUSIVE if result.total is None else result.total


def evaluate_grid_point(point: Tuple[float, float, float], settings: OracleSettings) -> GridRow:
    """Índice fechado e oráculo (+i e -i) em um ponto (alpha, p, q)."""
    alpha, p, q = point
    if p == 0 and q < 0:
        return GridRow(alpha, p, q, None, SKIPPED, SKIPPED, "skipped")

    singularity = Singularity("grid", (0.0, 0.0), alpha, p, q)
    closed_form = singularity_index(singularity)[0]
    oracle = WeylOracle(settings)
    plus = oracle.numerical_singularity_index(singularity, 1j, compare=False)
    minus = oracle.numerical_singularity_index(singularity, -1j, compare=False)

    values = (_oracle_value(plus), _oracle_value(minus))
    if INCONCLUSIVE in values:
        agree = INCONCLUSIVE
        boundary_only = all(r.boundary_only for r in (plus, minus) if r.total is None)
    else:
        agree = "true" if values[0] == values[1] == closed_form and plus.indices == minus.indices else "false"
        boundary_only = False
    drift = max(plus.max_wronskian_drift, minus.max_wronskian_drift)
    return GridRow(alpha, p, q, closed_form, values[0], values[1], agree, boundary_only, drift)


def _apply(task: Tuple[Callable[..., R], tuple]) -> R:
    function, arguments = task
    return function(*arguments)


def ordered_map(function: Callable[..., R], arguments: Sequence[tuple], jobs: int = 1,
                description: Optional[str] = None) -> List[R]:
    """Aplica `function` a cada tupla de argumentos preservando a ordem de entrada.

    Com jobs > 1 usa um ProcessPoolExecutor; a barra de progresso só aparece quando
    stderr é um terminal.
    """
    progress = dict(total=len(arguments), desc=description, disable=not sys.stderr.isatty(),
                    file=sys.stderr)
    if jobs == 1 or len(arguments) <= 1:
        return [function(*args) for args in tqdm(arguments, **progress)]

    tasks: Iterable = ((function, args) for args in arguments)
    with ProcessPoolExecutor(max_workers=jobs) as executor:
        return list(tqdm(executor.map(_apply, tasks, chunksize=1), **progress))


def run_grid_points(points: Sequence[Tuple[float, float, float]], settings: OracleSettings,
                    jobs: int = 1) -> List[GridRow]:
    rows = ordered_map(evaluate_grid_point, [(point, settings) for point in points], jobs, "grade")
    failures = sum(1 for row in rows if row.is_failure)
    logger.info("%d pontos avaliados, %d falhas", len(rows), failures)
    return rows
