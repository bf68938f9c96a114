"""Descrição de uma execução da linha de comando (RunSpec) e dos eixos da grade."""

import argparse
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

from ..settings import OracleSettings, jobs_from_env

COMMANDS = ("classify", "verify", "grid")
FORMATS = ("json", "table", "csv")

# Casas decimais usadas para limpar o ruído de START + k STEP
AXIS_DECIMALS = 12


class RunSpecError(ValueError):
    """Pedido de execução inválido (faixa vazia, passo não positivo, caminhos iguais)."""

    code = "INVALID_RUN"


@dataclass(frozen=True)
class RunSpec:
    """Tudo o que uma execução precisa, já validado.

    Attributes:
        command: classify, verify ou grid.
        input_path: arquivo de configuração JSON (classify e verify).
        output_path: destino do relatório; None escreve na saída padrão.
        fmt: json, table ou csv.
        timestamp: inclui `generated_at` nos relatórios JSON.
        settings: parâmetros do oráculo (ambiente + flags).
        jobs: processos paralelos.
        alphas, ps, qs: eixos da grade.
        dump_dir: diretório para as trajetórias do verify.
    """

    command: str
    input_path: Optional[Path] = None
    output_path: Optional[Path] = None
    fmt: str = "table"
    timestamp: bool = True
    settings: OracleSettings = field(default_factory=OracleSettings)
    jobs: int = 1
    alphas: Tuple[float, ...] = ()
    ps: Tuple[float, ...] = ()
    qs: Tuple[float, ...] = (0.0,)
    dump_dir: Optional[Path] = None

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise RunSpecError(f"comando desconhecido: {self.command}")
        if self.fmt not in FORMATS:
            raise RunSpecError(f"formato desconhecido: {self.fmt}")
        if self.jobs < 1:
            raise RunSpecError("--jobs deve ser >= 1")
        if self.command in ("classify", "verify") and self.input_path is None:
            raise RunSpecError(f"{self.command} exige --input")
        if self.command == "grid" and not (self.alphas and self.ps and self.qs):
            raise RunSpecError("a grade exige eixos alpha, p e q não vazios")
        if any(p < 0 for p in self.ps):
            raise RunSpecError("a grade não aceita p negativo")
        if not all(math.isfinite(v) for v in self.alphas + self.ps + self.qs):
            raise RunSpecError("eixos da grade com valores não finitos")
        if self.input_path is not None and self.output_path is not None:
            if self.input_path.resolve() == self.output_path.resolve():
                raise RunSpecError("--input e --output apontam para o mesmo arquivo")


def axis_from_range(start: float, stop: float, step: float) -> Tuple[float, ...]:
    """Valores START, START + STEP, ... até STOP inclusive."""
    if not all(math.isfinite(v) for v in (start, stop, step)):
        raise RunSpecError("faixa com valores não finitos")
    if step <= 0:
        raise RunSpecError(f"passo deve ser positivo, recebido {step}")
    if stop < start:
        raise RunSpecError(f"faixa vazia: {start} > {stop}")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return tuple(round(start + k * step, AXIS_DECIMALS) for k in range(count))


def _axis(values: Optional[Sequence[float]], bounds: Optional[Sequence[float]], name: str,
          default: Sequence[float] = ()) -> Tuple[float, ...]:
    if values is not None and bounds is not None:
        raise RunSpecError(f"use --{name}-values ou --{name}-range, não ambos")
    if bounds is not None:
        return axis_from_range(*bounds)
    if values is not None:
        if not values:
            raise RunSpecError(f"--{name}-values vazio")
        return tuple(float(v) for v in values)
    return tuple(default)


def run_spec_from_args(args: argparse.Namespace) -> RunSpec:
    """Combina flags, variáveis de ambiente e padrões em um RunSpec.

    Raises:
        RunSpecError, SettingsError: combinação inválida (código de saída 2).
    """
    settings = OracleSettings.from_env().with_overrides(
        rel_tol=args.rel_tol, r_max=args.rmax, boundary_band=args.boundary_band,
    )
    jobs = args.jobs if args.jobs is not None else jobs_from_env()
    grid = args.command == "grid"
    default_fmt = "csv" if grid else "table"
    return RunSpec(
        command=args.command,
        input_path=Path(args.input) if getattr(args, "input", None) else None,
        output_path=Path(args.output) if args.output else None,
        fmt=args.format or default_fmt,
        timestamp=not args.no_timestamp,
        settings=settings,
        jobs=jobs,
        alphas=_axis(getattr(args, "alpha_values", None), getattr(args, "alpha_range", None), "alpha") if grid else (),
        ps=_axis(getattr(args, "p_values", None), getattr(args, "p_range", None), "p") if grid else (),
        qs=_axis(getattr(args, "q_values", None), None, "q", (0.0,)) if grid else (0.0,),
        dump_dir=Path(args.dump_trajectories) if getattr(args, "dump_trajectories", None) else None,
    )


def grid_points(spec: RunSpec) -> List[Tuple[float, float, float]]:
    """Pontos (alpha, p, q) em ordem lexicográfica dos eixos."""
    return [(a, p, q) for a in spec.alphas for p in spec.ps for q in spec.qs]
