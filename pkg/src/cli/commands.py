"""Linha de comando: classify, verify e grid.

Uso:
    python -m src.cli classify --input resources/configs/mixed.json
    python -m src.cli verify --input resources/configs/aharonov_bohm_pair.json --format json --output verify.json
    python -m src.cli grid --alpha-range 0.1 0.9 0.1 --p-values 0 0.5 1.5 --q-values 0 --jobs 4

Códigos de saída: 0 sucesso, 2 validação, 3 entrada/saída, 4 discordância.
"""

import argparse
import json
import logging
import sys
from typing import List, Optional

from ..calculus import total_index
from ..model import ConfigurationError, load_configuration
from ..settings import SettingsError
from ..weyl import WeylOracle
from . import reports
from .grid import ordered_map, run_grid_points
from .runspec import COMMANDS, FORMATS, RunSpec, RunSpecError, grid_points, run_spec_from_args

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_IO = 3
EXIT_DISAGREEMENT = 4

LOG_FORMAT = "[%(levelname)s] %(name)s: %(message)s"


class InputOutputError(RuntimeError):
    code = "IO_FAILURE"


def configure_logging(verbosity: int) -> None:
    level = {0: logging.WARNING, 1: logging.INFO}.get(verbosity, logging.DEBUG)
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr, force=True)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="python -m src.cli",
        description="Índices de deficiência de operadores de Schrödinger magnéticos com fluxos pontuais.",
    )
    commands = parser.add_subparsers(dest="command", required=True, metavar="{" + ",".join(COMMANDS) + "}")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", help="Arquivo de saída (padrão: saída padrão).")
    common.add_argument("--format", choices=FORMATS, help="Formato do relatório.")
    common.add_argument("--no-timestamp", action="store_true", help="Omite generated_at dos relatórios JSON.")
    common.add_argument("--rel-tol", type=float, dest="rel_tol", help="Tolerância relativa do integrador.")
    common.add_argument("--rmax", type=float, help="Raio final da integração para o infinito.")
    common.add_argument("--boundary-band", type=float, dest="boundary_band",
                        help="Faixa |nu² - 1| declarada inconclusiva.")
    common.add_argument("--jobs", type=int, help="Processos paralelos (padrão: DEFICIENCY_JOBS ou 1).")
    common.add_argument("-v", "--verbose", action="count", default=0, help="-v INFO, -vv DEBUG.")

    classify = commands.add_parser("classify", parents=[common], help="Índices pela fórmula fechada.")
    classify.add_argument("--input", required=True, help="Configuração JSON.")

    verify = commands.add_parser("verify", parents=[common], help="Confere a fórmula com o oráculo de Weyl.")
    verify.add_argument("--input", required=True, help="Configuração JSON.")
    verify.add_argument("--dump-trajectories", dest="dump_trajectories", metavar="DIR",
                        help="Grava as trajetórias de cada harmônico em CSV.")

    grid = commands.add_parser("grid", parents=[common], help="Varredura de concordância em (alpha, p, q).")
    for axis in ("alpha", "p"):
        group = grid.add_mutually_exclusive_group(required=True)
        group.add_argument(f"--{axis}-range", dest=f"{axis}_range", nargs=3, type=float,
                           metavar=("START", "STOP", "STEP"))
        group.add_argument(f"--{axis}-values", dest=f"{axis}_values", nargs="+", type=float)
    grid.add_argument("--q-values", dest="q_values", nargs="+", type=float)
    return parser


def _emit(text: str, spec: RunSpec) -> None:
    if spec.output_path is None:
        sys.stdout.write(text)
        return
    try:
        spec.output_path.parent.mkdir(parents=True, exist_ok=True)
        spec.output_path.write_text(text, encoding="utf-8")
    except OSError as e:
        raise InputOutputError(f"não foi possível gravar {spec.output_path}: {e}") from e


def _load(spec: RunSpec):
    try:
        return load_configuration(spec.input_path)
    except OSError as e:
        raise InputOutputError(f"não foi possível ler {spec.input_path}: {e}") from e
    except json.JSONDecodeError as e:
        raise InputOutputError(f"{spec.input_path} não é JSON válido: {e}") from e


def _report_violations(error: ConfigurationError) -> None:
    violations = error.report.violations if error.report is not None else ()
    if not violations:
        print(f"{error.code}: {error}", file=sys.stderr)
    for v in violations:
        print(f"{v.rule} {v.code} [{v.singularity_id or '-'}]: {v.message}", file=sys.stderr)


def run_classify(spec: RunSpec) -> int:
    """Índices pela fórmula fechada; nunca chama o oráculo."""
    config = _load(spec)
    report = total_index(config)
    if spec.fmt == "table":
        sys.stdout.write(reports.classify_table(report))
        if spec.output_path is not None:
            _emit(reports.to_json(report.to_dict(), spec.timestamp), spec)
    elif spec.fmt == "json":
        _emit(reports.to_json(report.to_dict(), spec.timestamp), spec)
    else:
        _emit(reports.classify_csv(report), spec)
    return EXIT_OK


def _verify_one(singularity, settings, dump_dir):
    return WeylOracle(settings, dump_dir).verify_singularity(singularity)


def run_verify(spec: RunSpec) -> int:
    """Oráculo com lambda = +i e -i em cada singularidade, comparado à fórmula fechada."""
    config = _load(spec)
    arguments = [(s, spec.settings, spec.dump_dir) for s in config.singularities]
    results = ordered_map(_verify_one, arguments, spec.jobs, "verify")

    if spec.fmt == "table":
        sys.stdout.write(reports.verify_table(results))
        if spec.output_path is not None:
            _emit(reports.to_json(reports.verify_payload(results, spec.settings.to_dict()), spec.timestamp), spec)
    elif spec.fmt == "json":
        _emit(reports.to_json(reports.verify_payload(results, spec.settings.to_dict()), spec.timestamp), spec)
    else:
        _emit(reports.verify_csv(results), spec)

    summary = reports.verify_summary(results)
    if summary["boundary-inconclusive"]:
        logger.warning("boundary-inconclusive: %d singularidade(s) com harmônicos na faixa |nu² - 1| < %g",
                       summary["boundary-inconclusive"], spec.settings.boundary_band)
    if summary["disagree"] or summary["inconclusive"]:
        logger.error("%d discordância(s), %d inconclusivo(s) fora da faixa de fronteira",
                     summary["disagree"], summary["inconclusive"])
        return EXIT_DISAGREEMENT
    return EXIT_OK


def run_grid(spec: RunSpec) -> int:
    """Varredura (alpha, p, q) com linhas em ordem determinística para qualquer --jobs."""
    rows = run_grid_points(grid_points(spec), spec.settings, spec.jobs)
    if spec.fmt == "csv":
        _emit(reports.grid_csv(rows), spec)
    elif spec.fmt == "json":
        _emit(reports.to_json(reports.grid_payload(rows, spec.settings.to_dict()), spec.timestamp), spec)
    else:
        _emit(reports.grid_table(rows), spec)

    failures = [row for row in rows if row.is_failure]
    boundary = sum(1 for row in rows if row.agree == "inconclusive" and row.boundary_only)
    if boundary:
        logger.warning("boundary-inconclusive: %d ponto(s) da grade", boundary)
    if failures:
        for row in failures:
            logger.error("alpha = %s, p = %s, q = %s: fechado %s, +i %s, -i %s", row.alpha, row.p, row.q,
                         row.closed_form, row.oracle_plus, row.oracle_minus)
        return EXIT_DISAGREEMENT
    return EXIT_OK


RUNNERS = {"classify": run_classify, "verify": run_verify, "grid": run_grid}


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose)
    try:
        spec = run_spec_from_args(args)
        return RUNNERS[spec.command](spec)
    except (RunSpecError, SettingsError) as e:
        print(f"{e.code}: {e}", file=sys.stderr)
        return EXIT_VALIDATION
    except ConfigurationError as e:
        _report_violations(e)
        return EXIT_VALIDATION
    except InputOutputError as e:
        print(f"{e.code}: {e}", file=sys.stderr)
        return EXIT_IO
