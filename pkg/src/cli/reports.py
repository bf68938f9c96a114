"""Formatação dos relatórios: JSON determinístico, tabelas de texto e CSV."""

import csv
import io
import json
from datetime import datetime, timezone
from typing import Any, Dict, List, Sequence

from ..calculus import DeficiencyReport
from ..model import serialize_index
from ..weyl import VerificationResult
from .grid import GRID_HEADER, GridRow

CLASSIFY_COLUMNS = ("id", "alpha", "p", "q", "class", "index")
VERIFY_COLUMNS = ("id", "closed_form", "oracle_plus", "oracle_minus", "agree")


def timestamp() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def to_json(payload: Dict[str, Any], with_timestamp: bool) -> str:
    """JSON com indentação fixa; `generated_at` é o único campo variável."""
    if with_timestamp:
        payload = {**payload, "generated_at": timestamp()}
    return json.dumps(payload, indent=2, ensure_ascii=False) + "\n"


def render_table(header: Sequence[str], rows: Sequence[Sequence[Any]], footer: Sequence[str] = ()) -> str:
    cells = [[str(c) for c in header]] + [[str(c) for c in row] for row in rows]
    widths = [max(len(row[i]) for row in cells) for i in range(len(header))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip() for row in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines + list(footer)) + "\n"


def render_csv(header: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


def _classify_rows(report: DeficiencyReport) -> List[List[Any]]:
    rows = []
    for s, entry in zip(report.singularities, report.per_singularity):
        rows.append([entry.id, format(s.alpha, "g"), format(s.p, "g"), format(s.q, "g"),
                     entry.klass.value, entry.index])
    return rows


def classify_table(report: DeficiencyReport) -> str:
    footer = [f"n0 = {serialize_index(report.background_index)}",
              f"total = {serialize_index(report.total)}"]
    return render_table(CLASSIFY_COLUMNS, _classify_rows(report), footer)


def classify_csv(report: DeficiencyReport) -> str:
    return render_csv(CLASSIFY_COLUMNS, _classify_rows(report))


def _verify_rows(results: Sequence[VerificationResult]) -> List[List[Any]]:
    rows = []
    for result in results:
        plus, minus = result.to_dict()["results"]
        rows.append([result.singularity_id, plus["closed_form"], plus["total"], minus["total"],
                     result.status])
    return rows


def verify_summary(results: Sequence[VerificationResult]) -> Dict[str, int]:
    summary = {"agree": 0, "boundary-inconclusive": 0, "inconclusive": 0, "disagree": 0}
    for result in results:
        summary[result.status] += 1
    return summary


def verify_payload(results: Sequence[VerificationResult], settings: Dict[str, Any]) -> Dict[str, Any]:
    return {
        "settings": settings,
        "results": [r.to_dict() for r in results],
        "summary": verify_summary(results),
    }


def verify_table(results: Sequence[VerificationResult]) -> str:
    summary = verify_summary(results)
    footer = [", ".join(f"{k} = {v}" for k, v in summary.items())]
    return render_table(VERIFY_COLUMNS, _verify_rows(results), footer)


def verify_csv(results: Sequence[VerificationResult]) -> str:
    return render_csv(VERIFY_COLUMNS, _verify_rows(results))


def grid_csv(rows: Sequence[GridRow]) -> str:
    return render_csv(GRID_HEADER, [row.as_tuple() for row in rows])


def grid_table(rows: Sequence[GridRow]) -> str:
    failures = sum(1 for row in rows if row.is_failure)
    return render_table(GRID_HEADER, [row.as_tuple() for row in rows],
                        [f"pontos = {len(rows)}, falhas = {failures}"])


def grid_payload(rows: Sequence[GridRow], settings: Dict[str, Any]) -> Dict[str, Any]:
    return {
        "settings": settings,
        "rows": [dict(zip(GRID_HEADER, row.as_tuple())) for row in rows],
        "failures": sum(1 for row in rows if row.is_failure),
    }
