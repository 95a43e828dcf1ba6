import csv
import io
import json
from typing import Any, Dict, List, Sequence

from services.verification import FAIL, VerificationReport, jsonable


class ReportFactory:
    """Factory Pattern implementation for rendering reports"""

    @staticmethod
    def create_json(reports: Sequence[VerificationReport]) -> str:
        """One JSON array of report objects"""
        return json.dumps([r.as_dict() for r in reports], indent=2)

    @staticmethod
    def create_json_rows(rows: Sequence[Dict[str, Any]]) -> str:
        return json.dumps(jsonable(list(rows)), indent=2)

    @staticmethod
    def create_csv(rows: Sequence[Dict[str, Any]], columns: Sequence[str] = ()) -> str:
        """CSV with a header row; columns default to the keys of the first row"""
        columns = list(columns) or (list(rows[0]) if rows else [])
        out = io.StringIO()
        writer = csv.DictWriter(out, fieldnames=columns, lineterminator="\n", extrasaction="ignore")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: _cell(v) for k, v in row.items()})
        return out.getvalue()

    @staticmethod
    def create_report_rows(reports: Sequence[VerificationReport]) -> List[Dict[str, Any]]:
        """Flatten reports for CSV: nested values are JSON-encoded"""
        return [
            {
                "check_id": r.check_id,
                "status": r.status,
                "tolerance": r.tolerance,
                "runtime_ms": r.runtime_ms,
                "computed": json.dumps(jsonable(r.computed), sort_keys=True),
                "expected": json.dumps(jsonable(r.expected), sort_keys=True) if r.expected is not None else "",
            }
            for r in reports
        ]

    @staticmethod
    def create_text(reports: Sequence[VerificationReport], details: bool = False) -> str:
        """Aligned status table followed by the computed values of every failure, or of every report with details"""
        if not reports:
            return "no reports"
        width = max(len(r.check_id) for r in reports)
        lines = [f"{r.check_id:<{width}}  {r.status.upper():<7}  {r.runtime_ms:>8} ms" for r in reports]
        for r in reports:
            if details or r.status == FAIL:
                lines.append("")
                lines.append(f"{r.check_id}:")
                lines.extend(f"  {k} = {_cell(v)}" for k, v in jsonable(r.computed).items())
                if r.expected:
                    lines.extend(f"  expected {k} = {_cell(v)}" for k, v in jsonable(r.expected).items())
        passed = sum(r.ok for r in reports)
        lines.append("")
        lines.append(f"{passed}/{len(reports)} checks passed")
        return "\n".join(lines)

    @staticmethod
    def create_mapping_text(values: Dict[str, Any]) -> str:
        """key = value lines for subcommand pass-through results"""
        width = max((len(k) for k in values), default=0)
        return "\n".join(f"{k:<{width}} = {_cell(v)}" for k, v in jsonable(values).items())

    @classmethod
    def render(cls, reports: Sequence[VerificationReport], output: str, details: bool = False) -> str:
        if output == "json":
            return cls.create_json(reports)
        if output == "csv":
            rows = cls.create_report_rows(reports)
            return cls.create_csv(rows, ["check_id", "status", "tolerance", "runtime_ms", "computed", "expected"])
        return cls.create_text(reports, details)


def _cell(value: Any) -> str:
    if isinstance(value, float):
        return f"{value:.15g}"
    if isinstance(value, (dict, list)):
        return json.dumps(value)
    return str(value)
