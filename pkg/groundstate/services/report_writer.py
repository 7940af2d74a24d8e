import csv
import io
import json
from typing import List, Sequence, Union

from groundstate.schemas.report import SweepResult, VerificationReport

SWEEP_HEADER = ["lambda", "quotient", "deficit", "remainder_J", "remainder_R", "denominator"]


def _number(x) -> str:
    # repr is the shortest string that round-trips to the same double
    return "" if x is None else repr(float(x))


class ReportWriter:
    """レポート出力サービス"""

    @staticmethod
    def report_to_dict(report: VerificationReport) -> dict:
        return report.model_dump(mode="json", by_alias=True)

    @staticmethod
    def generate_json(reports: Union[VerificationReport, Sequence[VerificationReport]]) -> str:
        """検証レポートを JSON に変換"""
        if isinstance(reports, VerificationReport):
            payload = ReportWriter.report_to_dict(reports)
        else:
            payload = [ReportWriter.report_to_dict(r) for r in reports]
        return json.dumps(payload, ensure_ascii=False, indent=2)

    @staticmethod
    def read_json(text: str) -> Union[VerificationReport, List[VerificationReport]]:
        data = json.loads(text)
        if isinstance(data, list):
            return [VerificationReport.model_validate(item) for item in data]
        return VerificationReport.model_validate(data)

    @staticmethod
    def generate_sweep_csv(result: SweepResult) -> str:
        """スイープ結果を CSV に変換"""
        output = io.StringIO()
        writer = csv.writer(output, lineterminator="\n")
        writer.writerow(SWEEP_HEADER)
        for row in result.rows:
            writer.writerow([
                _number(row.lam),
                _number(row.quotient),
                _number(row.deficit),
                _number(row.remainder_J),
                _number(row.remainder_R),
                _number(row.denominator),
            ])
        return output.getvalue()

    @staticmethod
    def generate_sweep_json(result: SweepResult) -> str:
        return json.dumps(result.model_dump(mode="json", by_alias=True), ensure_ascii=False, indent=2)

    @staticmethod
    def generate_summary(report: VerificationReport) -> str:
        """人間向けサマリー"""
        mark = "✅" if report.passed else "❌"
        lines = [
            f"{mark} {report.identity_name} [{report.profile}]",
            f"   lhs           = {report.lhs:.15g}",
            f"   rhs_main      = {report.rhs_main:.15g}",
            f"   rhs_remainder = {report.rhs_remainder:.15g}",
            f"   residual_rel  = {report.residual_rel:.3e} (tolerance {report.tolerance:.3e})",
        ]
        return "\n".join(lines)

    @staticmethod
    def generate_sweep_summary(result: SweepResult) -> str:
        lines = [f"C = {result.sharp_constant:.10f}"]
        for row in result.rows:
            lines.append(
                f"   lambda={row.lam:<10g} quotient={row.quotient:.12g} deficit={row.deficit:.6e}"
            )
        for check in result.checks:
            mark = "✅" if check.passed else "❌"
            lines.append(f"{mark} {check.name}: {check.detail}")
        return "\n".join(lines)
