"""JSON serialization of analysis reports.  Rationals travel as "num/den"."""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any, Dict, Optional

from .ars import ARBITRARY, AnalysisReport, BranchResult, Direction, PainleveSeries


def fraction_str(q) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def parse_fraction(text: str) -> Fraction:
    return Fraction(text)


def branch_to_dict(br: BranchResult) -> Dict[str, Any]:
    b = br.balance
    d: Dict[str, Any] = {
        "p": fraction_str(b.p),
        "coeff": "arbitrary" if b.coeff is ARBITRARY else fraction_str(b.coeff),
        "resonance_poly": [],
        "roots": [],
        "direction": br.direction.value if br.direction else None,
        "free_indices": [],
        "coefficients": {},
        "compatible": br.compatible,
    }
    if br.resonance is not None:
        d["resonance_poly"] = [fraction_str(c) for c in br.resonance.poly_coeffs]
        d["roots"] = [fraction_str(r) for r in br.resonance.rational_roots]
    if br.series is not None:
        d["free_indices"] = sorted(br.series.free_indices)
        d["coefficients"] = {str(i): fraction_str(c) for i, c in sorted(br.series.coeffs.items())}
        d["truncation"] = br.series.truncation
    if br.lowest_residual_index is not None:
        d["lowest_residual_index"] = br.lowest_residual_index
    if br.failure_stage:
        d["failure_stage"] = br.failure_stage
        d["diagnostic"] = br.diagnostic
    return d


def report_to_dict(report: AnalysisReport, dep: str = "y", indep: str = "x") -> Dict[str, Any]:
    return {
        "equation": report.equation.to_str(dep, indep),
        "dep": dep,
        "indep": indep,
        "balances": [branch_to_dict(b) for b in report.branches],
        "rejected": [
            {
                "p": fraction_str(r.p),
                "coeff": None if r.coeff is None else ("arbitrary" if r.coeff is ARBITRARY else fraction_str(r.coeff)),
                "reason": r.reason,
            }
            for r in report.rejected
        ],
    }


def dumps(obj: Dict[str, Any]) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def series_from_dict(d: Dict[str, Any]) -> Optional[PainleveSeries]:
    """Rebuild the series stored in one balance entry (None if it has none)."""
    if not d.get("coefficients") or d.get("direction") not in ("Right", "Left"):
        return None
    coeffs = {int(i): parse_fraction(v) for i, v in d["coefficients"].items()}
    return PainleveSeries(
        direction=Direction(d["direction"]),
        p=parse_fraction(d["p"]),
        coeffs=coeffs,
        free_indices=frozenset(d.get("free_indices", [])),
        truncation=int(d.get("truncation", max(coeffs))),
    )
