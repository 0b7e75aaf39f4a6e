"""Result container and small helpers shared by the protocol drivers."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import partial
from typing import Any

from ..graph_model import ValidationReport, VertexColoring
from ..list_framework import ParameterSet
from ..simulator import Accounting, BitContext, RoundTrace, account_bits


@dataclass
class RunResult:
    """Output of a protocol driver."""

    coloring: VertexColoring
    trace: RoundTrace
    report: ValidationReport
    palette_size: int | None = None
    params: ParameterSet | None = None
    info: dict[str, Any] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.report.ok

    def to_dict(self) -> dict:
        return {
            "coloring": list(self.coloring.colors),
            "defectBound": self.coloring.defect_bound,
            "paletteSize": self.palette_size,
            "rounds": self.trace.n_rounds,
            "validation": self.report.to_dict(),
            "parameters": None if self.params is None else self.params.to_dict(),
            "info": self.info,
        }


def accountant_for(accounting: Accounting | str, context: BitContext):
    return partial(account_bits, mode=Accounting(accounting), context=context)
