"""
Oracle comparison records
"""

from dataclasses import asdict, dataclass, field
from typing import Iterable

import pandas as pd

from ..exceptions import ValidationError
from ..file_handlers.csv_handler import write_frame_atomic


@dataclass(frozen=True)
class OracleReport:
    """
    One comparison of a computed value against its oracle.

    kind 'abs' compares |value - oracle|; kind 'upper' checks
    value <= oracle + tolerance (discrepancy is the excess, if any).
    """
    name: str
    instance: str
    value: float
    oracle_value: float
    tolerance: float
    kind: str = "abs"
    discrepancy: float = field(init=False)
    passed: bool = field(init=False)

    def __post_init__(self):
        if self.kind == "abs":
            discrepancy = abs(self.value - self.oracle_value)
        elif self.kind == "upper":
            discrepancy = max(0.0, self.value - self.oracle_value)
        else:
            raise ValidationError(f"Unknown report kind '{self.kind}'")
        object.__setattr__(self, "discrepancy", float(discrepancy))
        object.__setattr__(self, "passed", bool(discrepancy <= self.tolerance))


def reports_frame(reports: Iterable[OracleReport]) -> pd.DataFrame:
    columns = ["name", "instance", "value", "oracle_value", "discrepancy", "tolerance", "kind", "passed"]
    return pd.DataFrame([asdict(r) for r in reports], columns=columns)


def write_reports(reports: Iterable[OracleReport], file_path: str):
    """Batch of reports as one CSV"""
    write_frame_atomic(reports_frame(reports), file_path)
