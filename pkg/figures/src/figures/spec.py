"""What to draw: input tables, figure kind, labels, output path.

A spec loads its CSV files on construction and checks that every column
the chosen kind will reference is present, so a bad input fails before
any drawing starts.

Kinds and the tables they accept:

``sweep``
    One comparison table (probability against a sweep parameter), plus
    an optional zeros table whose ``value`` column becomes vertical
    marker lines.
``trace``
    Exactly one population-trace table (``time`` plus ``P_*`` columns).
``overlay``
    One or two tables, each either a comparison table (method points
    over oracle curves, with time on the x axis) or a trace table
    (continuous labeled curves underneath).
"""

from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .tables import FigureError, MissingColumn, Table

KINDS = ("sweep", "trace", "overlay")

COMPARE_COLUMNS = ("parameter", "observable", "P_gaia", "P_exact", "margin", "status")
ZERO_COLUMNS = ("kind", "value")


def _table_role(table: Table) -> str:
    """Classify an overlay input by its header."""
    if "observable" in table.header:
        table.require(*COMPARE_COLUMNS)
        return "compare"
    if "time" in table.header:
        if not table.probability_columns():
            raise MissingColumn("P_1", table.path)
        return "trace"
    raise MissingColumn("observable", table.path)


@dataclass(frozen=True)
class FigureSpec:
    kind: str
    csv_paths: tuple
    out_path: Path
    xlabel: Optional[str] = None
    ylabel: Optional[str] = None
    red_boundary: Optional[float] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise FigureError(
                f"unknown figure kind {self.kind!r}; expected one of {', '.join(KINDS)}"
            )
        paths = tuple(Path(p) for p in self.csv_paths)
        limit = 1 if self.kind == "trace" else 2
        if not 1 <= len(paths) <= limit:
            raise FigureError(
                f"{self.kind} takes "
                + ("exactly one CSV" if limit == 1 else "one or two CSVs")
                + f", got {len(paths)}"
            )
        object.__setattr__(self, "csv_paths", paths)
        object.__setattr__(self, "out_path", Path(self.out_path))
        tables = tuple(Table(p) for p in paths)
        object.__setattr__(self, "tables", tables)
        object.__setattr__(self, "roles", self._checked_roles(tables))

    def _checked_roles(self, tables) -> tuple:
        if self.kind == "sweep":
            tables[0].require(*COMPARE_COLUMNS)
            roles = ["compare"]
            if len(tables) == 2:
                tables[1].require(*ZERO_COLUMNS)
                roles.append("zeros")
            return tuple(roles)
        if self.kind == "trace":
            return self._trace_role(tables[0])
        return tuple(_table_role(t) for t in tables)

    @staticmethod
    def _trace_role(table: Table) -> tuple:
        table.require("time")
        if not table.probability_columns():
            raise MissingColumn("P_1", table.path)
        return ("trace",)
