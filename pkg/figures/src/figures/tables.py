"""CSV tables as emitted by the gaialz command line.

Cells stay strings exactly as written; accessors convert on the way out,
so this layer never recomputes or reshapes what the primary emitted.
"""

import csv
from pathlib import Path


class FigureError(Exception):
    """Raised when a figure cannot be built from the given inputs."""


class MissingColumn(FigureError):
    """A required column is absent from a CSV header."""

    def __init__(self, column: str, path):
        self.column = column
        self.path = Path(path)
        super().__init__(f"column {column!r} missing from {self.path}")


class Table:
    """One CSV file: a header tuple plus string-valued rows."""

    def __init__(self, path):
        self.path = Path(path)
        with open(self.path, newline="") as handle:
            reader = csv.reader(handle)
            try:
                self.header = tuple(next(reader))
            except StopIteration:
                raise FigureError(f"{self.path} has no header row") from None
            self.rows = [tuple(row) for row in reader]

    def require(self, *columns: str) -> None:
        for name in columns:
            if name not in self.header:
                raise MissingColumn(name, self.path)

    def column(self, name: str) -> list:
        self.require(name)
        idx = self.header.index(name)
        return [row[idx] for row in self.rows]

    def floats(self, name: str) -> list:
        return [float(cell) for cell in self.column(name)]

    def probability_columns(self) -> list:
        """Header names of the form P_*, in file order."""
        return [name for name in self.header if name.startswith("P_")]
