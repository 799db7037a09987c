"""Figures from gaialz CSV output. No physics is computed here."""

from .render import build_figure, render
from .spec import FigureSpec
from .tables import FigureError, MissingColumn, Table

__all__ = [
    "FigureError",
    "FigureSpec",
    "MissingColumn",
    "Table",
    "build_figure",
    "render",
]
