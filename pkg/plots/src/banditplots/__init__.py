"""Regret-curve figures from experiment aggregate CSVs."""

from .figspec import FigureSpec, parse_figure_spec
from .render import CsvContractError, read_aggregate_csv, render_regret_figure

__all__ = [
    "CsvContractError",
    "FigureSpec",
    "parse_figure_spec",
    "read_aggregate_csv",
    "render_regret_figure",
]
