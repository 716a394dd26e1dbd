"""Figure rendering for the replication CSV outputs."""

from .render import (
    FIGURE_INPUTS,
    FORMATS,
    PANEL_COUNTS,
    SchemaMismatchError,
    build_figure,
    load_columns,
    render,
)

__version__ = "0.1.0"

__all__ = [
    "FIGURE_INPUTS",
    "FORMATS",
    "PANEL_COUNTS",
    "SchemaMismatchError",
    "build_figure",
    "load_columns",
    "render",
    "__version__",
]
