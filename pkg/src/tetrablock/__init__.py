"""Block-space index maps, layouts and cost models for tetrahedral domains."""

from .core import (
    MAX_N,
    BoxCoord,
    Coord3,
    PyramidShape,
    box_map,
    g_map,
    rank3,
    tetra,
    tri,
    unrank2,
    unrank_layer,
)
from .costmodel import WarpModel
from .layout import BlockedLayout, BlockGrid, LinearLayout, make_layout

__version__ = "0.1.0"

__all__ = [
    "MAX_N",
    "BoxCoord",
    "Coord3",
    "PyramidShape",
    "box_map",
    "g_map",
    "rank3",
    "tetra",
    "tri",
    "unrank2",
    "unrank_layer",
    "WarpModel",
    "BlockGrid",
    "BlockedLayout",
    "LinearLayout",
    "make_layout",
]
