"""Fibonacci-tree coordinates, arc-digit routing and a geometric oracle
for the pentagrid {5,4} and the ternary heptagrid {7,3}."""

__version__ = "0.1.0"

from .fibtree import NodeStatus
from .grid import (
    CENTER,
    HEPTA,
    PENTA,
    ArcDigit,
    GridBall,
    TileId,
    Tiling,
    arc_table,
    build_ball,
    combinatorial_ball,
    tile_from_text,
    wang_numbering,
)
from .numeration import FibConvention, fib, level_count, zeck_decode, zeck_encode
from .routing import RelativeFrame, broadcast_addresses, next_arc, reply_route
from .simulator import SyncSimulator, traffic_bound, transmission_cost

__all__ = [
    "ArcDigit",
    "CENTER",
    "FibConvention",
    "GridBall",
    "HEPTA",
    "NodeStatus",
    "PENTA",
    "RelativeFrame",
    "SyncSimulator",
    "TileId",
    "Tiling",
    "arc_table",
    "broadcast_addresses",
    "build_ball",
    "combinatorial_ball",
    "fib",
    "level_count",
    "next_arc",
    "reply_route",
    "tile_from_text",
    "traffic_bound",
    "transmission_cost",
    "wang_numbering",
    "zeck_decode",
    "zeck_encode",
]
