"""Carpet coordinates and the pentagrid <-> heptagrid correspondence.

A nested chain of trees F_n is anchored in sector 1 of a ball: F_1 is the
whole sector tree and, for n <= 0, the root of F_(n-1) is the middle son
of the root of F_n.  A tile's carpet coordinate is (n, nu) where F_n is
the smallest chain member containing the tile and nu its breadth-first
number inside F_n.  Tiles with equal coordinates correspond across the
two grids, so the bijection itself is coordinate equality.
"""

from __future__ import annotations

from typing import NamedTuple

from .fibtree import number_to_path, path_to_number
from .grid import GridBall, TileId

CHAIN_SECTOR = 1  # the chain is anchored on sector 1
CHAIN_TOP = 1     # index of the whole sector tree in the chain


class CarpetCoord(NamedTuple):
    n: int
    nu: int

    def text(self) -> str:
        return f"({self.n},{self.nu})"


def parse_carpet(text: str) -> CarpetCoord:
    body = text.strip().lstrip("(").rstrip(")")
    a, b = body.split(",")
    return CarpetCoord(int(a), int(b))


def chain_embed(nu: int, steps: int) -> int:
    """Number of the F_n node `nu` inside F_(n+steps).

    Re-rooting k steps up the chain prepends k middle-son hops to the
    node's tree path.
    """
    if steps < 0:
        raise ValueError("steps must be >= 0")
    path = number_to_path(nu)
    return path_to_number((1,) * steps + path)


def carpet_coord(ball: GridBall, tile: TileId) -> CarpetCoord:
    """Carpet coordinate of a sector-1 tile; minimal n is enforced.

    The tiles of F_(CHAIN_TOP - k) are exactly those whose in-sector path
    starts with k middle-son steps, so the chain index is fixed by the
    longest all-1 prefix of the path.
    """
    if tile not in ball.ring:
        raise ValueError(f"{tile.text()} is not in the ball")
    if tile.sector != CHAIN_SECTOR:
        raise ValueError(
            f"{tile.text()} lies outside every chain tree (sector {CHAIN_SECTOR} only)"
        )
    run = 0
    while run < len(tile.path) and tile.path[run] == 1:
        run += 1
    n = CHAIN_TOP - run
    nu = path_to_number(tile.path[run:])
    return CarpetCoord(n, nu)


def carpet_tile(ball: GridBall, coord: CarpetCoord) -> TileId:
    """Inverse of :func:`carpet_coord` on the covered region."""
    run = CHAIN_TOP - coord.n
    if run < 0:
        raise ValueError(f"chain index {coord.n} above the anchored top {CHAIN_TOP}")
    if coord.nu < 1:
        raise ValueError("node numbers start at 1")
    sub = number_to_path(coord.nu)
    if sub[:1] == (1,):
        raise ValueError(
            f"({coord.n},{coord.nu}) is not minimal: the node lies in a deeper chain tree"
        )
    tile = TileId(CHAIN_SECTOR, (1,) * run + sub)
    if tile not in ball.ring:
        raise ValueError(f"{tile.text()} is outside the ball")
    return tile


def penta_to_hepta(coord: CarpetCoord) -> CarpetCoord:
    """The correspondence is coordinate equality."""
    return coord


def hepta_to_penta(coord: CarpetCoord) -> CarpetCoord:
    return coord


def transport(src: GridBall, dst: GridBall, tile: TileId) -> TileId:
    """Image of a sector-1 tile of `src` in `dst` (same carpet coordinate)."""
    return carpet_tile(dst, carpet_coord(src, tile))
