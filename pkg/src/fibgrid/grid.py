"""Combinatorial model of the pentagrid and ternary heptagrid.

Side numbering per cell: side 1 faces the father (for the central cell,
side k faces the root of sector k), the remaining sides run 2..p
counter-clockwise.  Every directed crossing between adjacent cells is an
arc digit: plain and barred digits are mirror pairs, bold digits join the
central cell to the sector roots.

The ball is induced from the geometric oracle (`build_ball`): tiles come
from disc reflections, rings from BFS, fathers from the local up-side
rule, and the Fibonacci-tree labels are then read off.  An independent
pure-combinatorial constructor (`combinatorial_ball`) rebuilds the same
labelled adjacency from the tree production rules alone, so the two can
be compared arc by arc.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple

from .fibtree import (
    SON_STATUS,
    NodeStatus,
    arity,
    digits_to_path,
    path_to_digits,
    path_to_number,
    status_of,
)
from .oracle import DiscBall

# ---------------------------------------------------------------------------
# Tilings and arc digits
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Tiling:
    p: int  # 5 = pentagrid, 7 = ternary heptagrid

    def __post_init__(self):
        if self.p not in (5, 7):
            raise ValueError("p must be 5 or 7")

    @property
    def name(self) -> str:
        return "penta" if self.p == 5 else "hepta"


PENTA = Tiling(5)
HEPTA = Tiling(7)


def tiling_from_name(name: str) -> Tiling:
    try:
        return {"penta": PENTA, "hepta": HEPTA, "5": PENTA, "7": HEPTA}[name]
    except KeyError:
        raise ValueError(f"unknown tiling {name!r}") from None


# (input side, output side) of each barred digit; plain digits are mirrors.
_BARRED_PAIRS: dict[int, dict[int, tuple[int, int]]] = {
    7: {1: (1, 3), 2: (1, 4), 3: (1, 5), 4: (2, 6), 5: (2, 7), 6: (3, 7)},
    5: {1: (1, 2), 2: (1, 3), 3: (1, 4), 4: (2, 5)},
}


@dataclass(frozen=True)
class ArcDigit:
    polarity: str  # "plain" | "barred" | "bold"
    value: int
    pair: tuple[int, int]  # (input side, output side)

    def mirror(self) -> "ArcDigit":
        swapped = (self.pair[1], self.pair[0])
        if self.polarity == "bold":
            return ArcDigit("bold", self.value, swapped)
        return ArcDigit(
            "barred" if self.polarity == "plain" else "plain", self.value, swapped
        )

    @property
    def input(self) -> int:
        return self.pair[0]

    @property
    def output(self) -> int:
        return self.pair[1]

    def text(self) -> str:
        prefix = {"plain": "", "barred": "~", "bold": "*"}[self.polarity]
        return f"{prefix}{self.value}"


def arc_table(t: Tiling) -> list[ArcDigit]:
    """All plain and barred digits plus the p bold digits."""
    out: list[ArcDigit] = []
    for value, pair in _BARRED_PAIRS[t.p].items():
        out.append(ArcDigit("barred", value, pair))
        out.append(ArcDigit("plain", value, (pair[1], pair[0])))
    for i in range(1, t.p + 1):
        out.append(ArcDigit("bold", i, (i, 1)))
    return out


def classify_pair(t: Tiling, pair: tuple[int, int]) -> ArcDigit:
    """Table lookup for a non-central (input, output) side pair."""
    for value, bp in _BARRED_PAIRS[t.p].items():
        if pair == bp:
            return ArcDigit("barred", value, pair)
        if pair == (bp[1], bp[0]):
            return ArcDigit("plain", value, pair)
    raise ValueError(f"side pair {pair} matches no digit of the {t.name} table")


def digit_from_text(t: Tiling, text: str) -> ArcDigit:
    text = text.strip()
    polarity = "plain"
    if text.startswith("~"):
        polarity, text = "barred", text[1:]
    elif text.startswith("*"):
        polarity, text = "bold", text[1:]
    value = int(text)
    if polarity == "bold":
        if not 1 <= value <= t.p:
            raise ValueError(f"bold digit {value} out of range")
        return ArcDigit("bold", value, (value, 1))
    pair = _BARRED_PAIRS[t.p].get(value)
    if pair is None:
        raise ValueError(f"digit {value} out of range for {t.name}")
    return ArcDigit(polarity, value, pair if polarity == "barred" else (pair[1], pair[0]))


# ---------------------------------------------------------------------------
# Tile identifiers
# ---------------------------------------------------------------------------


class TileId(NamedTuple):
    sector: int  # 0 = central cell
    path: tuple[int, ...]  # son indices within the sector tree

    def text(self) -> str:
        if self.sector == 0:
            return "0"
        digits = path_to_digits(self.path)
        return "*%d%s" % (self.sector, "".join(str(d) for d in digits))


CENTER = TileId(0, ())


def tile_from_text(text: str) -> TileId:
    """Parse "0" or "*<sector><plain digits>" (spaces allowed)."""
    text = "".join(text.split())
    if text == "0":
        return CENTER
    if not text.startswith("*"):
        raise ValueError(f"tile text must be '0' or start with '*': {text!r}")
    sector = int(text[1])
    digits = tuple(int(ch) for ch in text[2:])
    return TileId(sector, digits_to_path(digits))


def tile_status(tile: TileId) -> NodeStatus:
    if tile.sector == 0:
        raise ValueError("the central cell has no tree status")
    return status_of(tile.path)


def tile_number(tile: TileId) -> int:
    """Breadth-first node number of the tile inside its sector tree."""
    if tile.sector == 0:
        raise ValueError("the central cell is outside the sector trees")
    return path_to_number(tile.path)


# ---------------------------------------------------------------------------
# Canonical side layouts (derived from the digit table)
#
# For every cell, side 1 faces the father.  The remaining sides follow one
# fixed counter-clockwise pattern per (p, status):
#
#   p=7 3-node: 2 ring-pred | 3,4,5 sons | 6 nephew          | 7 ring-succ
#   p=7 2-node: 2 co-father | 3 ring-pred | 4,5 sons | 6 nephew | 7 ring-succ
#   p=5 3-node: 2,3,4 sons | 5 nephew
#   p=5 2-node: 2 co-father | 3,4 sons | 5 nephew
#
# "co-father" is the second cell one ring up that shares the leftmost-son
# corner; "nephew" is the leftmost son of the ring successor.
# ---------------------------------------------------------------------------


def son_sides(p: int, status: NodeStatus) -> tuple[int, ...]:
    if p == 7:
        return (3, 4, 5) if status is NodeStatus.THREE else (4, 5)
    return (2, 3, 4) if status is NodeStatus.THREE else (3, 4)


def nephew_side(p: int) -> int:
    return p - 1 if p == 7 else p  # 6 for hepta, 5 for penta


# ---------------------------------------------------------------------------
# GridBall
# ---------------------------------------------------------------------------


class GridBall:
    """Finite ball with labelled tiles and side-numbered adjacency."""

    def __init__(
        self,
        tiling: Tiling,
        radius: int,
        adjacency: dict[tuple[TileId, int], tuple[TileId, int]],
        ring: dict[TileId, int],
        centers: dict[TileId, complex] | None = None,
        corners: dict[TileId, tuple[complex, ...]] | None = None,
    ):
        self.tiling = tiling
        self.radius = radius
        self.adjacency = adjacency
        self.ring = ring
        self.centers = centers or {}
        self.corners = corners or {}
        self.tiles: list[TileId] = sorted(ring, key=lambda t: (ring[t], t.sector, t.path))
        self.boundary = {t for t, r in ring.items() if r == radius}

    # -- basic queries -------------------------------------------------

    @property
    def p(self) -> int:
        return self.tiling.p

    def status(self, tile: TileId) -> NodeStatus:
        return tile_status(tile)

    def is_boundary(self, tile: TileId) -> bool:
        return tile in self.boundary

    def is_interior(self, tile: TileId) -> bool:
        return all((tile, s) in self.adjacency for s in range(1, self.p + 1))

    def neighbor(self, tile: TileId, side: int) -> tuple[TileId, int] | None:
        return self.adjacency.get((tile, side))

    def neighbors(self, tile: TileId) -> list[tuple[int, TileId, int]]:
        out = []
        for s in range(1, self.p + 1):
            hit = self.adjacency.get((tile, s))
            if hit is not None:
                out.append((s, hit[0], hit[1]))
        return out

    def output_table(self, tile: TileId) -> dict[int, int]:
        """side -> side number of the same edge in the neighbouring cell."""
        if not self.is_interior(tile):
            raise ValueError(f"{tile.text()} has an incomplete neighbourhood")
        return {s: self.adjacency[(tile, s)][1] for s in range(1, self.p + 1)}

    def arc(self, tile: TileId, side: int) -> ArcDigit:
        """Digit of the directed crossing leaving `tile` through `side`."""
        hit = self.adjacency.get((tile, side))
        if hit is None:
            raise ValueError(f"no neighbour on side {side} of {tile.text()}")
        other, other_side = hit
        if tile.sector == 0:
            return ArcDigit("bold", side, (side, 1))
        if other.sector == 0:
            return ArcDigit("bold", other_side, (1, other_side))
        return classify_pair(self.tiling, (side, other_side))

    def father_arc(self, tile: TileId) -> tuple[TileId, int]:
        """(father tile, father's side facing `tile`)."""
        hit = self.adjacency.get((tile, 1))
        if hit is None:
            raise ValueError(f"father of {tile.text()} not inside the ball")
        return hit

    def sons_of(self, tile: TileId) -> list[TileId]:
        if tile.sector == 0:
            return [TileId(s, ()) for s in range(1, self.p + 1)]
        return [TileId(tile.sector, tile.path + (s,)) for s in range(arity(self.status(tile)))]

    # -- serialization ---------------------------------------------------

    def to_dict(self) -> dict:
        tiles = []
        for t in self.tiles:
            entry = {
                "sector": t.sector,
                "path": list(t.path),
                "status": 0 if t.sector == 0 else int(self.status(t)),
                "boundary": t in self.boundary,
            }
            tiles.append(entry)
        adjacency = []
        for (t, s), (u, s2) in sorted(
            self.adjacency.items(), key=lambda kv: (kv[0][0].sector, kv[0][0].path, kv[0][1])
        ):
            adjacency.append(
                {
                    "tile": t.text(),
                    "side": s,
                    "neighbor_tile": u.text(),
                    "neighbor_side": s2,
                }
            )
        return {
            "tiling": self.tiling.name,
            "radius": self.radius,
            "tiles": tiles,
            "adjacency": adjacency,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":")) + "\n"

    @classmethod
    def from_dict(cls, data: dict) -> "GridBall":
        tiling = tiling_from_name(data["tiling"])
        adjacency: dict[tuple[TileId, int], tuple[TileId, int]] = {}
        for rec in data["adjacency"]:
            t = tile_from_text(rec["tile"])
            u = tile_from_text(rec["neighbor_tile"])
            adjacency[(t, rec["side"])] = (u, rec["neighbor_side"])
        ring: dict[TileId, int] = {}
        for rec in data["tiles"]:
            t = TileId(rec["sector"], tuple(rec["path"]))
            ring[t] = 0 if t.sector == 0 else len(t.path) + 1
        return cls(tiling, data["radius"], adjacency, ring)

    @classmethod
    def from_json(cls, text: str) -> "GridBall":
        return cls.from_dict(json.loads(text))


# ---------------------------------------------------------------------------
# Induction from the geometric oracle
# ---------------------------------------------------------------------------


def build_ball(t: Tiling, radius: int, reference_angle: float = 0.0) -> GridBall:
    """Construct the labelled ball from the disc tessellation.

    Rings come from BFS over side-sharing adjacency.  A tile with two
    neighbours one ring up is a corner: its up-sides are consecutive in
    its counter-clockwise vertex order and the father is the earlier of
    the two.  Statuses (corner = 2-node), sector numbers and tree paths
    are then induced and the side numbering is rotated so side 1 faces
    the father.
    """
    disc = DiscBall(t.p, radius)
    p = t.p
    n = len(disc.tiles)
    ring = [tile.ring for tile in disc.tiles]
    if radius == 0:
        return GridBall(
            t,
            0,
            {},
            {CENTER: 0},
            {CENTER: disc.tiles[0].center},
            {CENTER: disc.tiles[0].vertices},
        )

    father_side: list[int | None] = [None] * n  # geometric side toward father
    for i in range(n):
        if ring[i] == 0:
            continue
        ups = [
            s
            for s in range(p)
            if (i, s) in disc.adjacency and ring[disc.adjacency[(i, s)][0]] == ring[i] - 1
        ]
        if len(ups) == 1:
            father_side[i] = ups[0]
        elif len(ups) == 2:
            a, b = ups
            if (a + 1) % p == b:
                father_side[i] = a
            elif (b + 1) % p == a:
                father_side[i] = b
            else:
                raise AssertionError("up-sides of a corner are not consecutive")
        else:
            raise AssertionError(f"tile has {len(ups)} upward neighbours")

    # side renumbering: geometric side g of tile i becomes
    # ((g - father_side[i]) mod p) + 1; the central cell is rotated so that
    # side k faces the k-th sector root (sectors counter-clockwise from the
    # reference direction).
    def angle_of(idx: int) -> float:
        z = disc.tiles[idx].center
        a = (cmath.phase(z) - reference_angle) % (2 * math.pi)
        return a

    roots = sorted(
        (i for i in range(n) if ring[i] == 1), key=angle_of
    )  # sector 1.. order
    root_sector = {idx: k + 1 for k, idx in enumerate(roots)}
    center_geo_side = {}
    for s in range(p):
        j, _ = disc.adjacency[(0, s)]
        center_geo_side[root_sector[j]] = s

    def renumber(idx: int, geo_side: int) -> int:
        if ring[idx] == 0:
            # choose rotation so that geometric side of sector-1 root maps to 1
            base = center_geo_side[1]
            offset = (geo_side - base) % p
            # sides must follow sector order counter-clockwise; verified below
            return offset + 1
        return ((geo_side - father_side[idx]) % p) + 1

    # verify the central rotation maps side k to sector-k root
    for k in range(1, p + 1):
        geo = center_geo_side[k]
        if renumber(0, geo) != k:
            raise AssertionError("sector roots are not in counter-clockwise order")

    # fathers and sons (per tile, sons sorted by the father's side number)
    sons_by_father: dict[int, list[tuple[int, int]]] = {}
    for i in range(n):
        fs = father_side[i]
        if fs is None:
            continue
        f_idx, f_geo = disc.adjacency[(i, fs)]
        sons_by_father.setdefault(f_idx, []).append((renumber(f_idx, f_geo), i))

    # sector and path assignment, breadth-first
    ids: list[TileId | None] = [None] * n
    ids[0] = CENTER
    for idx in roots:
        ids[idx] = TileId(root_sector[idx], ())
    order = sorted(range(n), key=lambda i: ring[i])
    for i in order:
        if ring[i] < 1 or ids[i] is None:
            continue
        tid = ids[i]
        listed = sorted(sons_by_father.get(i, ()))
        expect = son_sides(p, status_of(tid.path))
        if ring[i] < radius:
            got = tuple(side for side, _ in listed)
            if got != expect:
                raise AssertionError(
                    f"sons of {tid.text()} on sides {got}, expected {expect}"
                )
        for rank, (side, child) in enumerate(listed):
            ids[child] = TileId(tid.sector, tid.path + (rank,))

    assert all(ids[i] is not None for i in range(n)), "unlabelled tile"

    adjacency: dict[tuple[TileId, int], tuple[TileId, int]] = {}
    for (i, gs), (j, gs2) in disc.adjacency.items():
        adjacency[(ids[i], renumber(i, gs))] = (ids[j], renumber(j, gs2))

    ring_map = {ids[i]: ring[i] for i in range(n)}
    centers = {ids[i]: disc.tiles[i].center for i in range(n)}
    corners = {ids[i]: disc.tiles[i].vertices for i in range(n)}
    return GridBall(t, radius, adjacency, ring_map, centers, corners)


# ---------------------------------------------------------------------------
# Independent combinatorial constructor
# ---------------------------------------------------------------------------


def combinatorial_ball(t: Tiling, radius: int) -> GridBall:
    """Rebuild the labelled adjacency from the tree rules alone.

    Ring k+1 is the concatenation, in ring order, of every ring-k tile's
    sons; the leftmost son of a tile T is the corner it shares with the
    ring predecessor of T.  Lateral arcs then follow the fixed layouts:
    nephew arcs pair side `nephew_side` with the corner's side 2, and (for
    the heptagrid) consecutive ring tiles share sides 7 and 2 (3 when the
    successor is a corner).
    """
    p = t.p
    adjacency: dict[tuple[TileId, int], tuple[TileId, int]] = {}
    ring_map: dict[TileId, int] = {CENTER: 0}

    def connect(a: TileId, sa: int, b: TileId, sb: int) -> None:
        prev = adjacency.get((a, sa))
        assert prev is None or prev == (b, sb), f"clash at {a.text()} side {sa}"
        adjacency[(a, sa)] = (b, sb)
        adjacency[(b, sb)] = (a, sa)

    if radius == 0:
        return GridBall(t, 0, {}, {CENTER: 0})

    rings: list[list[TileId]] = [[CENTER]]
    roots = [TileId(s, ()) for s in range(1, p + 1)]
    rings.append(roots)
    for k, root in enumerate(roots):
        ring_map[root] = 1
        connect(CENTER, k + 1, root, 1)
    if p == 7:
        for k, root in enumerate(roots):
            succ = roots[(k + 1) % p]
            connect(root, 7, succ, 2)

    for r in range(1, radius):
        current = rings[r]
        nxt: list[TileId] = []
        corner_flags: list[bool] = []
        for i, tile in enumerate(current):
            st = status_of(tile.path)
            sides = son_sides(p, st)
            pred = current[i - 1]
            sons = [TileId(tile.sector, tile.path + (s,)) for s in range(arity(st))]
            for son, side in zip(sons, sides):
                ring_map[son] = r + 1
                connect(tile, side, son, 1)
            # the leftmost son is the corner shared with the ring predecessor
            connect(pred, nephew_side(p), sons[0], 2)
            nxt.extend(sons)
            corner_flags.extend([True] + [False] * (len(sons) - 1))
        if p == 7:
            m = len(nxt)
            for i, tile in enumerate(nxt):
                succ = nxt[(i + 1) % m]
                connect(tile, 7, succ, 3 if corner_flags[(i + 1) % m] else 2)
        rings.append(nxt)

    return GridBall(t, radius, adjacency, ring_map)


def isomorphic(a: GridBall, b: GridBall) -> bool:
    """Tile-by-tile, side-by-side equality of the labelled adjacency.

    Arcs with an endpoint missing from either ball (boundary truncation
    differences) are ignored; every arc present in both must agree.
    """
    if a.tiling != b.tiling or a.radius != b.radius:
        return False
    if set(a.ring) != set(b.ring) or any(a.ring[t] != b.ring[t] for t in a.ring):
        return False
    keys = set(a.adjacency) & set(b.adjacency)
    for key in keys:
        if a.adjacency[key] != b.adjacency[key]:
            return False
    # every pair of tiles present in both balls must carry the same arcs
    for key in set(a.adjacency) ^ set(b.adjacency):
        source = a.adjacency if key in a.adjacency else b.adjacency
        if source[key][0] in a.ring and source[key][0] in b.ring:
            return False
    return True


# ---------------------------------------------------------------------------
# Wang-style edge numbering of the pentagrid
# ---------------------------------------------------------------------------


class WangNumbering:
    """Global numbering of pentagrid edges by digits 1..5.

    Both pentagons incident to an edge agree on its number.  Around a
    positively oriented cell the numbers increase counter-clockwise; each
    crossing flips the orientation.  The construction fails on the
    heptagrid (odd cycles), which `wang_numbering` rejects.
    """

    def __init__(self, ball: GridBall, seed_tile: TileId, seed_side: int):
        if ball.p != 5:
            raise ValueError("edge numbering is defined for the pentagrid only")
        if not 1 <= seed_side <= 5:
            raise ValueError("seed side out of range")
        self.ball = ball
        self.seed_tile = seed_tile
        self.seed_side = seed_side
        # per-tile: (anchor_side, anchor_value, direction)
        self._frames: dict[TileId, tuple[int, int, int]] = {}
        self._propagate()

    def _propagate(self) -> None:
        ball = self.ball
        self._frames[self.seed_tile] = (self.seed_side, 1, +1)
        queue = [self.seed_tile]
        seen = {self.seed_tile}
        for tile in queue:
            for side in range(1, 6):
                hit = ball.adjacency.get((tile, side))
                if hit is None:
                    continue
                other, other_side = hit
                value = self.edge_number(tile, side)
                direction = -self._frames[tile][2]
                frame = (other_side, value, direction)
                if other in self._frames:
                    a, v, d = self._frames[other]
                    ok = d == direction and self._number(frame, a) == self._number(
                        self._frames[other], a
                    )
                    if not ok:
                        raise AssertionError("edge numbering conflict")
                else:
                    self._frames[other] = frame
                if other not in seen:
                    seen.add(other)
                    queue.append(other)

    @staticmethod
    def _number(frame: tuple[int, int, int], side: int) -> int:
        anchor_side, anchor_value, direction = frame
        return ((anchor_value - 1) + direction * (side - anchor_side)) % 5 + 1

    def edge_number(self, tile: TileId, side: int) -> int:
        return self._number(self._frames[tile], side)

    def orientation(self, tile: TileId) -> int:
        return self._frames[tile][2]

    def check(self) -> None:
        """Every edge must carry one number seen from both sides."""
        for (tile, side), (other, other_side) in self.ball.adjacency.items():
            if self.edge_number(tile, side) != self.edge_number(other, other_side):
                raise AssertionError("edge number differs between incident cells")


def wang_numbering(ball: GridBall, seed_tile: TileId = CENTER, seed_side: int = 1) -> WangNumbering:
    return WangNumbering(ball, seed_tile, seed_side)


def orientation(ball: GridBall, tile: TileId, numbering: WangNumbering | None = None) -> int:
    """+1 for the central cell, flipped at every crossing."""
    if ball.p != 5:
        raise ValueError("orientation is defined for the pentagrid only")
    if numbering is not None:
        return numbering.orientation(tile)
    return 1 if ball.ring[tile] % 2 == 0 else -1
