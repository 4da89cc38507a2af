"""Geometric ground truth: the tessellation built by reflections in the
Poincare disc, with side-sharing adjacency and brute-force graph queries.

The base polygon is a regular p-gon centred at the origin with one vertex
on the positive x axis (p = 5 with interior angle pi/2, p = 7 with
interior angle 2*pi/3).  Tiles are generated breadth-first by reflecting
every tile in each of its sides; duplicates are merged by tile centre.
Vertex lists are kept counter-clockwise so side indices wind the same way
on every tile.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Iterable

MERGE_TOL = 1e-6     # Euclidean merge tolerance for tile centres
SOUND_FACTOR = 10.0  # distinct centres must be > SOUND_FACTOR * MERGE_TOL apart
_BUCKET = 4 * MERGE_TOL

VERTEX_ANGLE = {5: 4, 7: 3}  # q in the Schlafli symbol {p, q}


class DedupError(RuntimeError):
    """Two distinct tiles landed within the unsound merge band."""


@dataclass(frozen=True)
class DiscTile:
    vertices: tuple[complex, ...]
    center: complex
    ring: int


def circumradius(p: int) -> float:
    """Hyperbolic centre-to-vertex distance of the base polygon."""
    q = VERTEX_ANGLE[p]
    return math.acosh(
        (math.cos(math.pi / p) * math.cos(math.pi / q))
        / (math.sin(math.pi / p) * math.sin(math.pi / q))
    )


def base_polygon(p: int, reference_angle: float = 0.0) -> tuple[complex, ...]:
    r_eu = math.tanh(circumradius(p) / 2.0)
    return tuple(
        r_eu * cmath.exp(1j * (reference_angle + 2 * math.pi * k / p))
        for k in range(p)
    )


def side_reflector(z1: complex, z2: complex) -> Callable[[complex], complex]:
    """Reflection across the hyperbolic line through z1, z2.

    Diameters reflect across a Euclidean line; other geodesics invert in
    the circle through z1, z2 orthogonal to the unit circle.
    """
    det = z1.real * z2.imag - z2.real * z1.imag
    if abs(det) < 1e-13:
        u = (z2 - z1) / abs(z2 - z1)
        rot = u * u
        return lambda z: rot * z.conjugate()
    a = abs(z1) ** 2 + 1.0
    b = abs(z2) ** 2 + 1.0
    cx = (a * z2.imag - b * z1.imag) / (2.0 * det)
    cy = (b * z1.real - a * z2.real) / (2.0 * det)
    c = complex(cx, cy)
    r2 = abs(c) ** 2 - 1.0
    assert r2 > 0.0, "geodesic circle must be orthogonal to the unit circle"
    return lambda z: c + r2 / (z - c).conjugate()


class DiscBall:
    """All tiles within graph distance `radius` of the base tile."""

    def __init__(self, p: int, radius: int):
        if p not in VERTEX_ANGLE:
            raise ValueError("only p = 5 and p = 7 are supported")
        if radius < 0:
            raise ValueError("radius must be >= 0")
        if radius > 8:
            raise ValueError("desk-scale cap exceeded (radius <= 8)")
        self.p = p
        self.radius = radius
        self.tiles: list[DiscTile] = []
        self.adjacency: dict[tuple[int, int], tuple[int, int]] = {}
        self._buckets: dict[tuple[int, int], list[int]] = {}
        self._generate()

    # -- construction -------------------------------------------------

    def _lookup(self, center: complex) -> int | None:
        bx = round(center.real / _BUCKET)
        by = round(center.imag / _BUCKET)
        best = None
        for dx in (-1, 0, 1):
            for dy in (-1, 0, 1):
                for idx in self._buckets.get((bx + dx, by + dy), ()):
                    d = abs(self.tiles[idx].center - center)
                    if d < MERGE_TOL:
                        best = idx
                    elif d < SOUND_FACTOR * MERGE_TOL:
                        raise DedupError(
                            f"centres {d:.3e} apart: inside the unsound band "
                            f"({MERGE_TOL:.0e}, {SOUND_FACTOR * MERGE_TOL:.0e})"
                        )
        return best

    def _insert(self, tile: DiscTile) -> int:
        idx = len(self.tiles)
        self.tiles.append(tile)
        key = (round(tile.center.real / _BUCKET), round(tile.center.imag / _BUCKET))
        self._buckets.setdefault(key, []).append(idx)
        return idx

    def _generate(self) -> None:
        p = self.p
        base = DiscTile(base_polygon(p), 0j, 0)
        self._insert(base)
        frontier = [0]
        while frontier:
            next_frontier: list[int] = []
            for idx in frontier:
                tile = self.tiles[idx]
                spawn = tile.ring < self.radius
                for side in range(p):
                    if (idx, side) in self.adjacency:
                        continue
                    child = self._reflect(tile, side)
                    found = self._lookup(child.center)
                    if found is None:
                        if not spawn:
                            continue  # outside the ball
                        found = self._insert(child)
                        next_frontier.append(found)
                    # Locate the shared side in the stored orientation of the
                    # neighbour: an earlier discovery path may have left its
                    # vertex list cyclically rotated relative to `child`.
                    child_side = self._matching_side(found, tile, side)
                    prev = self.adjacency.get((found, child_side))
                    assert prev is None or prev == (idx, side), "adjacency clash"
                    self.adjacency[(idx, side)] = (found, child_side)
                    self.adjacency[(found, child_side)] = (idx, side)
            frontier = next_frontier

    def _reflect(self, tile: DiscTile, side: int) -> DiscTile:
        p = self.p
        v1 = tile.vertices[side]
        v2 = tile.vertices[(side + 1) % p]
        refl = side_reflector(v1, v2)
        # reversal keeps the vertex list counter-clockwise
        verts = tuple(refl(v) for v in reversed(tile.vertices))
        return DiscTile(verts, refl(tile.center), tile.ring + 1)

    def _matching_side(self, neighbor_idx: int, tile: DiscTile, side: int) -> int:
        """Side index of the edge shared with `tile` in the neighbour's list."""
        p = self.p
        v1 = tile.vertices[side]
        v2 = tile.vertices[(side + 1) % p]
        w = self.tiles[neighbor_idx].vertices
        # both polygons are counter-clockwise, so the shared edge is
        # traversed in opposite directions; take the nearest side and insist
        # it is unambiguous
        gaps = sorted(
            (abs(w[k] - v2) + abs(w[(k + 1) % p] - v1), k) for k in range(p)
        )
        if gaps[0][0] > MERGE_TOL or gaps[1][0] < SOUND_FACTOR * MERGE_TOL:
            raise AssertionError("ambiguous shared side on deduplicated neighbour")
        return gaps[0][1]

    # -- graph queries --------------------------------------------------

    def neighbors(self, idx: int) -> list[int]:
        return [
            self.adjacency[(idx, s)][0]
            for s in range(self.p)
            if (idx, s) in self.adjacency
        ]

    def bfs_distances(self, src: int) -> dict[int, int]:
        dist = {src: 0}
        queue = [src]
        for u in queue:  # list-as-queue; append preserves BFS order
            for v in self.neighbors(u):
                if v not in dist:
                    dist[v] = dist[u] + 1
                    queue.append(v)
        return dist

    def bfs_distance(self, t0: int, t1: int) -> int:
        if not (0 <= t0 < len(self.tiles) and 0 <= t1 < len(self.tiles)):
            raise KeyError("tile not in graph")
        return self.bfs_distances(t0)[t1]

    def certified_distance(self, t0: int, t1: int) -> int:
        """Ball distance, guaranteed equal to the whole-plane distance.

        A strictly shorter path of length L' <= L-1 from t0 stays within
        ring(t0) + L - 1, so if that bound is inside the ball no such path
        was missed.
        """
        d = self.bfs_distance(t0, t1)
        r0 = self.tiles[t0].ring
        r1 = self.tiles[t1].ring
        if min(r0, r1) + d - 1 > self.radius:
            raise ValueError(
                f"distance {d} between rings {r0},{r1} not certifiable "
                f"inside radius {self.radius}"
            )
        return d

    def ring_sizes(self, center: int = 0) -> list[int]:
        dist = self.bfs_distances(center)
        out = [0] * (max(dist.values()) + 1)
        for d in dist.values():
            out[d] += 1
        return out

    def geodesic_count(self, src: int, dst: int) -> int:
        """Number of shortest src -> dst paths, by layered BFS counting."""
        dist = self.bfs_distances(src)
        if dst not in dist:
            raise KeyError("target unreachable")
        ways = {src: 1}
        order = sorted(dist, key=dist.__getitem__)
        for u in order:
            if u == src:
                continue
            ways[u] = sum(
                ways.get(v, 0) for v in self.neighbors(u) if dist[v] == dist[u] - 1
            )
        return ways[dst]

    def interior(self) -> list[int]:
        """Tiles with a complete neighbourhood (every side matched)."""
        return [
            i
            for i in range(len(self.tiles))
            if all((i, s) in self.adjacency for s in range(self.p))
        ]

    def check_dedup_soundness(self) -> None:
        """Re-run the near-coincidence scan over all retained tiles."""
        for tile in self.tiles:
            bx = round(tile.center.real / _BUCKET)
            by = round(tile.center.imag / _BUCKET)
            hits = 0
            for dx in (-1, 0, 1):
                for dy in (-1, 0, 1):
                    for idx in self._buckets.get((bx + dx, by + dy), ()):
                        d = abs(self.tiles[idx].center - tile.center)
                        if d < MERGE_TOL:
                            hits += 1
                        elif d < SOUND_FACTOR * MERGE_TOL:
                            raise DedupError("unsound near-coincidence")
            assert hits == 1, "duplicate centres survived deduplication"


def generate_disc_ball(p: int, radius: int) -> DiscBall:
    """Convenience constructor used by the combinatorial layer."""
    return DiscBall(p, radius)
