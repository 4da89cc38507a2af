"""Relative trees, address accumulation and the two-stack reply walk.

A cell c that emits a public message acts as the centre of a *relative*
system: BFS levels around c play the role of rings, relative corners
(two neighbours one level closer to c) are relative 2-nodes, and every
other cell hangs below its unique relative father.  Addresses collect
the absolute arc digits along the relative branch, so each target
receives the message exactly once, along a geodesic.

A relay entered through side beta0 finds its relative son s through side

    alpha1 = 1 + ((beta0 - 1) + 2 + (p - 5)/2 + s - st) mod p

where st is the encoded relay status.  The status encoding is a
calibration constant: requiring exact agreement with the ball's
father-to-son arcs fixes 3-node -> 1, 2-node -> 0 (`STATUS_TERM`), and
`calibrate_status_encoding` re-derives it from scratch.
"""

from __future__ import annotations

from typing import Iterable, NamedTuple

from .fibtree import NodeStatus, son_to_digit
from .grid import (
    ArcDigit,
    GridBall,
    TileId,
    WangNumbering,
    classify_pair,
)

#: Encoded status term used by the side formula (calibrated, frozen).
STATUS_TERM: dict[NodeStatus, int] = {NodeStatus.THREE: 1, NodeStatus.TWO: 0}


def arc_side_formula(p: int, beta0: int, s: int, st_r: int) -> int:
    """The side formula exactly as written, st_r taken as a raw integer."""
    return 1 + ((beta0 - 1) + 2 + (p - 5) // 2 + s - st_r) % p


def special_digit_formula(delta0: int, s: int, st_r: int, orient: int) -> int:
    """The pentagrid edge-number formula, st_r taken as a raw integer."""
    return 1 + ((delta0 - 1) + orient * (2 + s - st_r)) % 5


class ArcStep(NamedTuple):
    source: TileId
    digit: ArcDigit  # pair = (side in source, side in target)
    target: TileId


ArcAddress = list[ArcStep]


def address_text(address: Iterable[ArcStep]) -> str:
    return "".join(step.digit.text() for step in address)


def reverse_digit_text(address: list[ArcStep]) -> str:
    """Digit string of the reversed walk: reversed order, mirrored digits."""
    return "".join(step.digit.mirror().text() for step in reversed(address))


def next_arc(
    ball: GridBall,
    relay: TileId,
    beta0: int,
    s: int,
    status: NodeStatus,
) -> ArcDigit:
    """Arc joining `relay` to its relative son s, as an absolute digit.

    beta0 is the side through which the relay was entered; the produced
    side must not equal it (that would signal a miscalibration), and the
    output side is read from the relay's neighbour.
    """
    if s >= (3 if status is NodeStatus.THREE else 2) or s < 0:
        raise ValueError(f"son index {s} invalid for a {int(status)}-node relay")
    alpha1 = arc_side_formula(ball.p, beta0, s, STATUS_TERM[status])
    if alpha1 == beta0:
        raise ValueError("computed arc folds back onto the entry side")
    hit = ball.neighbor(relay, alpha1)
    if hit is None:
        raise ValueError(f"side {alpha1} of {relay.text()} leaves the ball")
    _, beta1 = hit
    return classify_pair(ball.tiling, (alpha1, beta1))


# ---------------------------------------------------------------------------
# Relative frames
# ---------------------------------------------------------------------------


class RelativeFrame:
    """The tree system re-rooted at an interior cell of a ball."""

    def __init__(self, ball: GridBall, center: TileId):
        if center not in ball.ring:
            raise ValueError(f"{center.text()} is not in the ball")
        if not ball.is_interior(center):
            raise ValueError(f"{center.text()} has an incomplete neighbourhood")
        self.ball = ball
        self.center = center
        p = ball.p

        self.level: dict[TileId, int] = {center: 0}
        order: list[TileId] = [center]
        for tile in order:
            for _, nb, _ in ball.neighbors(tile):
                if nb not in self.level:
                    self.level[nb] = self.level[tile] + 1
                    order.append(nb)

        # father assignment: unique up, or the counter-clockwise earlier of
        # the two consecutive up-sides of a relative corner
        self.father: dict[TileId, tuple[TileId, int, int]] = {}  # t -> (f, side_in_t, side_in_f)
        self.status: dict[TileId, NodeStatus] = {}
        self.trusted: dict[TileId, bool] = {center: True}
        for tile in order:
            if tile == center:
                continue
            ups = [
                (s, nb, ns)
                for s, nb, ns in ball.neighbors(tile)
                if self.level[nb] == self.level[tile] - 1
            ]
            self.trusted[tile] = ball.is_interior(tile)
            if self.level[tile] == 1:
                # sons of the relative centre; numbered by the centre's sides
                side_in_t = ups[0][0]
                self.father[tile] = (center, side_in_t, ups[0][2])
                self.status[tile] = NodeStatus.THREE
                continue
            if len(ups) == 1:
                s, nb, ns = ups[0]
                self.father[tile] = (nb, s, ns)
                self.status[tile] = NodeStatus.THREE
            elif len(ups) == 2:
                (sa, na, nsa), (sb, nb_, nsb) = ups  # sa < sb
                if sb == sa + 1:
                    chosen = (na, sa, nsa)  # the side followed CCW by the other
                elif sa == 1 and sb == p:
                    chosen = (nb_, sb, nsb)
                else:
                    self.trusted[tile] = False
                    self.status[tile] = NodeStatus.TWO
                    self.father[tile] = (na, sa, nsa)
                    continue
                self.father[tile] = chosen
                self.status[tile] = NodeStatus.TWO
            else:
                # boundary artefact; never trusted
                self.trusted[tile] = False
                self.status[tile] = NodeStatus.THREE
                if ups:
                    s, nb, ns = ups[0]
                    self.father[tile] = (nb, s, ns)

        # sons ordered by side offset from the entry side
        self.sons: dict[TileId, list[TileId]] = {t: [] for t in self.level}
        for tile in order:
            if tile == center:
                continue
            f, _, side_in_f = self.father[tile]
            self.sons[f].append(tile)
        for tile, lst in self.sons.items():
            entry = self.entry_side(tile)
            lst.sort(key=lambda ch: self._son_sort_key(tile, ch, entry))

    def _son_sort_key(self, tile: TileId, child: TileId, entry: int) -> int:
        side_in_tile = self.father[child][2]
        if tile == self.center:
            return side_in_tile  # relative sectors follow the centre's sides
        return (side_in_tile - entry) % self.ball.p

    def entry_side(self, tile: TileId) -> int:
        """Side of `tile` on the arc towards the relative centre."""
        if tile == self.center:
            return 0
        return self.father[tile][1]

    def chain_trusted(self, tile: TileId) -> bool:
        """True when every relay strictly between the centre and `tile`
        (and the father assignment of `tile` itself) is reliable."""
        at = tile
        while at != self.center:
            if at not in self.father:
                return False
            if not self.trusted[at] and at != tile:
                return False
            if len(self.ball.neighbors(at)) < self.ball.p and at != tile:
                return False
            at = self.father[at][0]
        return True

    def son_rank(self, child: TileId) -> int:
        f = self.father[child][0]
        return self.sons[f].index(child)

    def branch(self, target: TileId) -> list[TileId]:
        """Tiles from the centre to `target` along the relative tree."""
        out = [target]
        while out[-1] != self.center:
            out.append(self.father[out[-1]][0])
        out.reverse()
        return out

    def address_of(self, target: TileId) -> ArcAddress:
        """Absolute arcs accumulated by the broadcast on its way to `target`."""
        if target not in self.level:
            raise ValueError(f"{target.text()} unreachable from {self.center.text()}")
        if not self.chain_trusted(target):
            raise ValueError(f"relative branch to {target.text()} is not certified")
        steps: ArcAddress = []
        tiles = self.branch(target)
        for a, b in zip(tiles, tiles[1:]):
            _, side_in_b, side_in_a = self.father[b]
            digit = (
                self.ball.arc(a, side_in_a)
                if a.sector == 0 or b.sector == 0
                else classify_pair(self.ball.tiling, (side_in_a, side_in_b))
            )
            steps.append(ArcStep(a, digit, b))
        return steps

    def relative_coordinate(self, target: TileId) -> str:
        """"0" for the centre, else the bold relative sector followed by
        the plain digits of the relative branch."""
        if target == self.center:
            return "0"
        tiles = self.branch(target)
        sector = self.father[tiles[1]][2]  # centre side towards the first relay
        digits: list[str] = []
        for a, b in zip(tiles[1:], tiles[2:]):
            digits.append(str(son_to_digit(self.status[a], self.son_rank(b))))
        return "*%d%s" % (sector, "".join(digits))

    def check_formula(self) -> None:
        """Arc formula vs the actual relative sons, over all trusted relays."""
        for tile in self.level:
            if tile == self.center or not self.trusted[tile]:
                continue
            if not self.chain_trusted(tile):
                continue
            entry = self.entry_side(tile)
            for s, child in enumerate(self.sons[tile]):
                if self.level[child] != self.level[tile] + 1:
                    continue
                predicted = arc_side_formula(
                    self.ball.p, entry, s, STATUS_TERM[self.status[tile]]
                )
                actual = self.father[child][2]
                if predicted != actual:
                    raise AssertionError(
                        f"formula gives side {predicted} for son {s} of "
                        f"{tile.text()}, ball has {actual}"
                    )


def broadcast_addresses(ball: GridBall, c: TileId) -> dict[TileId, ArcAddress]:
    """Arc address of every certified tile of the relative tree rooted at c."""
    frame = RelativeFrame(ball, c)
    out: dict[TileId, ArcAddress] = {c: []}
    for tile in frame.level:
        if tile == c or not frame.chain_trusted(tile):
            continue
        out[tile] = frame.address_of(tile)
    return out


# ---------------------------------------------------------------------------
# Private replies: the two-stack walk
# ---------------------------------------------------------------------------


class ReplyTrace(NamedTuple):
    tiles: list[TileId]                      # visited, target first
    digits: list[ArcDigit]                   # arcs as traversed (mirrors)
    stack_states: list[tuple[tuple[ArcDigit, ...], tuple[ArcDigit, ...]]]


def reply_route(ball: GridBall, address: ArcAddress) -> ReplyTrace:
    """Walk an address backwards, popping the first stack onto the second.

    The target starts with the address split as (all but the last digit,
    last digit); every relay pops the top of the first sequence, pushes it
    on the second and leaves through that digit's output side.  Stack tops
    sit at the right-hand end.
    """
    if not address:
        return ReplyTrace([], [], [(tuple(), tuple())])
    digits = [step.digit for step in address]
    source = address[0].source
    stack1 = digits[:-1]
    stack2 = [digits[-1]]
    at = address[-1].target
    tiles = [at]
    traversed: list[ArcDigit] = []
    states = [(tuple(stack1), tuple(stack2))]
    top = stack2[-1]
    while True:
        out_side = top.output
        hit = ball.neighbor(at, out_side)
        if hit is None:
            raise ValueError(f"reply leaves the ball at {at.text()} side {out_side}")
        traversed.append(top.mirror())
        at = hit[0]
        tiles.append(at)
        if not stack1:
            break
        top = stack1.pop()
        stack2.append(top)
        states.append((tuple(stack1), tuple(stack2)))
    states.append((tuple(stack1), tuple(stack2)))
    expected = [step.source for step in reversed(address)]
    if tiles[1:] != expected:
        raise AssertionError("reply did not retrace the forward path")
    return ReplyTrace(tiles, traversed, states)


# ---------------------------------------------------------------------------
# The pentagrid special system
# ---------------------------------------------------------------------------


def next_digit_special(
    delta0: int, s: int, status: NodeStatus, orient: int
) -> int:
    """Edge number of the arc to relative son s (pentagrid, calibrated)."""
    if orient not in (-1, 1):
        raise ValueError("orientation must be -1 or +1")
    if s >= (3 if status is NodeStatus.THREE else 2) or s < 0:
        raise ValueError(f"son index {s} invalid for a {int(status)}-node relay")
    return special_digit_formula(delta0, s, STATUS_TERM[status], orient)


def special_coordinate(ball: GridBall, numbering: WangNumbering, tile: TileId) -> str:
    """Edge numbers crossed from the central cell down to `tile`."""
    if ball.p != 5:
        raise ValueError("the special system exists on the pentagrid only")
    if tile.sector == 0:
        return "0"
    digits: list[int] = []
    frame_tiles: list[TileId] = [TileId(0, ())]
    at = TileId(tile.sector, ())
    chain = [at]
    for i in range(len(tile.path)):
        chain.append(TileId(tile.sector, tile.path[: i + 1]))
    prev = frame_tiles[0]
    for nxt in chain:
        f, side_in_f = ball.father_arc(nxt)
        assert f == prev
        digits.append(numbering.edge_number(f, side_in_f))
        prev = nxt
    return "".join(str(d) for d in digits)


def route_special(
    ball: GridBall, numbering: WangNumbering, c: TileId, d: TileId
) -> list[int]:
    """Edge-number digits of the relative branch from c to d."""
    if ball.p != 5:
        raise ValueError("the special system exists on the pentagrid only")
    frame = RelativeFrame(ball, c)
    if not frame.chain_trusted(d):
        raise ValueError(f"relative branch to {d.text()} is not certified")
    tiles = frame.branch(d)
    out: list[int] = []
    for a, b in zip(tiles, tiles[1:]):
        side_in_a = frame.father[b][2]
        out.append(numbering.edge_number(a, side_in_a))
    return out


def check_special_formula(
    ball: GridBall, numbering: WangNumbering, frame: RelativeFrame
) -> None:
    """Edge-number formula vs actual edge numbers, over trusted relays."""
    for tile in frame.level:
        if tile == frame.center or not frame.trusted[tile]:
            continue
        if not frame.chain_trusted(tile):
            continue
        f, side_in_t, _ = frame.father[tile]
        delta0 = numbering.edge_number(tile, side_in_t)
        orient = numbering.orientation(tile)
        for s, child in enumerate(frame.sons[tile]):
            if frame.level[child] != frame.level[tile] + 1:
                continue
            predicted = next_digit_special(delta0, s, frame.status[tile], orient)
            actual = numbering.edge_number(tile, frame.father[child][2])
            if predicted != actual:
                raise AssertionError(
                    f"edge formula gives {predicted} for son {s} of {tile.text()}, "
                    f"ball has {actual}"
                )


# ---------------------------------------------------------------------------
# Calibration
# ---------------------------------------------------------------------------


def calibrate_status_encoding(ball: GridBall) -> tuple[int, int]:
    """Re-derive the status terms from the ball's father-to-son arcs.

    Searches (two_term, three_term) over {0..3}^2 for exact agreement at
    every relay entered from its father, i.e. the absolute tree.  Exactly
    one pair fits; it is the frozen `STATUS_TERM`.
    """
    p = ball.p
    candidates = []
    for two_term in range(4):
        for three_term in range(4):
            ok = True
            for tile in ball.tiles:
                if tile.sector == 0 or ball.is_boundary(tile):
                    continue
                status = ball.status(tile)
                term = three_term if status is NodeStatus.THREE else two_term
                for s, son in enumerate(ball.sons_of(tile)):
                    if son not in ball.ring:
                        continue
                    side = arc_side_formula(p, 1, s, term)
                    hit = ball.neighbor(tile, side)
                    if hit is None or hit[0] != son:
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                candidates.append((two_term, three_term))
    if len(candidates) != 1:
        raise AssertionError(f"calibration not unique: {candidates}")
    return candidates[0]
