from collections import deque

import pytest

from fibgrid.fibtree import NodeStatus, digits_to_path
from fibgrid.grid import CENTER, HEPTA, PENTA, TileId, build_ball, wang_numbering
from fibgrid.routing import (
    STATUS_TERM,
    RelativeFrame,
    address_text,
    arc_side_formula,
    broadcast_addresses,
    calibrate_status_encoding,
    check_special_formula,
    next_arc,
    next_digit_special,
    reply_route,
    reverse_digit_text,
    route_special,
    special_coordinate,
    special_digit_formula,
)

TWO, THREE = NodeStatus.TWO, NodeStatus.THREE

# The standard example pair: both cells sit at the same tree positions in
# either grid (digit strings are grid-independent).
C_TILE = TileId(3, digits_to_path((1, 2, 3, 3, 2)))   # *312332
D_TILE = TileId(2, digits_to_path((3, 3, 1, 3, 3, 2)))  # *2331332


def bfs(ball, src):
    dist = {src: 0}
    queue = deque([src])
    while queue:
        u = queue.popleft()
        for _, v, _ in ball.neighbors(u):
            if v not in dist:
                dist[v] = dist[u] + 1
                queue.append(v)
    return dist


class TestSideFormula:
    def test_identity_sanity(self):
        # p = 7, beta0 = 1 and s - st_r = -3 cancels everything mod 7
        assert arc_side_formula(7, 1, 0, 3) == 1

    def test_never_hits_entry_side_when_calibrated(self):
        for p in (5, 7):
            for beta0 in range(1, p + 1):
                for status, term in STATUS_TERM.items():
                    for s in range(3 if status is THREE else 2):
                        assert arc_side_formula(p, beta0, s, term) != beta0

    def test_calibration_unique(self, penta5, hepta4):
        assert calibrate_status_encoding(penta5) == (0, 1)
        assert calibrate_status_encoding(hepta4) == (0, 1)
        assert STATUS_TERM == {THREE: 1, TWO: 0}

    def test_next_arc_matches_tree(self, hepta4):
        # entered from the father, the produced arc is the father-to-son arc
        for tile in hepta4.tiles:
            if tile.sector == 0 or hepta4.is_boundary(tile):
                continue
            status = hepta4.status(tile)
            for s, son in enumerate(hepta4.sons_of(tile)):
                digit = next_arc(hepta4, tile, 1, s, status)
                side = hepta4.father_arc(son)[1]
                assert digit.pair[0] == side
                assert hepta4.adjacency[(tile, side)][0] == son

    def test_next_arc_rejects_bad_son(self, hepta4):
        with pytest.raises(ValueError):
            next_arc(hepta4, TileId(1, (0,)), 1, 2, TWO)


class TestRelativeFrame:
    def test_center_frame_reproduces_coordinates(self, penta5):
        frame = RelativeFrame(penta5, CENTER)
        frame.check_formula()
        for tile in penta5.tiles:
            if tile == CENTER or not frame.chain_trusted(tile):
                continue
            assert frame.relative_coordinate(tile) == tile.text()
            assert frame.level[tile] == penta5.ring[tile]

    def test_relative_statuses_follow_production_rules(self, hepta4):
        from fibgrid.fibtree import SON_STATUS

        for c in hepta4.tiles:
            if not hepta4.is_interior(c):
                continue
            frame = RelativeFrame(hepta4, c)
            for t in frame.level:
                if t == c or not frame.trusted[t] or not frame.chain_trusted(t):
                    continue
                sons = frame.sons[t]
                want = SON_STATUS[frame.status[t]]
                if len(sons) != len(want):
                    continue  # truncated at the rim
                if not all(frame.trusted.get(ch, False) for ch in sons):
                    continue
                assert tuple(frame.status[ch] for ch in sons) == want

    def test_formula_everywhere(self, penta4, hepta4):
        for ball in (penta4, hepta4):
            for c in ball.tiles:
                if ball.is_interior(c):
                    RelativeFrame(ball, c).check_formula()

    def test_boundary_center_rejected(self, penta4):
        rim = next(t for t in penta4.tiles if penta4.is_boundary(t))
        with pytest.raises(ValueError):
            RelativeFrame(penta4, rim)


class TestBroadcast:
    def test_self_address_empty(self, penta4):
        addrs = broadcast_addresses(penta4, CENTER)
        assert addrs[CENTER] == []
        frame = RelativeFrame(penta4, CENTER)
        assert frame.relative_coordinate(CENTER) == "0"

    def test_exactly_once_and_chainable(self, penta4):
        addrs = broadcast_addresses(penta4, CENTER)
        for tile, addr in addrs.items():
            if tile == CENTER:
                continue
            at = CENTER
            for step in addr:
                assert step.source == at
                nxt, entry = penta4.adjacency[(at, step.digit.pair[0])]
                assert entry == step.digit.pair[1]
                at = nxt
            assert at == tile

    def test_address_length_is_level(self, hepta4):
        c = TileId(1, (1,))
        frame = RelativeFrame(hepta4, c)
        addrs = broadcast_addresses(hepta4, c)
        for tile, addr in addrs.items():
            assert len(addr) == frame.level[tile]

    def test_geodesy_all_certified_pairs(self, penta5, hepta4):
        for ball in (penta5, hepta4):
            for c in ball.tiles:
                if not ball.is_interior(c):
                    continue
                frame = RelativeFrame(ball, c)
                dist = bfs(ball, c)
                for d in ball.tiles:
                    if d == c or not frame.chain_trusted(d):
                        continue
                    addr = frame.address_of(d)
                    assert len(addr) == dist[d]
                    # the address path is itself a shortest path
                    tiles = frame.branch(d)
                    assert all(
                        dist[tiles[i + 1]] == dist[tiles[i]] + 1
                        for i in range(len(tiles) - 1)
                    )


class TestReply:
    def test_empty_address(self, penta4):
        trace = reply_route(penta4, [])
        assert trace.tiles == [] and trace.digits == []

    def test_reverse_tile_sequence(self, hepta4):
        frame = RelativeFrame(hepta4, CENTER)
        for target in list(frame.level)[:200]:
            if target == CENTER or not frame.chain_trusted(target):
                continue
            addr = frame.address_of(target)
            trace = reply_route(hepta4, addr)
            forward_tiles = [CENTER] + [s.target for s in addr]
            assert trace.tiles == forward_tiles[::-1]

    def test_reverse_digits_are_mirrored_reversal(self, hepta4):
        frame = RelativeFrame(hepta4, CENTER)
        target = TileId(2, (1, 2))
        addr = frame.address_of(target)
        trace = reply_route(hepta4, addr)
        assert [d.text() for d in trace.digits] == [
            s.digit.mirror().text() for s in reversed(addr)
        ]
        assert reverse_digit_text(addr) == "".join(d.text() for d in trace.digits)

    def test_stacks_partition_address(self, hepta4):
        frame = RelativeFrame(hepta4, CENTER)
        target = TileId(3, (2, 1, 0))
        addr = frame.address_of(target)
        digits = [s.digit for s in addr]
        trace = reply_route(hepta4, addr)
        for stack1, stack2 in trace.stack_states:
            assert list(stack1) + list(reversed(stack2)) == digits
        # final state: everything migrated to the second stack
        final1, final2 = trace.stack_states[-1]
        assert final1 == tuple()
        assert list(final2) == digits[::-1]


class TestWorkedExample:
    """The standard sender/receiver pair in both grids.

    Canonical digit strings of this implementation are frozen here; the
    agreement and the documented divergences against the published
    reference strings are asserted in the acceptance suite.
    """

    def test_hepta_strings(self, hepta7):
        frame = RelativeFrame(hepta7, C_TILE)
        addr = frame.address_of(D_TILE)
        assert address_text(addr) == "~2~3~5~41332"
        assert reverse_digit_text(addr) == "~2~3~3~14532"
        assert frame.relative_coordinate(D_TILE) == "*13313332"
        assert len(addr) == 8

    def test_penta_strings(self, penta8):
        frame = RelativeFrame(penta8, C_TILE)
        addr = frame.address_of(D_TILE)
        assert address_text(addr) == "~2~31~4~41332"
        assert frame.relative_coordinate(D_TILE) == "*133122332"
        assert len(addr) == 9

    def test_penta_distance_parity(self, penta8):
        # every pentagrid arc changes the ring by exactly one, so the
        # distance between these cells (rings 6 and 7) is odd
        for (t, _), (u, _) in penta8.adjacency.items():
            assert abs(penta8.ring[t] - penta8.ring[u]) == 1
        dist = bfs(penta8, C_TILE)
        assert dist[D_TILE] == 9

    def test_systems_agree_on_tiles(self, penta8):
        frame = RelativeFrame(penta8, C_TILE)
        numbering = wang_numbering(penta8, CENTER, 1)
        digits = route_special(penta8, numbering, C_TILE, D_TILE)
        assert len(digits) == len(frame.address_of(D_TILE))


class TestSpecialSystem:
    def test_formula_as_printed(self):
        # delta0=2, or=+1, s=1, st_r=3 gives 1 + (1 + 0) mod 5 = 2
        assert special_digit_formula(2, 1, 3, 1) == 2

    def test_published_strings_reproduce(self, penta8):
        numbering = wang_numbering(penta8, CENTER, 1)
        assert special_coordinate(penta8, numbering, C_TILE) == "324142"
        assert special_coordinate(penta8, numbering, D_TILE) == "2421413"
        digits = route_special(penta8, numbering, C_TILE, D_TILE)
        assert "".join(map(str, digits)) == "242131413"

    def test_formula_matches_ball(self, penta5):
        numbering = wang_numbering(penta5, CENTER, 1)
        for c in penta5.tiles:
            if penta5.is_interior(c) and penta5.ring[c] <= 1:
                check_special_formula(penta5, numbering, RelativeFrame(penta5, c))

    def test_next_digit_validation(self):
        with pytest.raises(ValueError):
            next_digit_special(1, 2, TWO, 1)
        with pytest.raises(ValueError):
            next_digit_special(1, 0, THREE, 0)

    def test_heptagrid_rejected(self, hepta4):
        with pytest.raises(ValueError):
            route_special(hepta4, None, CENTER, TileId(1, ()))
