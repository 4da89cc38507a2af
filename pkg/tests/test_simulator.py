import json
import math

import pytest

from fibgrid.grid import CENTER, TileId
from fibgrid.numeration import BETA, FibConvention, fib
from fibgrid.routing import RelativeFrame
from fibgrid.simulator import (
    Message,
    SyncSimulator,
    normalizing_constant,
    sample_distances,
    traffic_bound,
    transmission_cost,
    write_event_log,
)


class TestBroadcast:
    def test_radius_zero_only_source(self, penta4):
        sim = SyncSimulator(penta4)
        res = sim.run_broadcast(CENTER, until_radius=0)
        assert res.arrival_tick == {CENTER: 0}

    def test_arrival_tick_equals_level(self, penta4):
        sim = SyncSimulator(penta4)
        res = sim.run_broadcast(CENTER)
        frame = RelativeFrame(penta4, CENTER)
        for tile, tick in res.arrival_tick.items():
            assert tick == frame.level[tile]

    def test_receivers_per_tick_match_level_counts(self, hepta4):
        # from the centre, tick k reaches the ring of size p * fib(2k-1)
        sim = SyncSimulator(hepta4)
        res = sim.run_broadcast(CENTER)
        per_tick = res.receivers_per_tick()
        del per_tick[0]
        for k, count in per_tick.items():
            assert count == 7 * fib(2 * k - 1, FibConvention.F12)

    def test_exactly_once(self, penta4):
        sim = SyncSimulator(penta4)
        res = sim.run_broadcast(CENTER)
        recv = [e for e in res.events if e.event == "recv"]
        assert len(recv) == len(res.arrival_tick) - 1
        assert len({e.tile for e in recv}) == len(recv)

    def test_addresses_match_routing(self, penta4):
        from fibgrid.routing import broadcast_addresses, address_text

        sim = SyncSimulator(penta4)
        res = sim.run_broadcast(CENTER)
        addrs = broadcast_addresses(penta4, CENTER)
        assert set(res.addresses) == set(addrs)
        for tile in addrs:
            assert address_text(res.addresses[tile]) == address_text(addrs[tile])

    def test_noncentral_source(self, penta5):
        c = TileId(1, (1,))
        sim = SyncSimulator(penta5)
        res = sim.run_broadcast(c)
        frame = RelativeFrame(penta5, c)
        for tile, tick in res.arrival_tick.items():
            assert tick == frame.level[tile]


class TestReplyStorm:
    def test_single_replier_no_contention(self, penta4):
        sim = SyncSimulator(penta4)
        # level 1 has p repliers but each takes its own edge to the centre:
        # all arrive at tick 1; a single distance-k replier needs k ticks
        res = sim.run_reply_storm(CENTER, 1)
        assert res.delivered == res.repliers == 5
        assert res.ticks >= 1
        assert all(lat == [1] * len(lat) for lat in res.latency_by_distance.values())

    def test_conservation_and_fanin(self, penta5):
        sim = SyncSimulator(penta5)
        for k in (2, 3, 4):
            res = sim.run_reply_storm(CENTER, k)
            assert res.conservation_ok
            assert res.delivered == res.repliers
            assert res.max_fanin <= 5

    def test_center_intake_bound(self, penta5):
        sim = SyncSimulator(penta5)
        res = sim.run_reply_storm(CENTER, 3)
        per_tick = {}
        for ev in res.events:
            if ev.event == "deliver":
                per_tick[ev.tick] = per_tick.get(ev.tick, 0) + 1
        assert per_tick and max(per_tick.values()) <= 5

    def test_latency_at_least_distance(self, penta5):
        sim = SyncSimulator(penta5)
        res = sim.run_reply_storm(CENTER, 4)
        for dist, lats in res.latency_by_distance.items():
            assert min(lats) >= dist

    def test_fifo_discipline(self, penta5):
        # departures from one output side leave in arrival order
        sim = SyncSimulator(penta5)
        res = sim.run_reply_storm(CENTER, 3)
        queued: dict[tuple, list[int]] = {}
        sent: dict[tuple, list[int]] = {}
        for ev in res.events:
            if ev.event == "queue":
                queued.setdefault((ev.tile, ev.side), []).append(ev.msg_id)
            elif ev.event == "send":
                sent.setdefault((ev.tile, ev.side), []).append(ev.msg_id)
        for key, order in sent.items():
            assert order == queued[key][: len(order)]

    def test_queueing_happens(self, penta5):
        sim = SyncSimulator(penta5)
        res = sim.run_reply_storm(CENTER, 4)
        assert res.max_queue_depth > 1  # contention is real at level 4

    def test_deterministic(self, penta4):
        sim = SyncSimulator(penta4)
        a = sim.run_reply_storm(CENTER, 3)
        b = sim.run_reply_storm(CENTER, 3)
        assert [e.to_json() for e in a.events] == [e.to_json() for e in b.events]

    def test_noncentral_storm(self, penta5):
        c = TileId(2, (2,))
        sim = SyncSimulator(penta5)
        res = sim.run_reply_storm(c, 2)
        assert res.conservation_ok and res.repliers > 0


class TestEventLog:
    def test_jsonl(self, tmp_path, penta4):
        sim = SyncSimulator(penta4)
        res = sim.run_broadcast(CENTER, until_radius=2)
        path = tmp_path / "events.jsonl"
        write_event_log(res.events, str(path))
        lines = path.read_text().splitlines()
        assert len(lines) == len(res.events)
        rec = json.loads(lines[0])
        assert set(rec) == {"tick", "tile", "event", "msg", "side"}


class TestCost:
    def test_zero_distance(self):
        assert transmission_cost(0, 10, 0.5) == 0.0

    def test_closed_form_example(self):
        assert transmission_cost(3, 10, 0.1) == pytest.approx(6.9)

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            transmission_cost(-1, 0, 1.0)

    def test_simulator_accounting_matches(self, penta6):
        sim = SyncSimulator(penta6)
        frame = RelativeFrame(penta6, CENTER)
        targets = {}
        for tile, lvl in frame.level.items():
            if 1 <= lvl <= 6 and lvl not in targets and frame.chain_trusted(tile):
                targets[lvl] = tile
        assert set(targets) == {1, 2, 3, 4, 5, 6}
        for dist, tile in sorted(targets.items()):
            for m in (0, 1, 10, 100):
                for rho in (0.1, 1.0, 10.0):
                    res = sim.run_unicast(CENTER, tile, m, rho)
                    assert res.ticks == dist
                    assert res.cost == transmission_cost(dist, m, rho)

    def test_unicast_latency_is_distance(self, penta5):
        sim = SyncSimulator(penta5)
        frame = RelativeFrame(penta5, CENTER)
        for tile, lvl in frame.level.items():
            if tile != CENTER and frame.chain_trusted(tile):
                assert sim.run_unicast(CENTER, tile).ticks == lvl


class TestTrafficBound:
    def test_normalization(self):
        # sum the series through its linear recurrence in float space
        for lam in (1.0, 1.2, 2.0):
            C = normalizing_constant(lam, 5)
            x = math.exp(-lam)
            t_prev, t_cur = 1.0, 3.0 * x  # fib(1)*x^0, fib(3)*x^1
            total = t_prev + t_cur
            for _ in range(5000):
                t_prev, t_cur = t_cur, 3.0 * x * t_cur - x * x * t_prev
                total += t_cur
            assert C * 5 * total == pytest.approx(1.0, rel=1e-9)

    def test_beta_value(self):
        assert BETA == pytest.approx((3 + math.sqrt(5)) / 2)
        assert BETA < math.e

    def test_gamma_must_be_small(self):
        with pytest.raises(ValueError):
            traffic_bound(2, lam=0.5, p=5)  # gamma = beta/e^0.5 > 1

    def test_tail_vanishes_for_large_lambda(self):
        _, tail_big = traffic_bound(6, lam=8.0, p=5)
        assert tail_big < 1e-18

    def test_tail_dominates_mass(self):
        lam, p = 1.2, 5
        C = normalizing_constant(lam, p)
        for k in range(8):
            _, tail = traffic_bound(k, lam, p, C)
            exact = sum(
                C * p * fib(2 * j + 1, FibConvention.F01) * math.exp(-lam * j)
                for j in range(k + 1, 200)
            )
            assert exact <= tail + 1e-12

    def test_monte_carlo_tail(self):
        lam, p, n = 1.2, 5, 100_000
        draws = sample_distances(lam, p, n, seed=20240917)
        C = normalizing_constant(lam, p)
        for k in range(7):
            _, tail = traffic_bound(k, lam, p, C)
            frequency = sum(1 for d in draws if d > k) / n
            sigma = math.sqrt(max(tail * (1 - tail), 1e-12) / n)
            assert frequency <= tail + 3 * sigma

    def test_sampler_deterministic(self):
        a = sample_distances(1.2, 5, 1000, seed=7)
        b = sample_distances(1.2, 5, 1000, seed=7)
        assert a == b
