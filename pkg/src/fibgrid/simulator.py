"""Synchronous protocol execution with per-tick transport and FIFO queues.

One transport hop takes one tick; the digit computation at a relay is
folded into the same tick.  When several messages contend for one output
side of a cell, one departs per tick and the rest wait in a FIFO queue
that has priority over fresh arrivals.  Hardware costs (payload copy,
stack handling) are accounted, not simulated as extra ticks.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from typing import Iterable

from .grid import GridBall, TileId
from .numeration import BETA, FibConvention, fib
from .routing import ArcAddress, ArcStep, RelativeFrame


@dataclass
class Message:
    kind: str  # "public" | "private"
    source: TileId
    payload_length: int = 0
    stack1: list = field(default_factory=list)
    stack2: list = field(default_factory=list)
    direction_bit: str = "to_source"  # "to_target" | "to_source"
    msg_id: int = 0


@dataclass
class Event:
    tick: int
    tile: TileId
    event: str  # recv | send | queue | deliver
    msg_id: int
    side: int

    def to_json(self) -> str:
        return json.dumps(
            {
                "tick": self.tick,
                "tile": self.tile.text(),
                "event": self.event,
                "msg": self.msg_id,
                "side": self.side,
            },
            sort_keys=True,
        )


def write_event_log(events: Iterable[Event], path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for ev in events:
            fh.write(ev.to_json() + "\n")


@dataclass
class BroadcastResult:
    arrival_tick: dict[TileId, int]
    addresses: dict[TileId, ArcAddress]
    events: list[Event]

    def receivers_per_tick(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for tick in self.arrival_tick.values():
            out[tick] = out.get(tick, 0) + 1
        return out


@dataclass
class StormResult:
    repliers: int
    delivered: int
    ticks: int
    max_queue_depth: int
    max_fanin: int
    latency_by_distance: dict[int, list[int]]
    events: list[Event]
    conservation_ok: bool


@dataclass
class UnicastResult:
    ticks: int
    cost: float


class SyncSimulator:
    """Deterministic synchronous executor over an immutable ball."""

    def __init__(self, ball: GridBall, queue_high_water: int = 10_000):
        self.ball = ball
        self.queue_high_water = queue_high_water

    # -- public broadcast -------------------------------------------------

    def run_broadcast(self, c: TileId, until_radius: int | None = None) -> BroadcastResult:
        """Flood the relative tree rooted at c.

        The tile at relative level L (= distance from c) receives the
        message at tick L, exactly once, together with its accumulated
        address.
        """
        frame = RelativeFrame(self.ball, c)
        events: list[Event] = []
        arrival: dict[TileId, int] = {c: 0}
        addresses: dict[TileId, ArcAddress] = {c: []}
        frontier: list[tuple[TileId, ArcAddress]] = [(c, [])]
        tick = 0
        while frontier:
            tick += 1
            if until_radius is not None and tick > until_radius:
                break
            nxt: list[tuple[TileId, ArcAddress]] = []
            for tile, addr in frontier:
                for child in frame.sons[tile]:
                    if not frame.chain_trusted(child):
                        continue
                    step_addr = addr + frame.address_of(child)[len(addr) :]
                    digit = step_addr[-1].digit
                    events.append(Event(tick, tile, "send", 0, digit.input))
                    events.append(Event(tick, child, "recv", 0, digit.output))
                    assert child not in arrival, "duplicate broadcast delivery"
                    arrival[child] = tick
                    addresses[child] = step_addr
                    nxt.append((child, step_addr))
            frontier = nxt
        return BroadcastResult(arrival, addresses, events)

    # -- reply storm -------------------------------------------------------

    def run_reply_storm(self, c: TileId, k: int) -> StormResult:
        """Every certified cell at relative level k replies to c at once.

        Transport: per tick each cell forwards at most one message per
        output side; excess messages queue FIFO with priority over new
        arrivals.  Replies pop the first stack onto the second and leave
        through the popped digit's output side.
        """
        frame = RelativeFrame(self.ball, c)
        repliers = sorted(
            t
            for t, lvl in frame.level.items()
            if lvl == k and t != c and frame.chain_trusted(t)
        )
        messages: dict[int, Message] = {}
        fresh: list[tuple[TileId, int, int]] = []  # (tile, msg_id, entry_side)
        for mid, t in enumerate(repliers, start=1):
            digits = [s.digit for s in frame.address_of(t)]
            messages[mid] = Message(
                "private",
                source=t,
                stack1=digits[:-1],
                stack2=[digits[-1]],
                direction_bit="to_source",
                msg_id=mid,
            )
            fresh.append((t, mid, 0))

        events: list[Event] = []
        queues: dict[tuple[TileId, int], list[int]] = {}
        delivered: dict[int, int] = {}
        max_queue = 0
        max_fanin = 0
        tick = 0
        while fresh or any(queues.values()):
            tick += 1
            if tick > 4 * (k + 1) * max(1, len(repliers)):
                raise AssertionError("reply storm failed to drain (deadlock?)")
            # fresh arrivals join their output queue behind the waiters;
            # ties among same-tick arrivals break by entry side
            fanin: dict[TileId, int] = {}
            for tile, mid, entry in sorted(
                fresh, key=lambda rec: (rec[0].sector, rec[0].path, rec[2])
            ):
                fanin[tile] = fanin.get(tile, 0) + 1
                top = messages[mid].stack2[-1]
                queues.setdefault((tile, top.output), []).append(mid)
                events.append(Event(tick, tile, "queue", mid, top.output))
            if fanin:
                max_fanin = max(max_fanin, max(fanin.values()))
                assert max(fanin.values()) <= self.ball.p, "fan-in exceeded p"
            fresh = []

            # one departure per (tile, side) per tick
            for (tile, out_side), waiting in sorted(
                queues.items(), key=lambda kv: (kv[0][0].sector, kv[0][0].path, kv[0][1])
            ):
                if not waiting:
                    continue
                max_queue = max(max_queue, len(waiting))
                if len(waiting) > self.queue_high_water:
                    raise AssertionError("queue high-water mark exceeded")
                mid = waiting.pop(0)
                msg = messages[mid]
                hit = self.ball.neighbor(tile, out_side)
                assert hit is not None, "reply left the ball"
                nxt, entry_side = hit
                events.append(Event(tick, tile, "send", mid, out_side))
                events.append(Event(tick, nxt, "recv", mid, entry_side))
                if nxt == c:
                    delivered[mid] = tick
                    events.append(Event(tick, nxt, "deliver", mid, entry_side))
                else:
                    assert msg.stack1, "stack underflow before reaching the centre"
                    msg.stack2.append(msg.stack1.pop())
                    fresh.append((nxt, mid, entry_side))

        latency: dict[int, list[int]] = {}
        for mid, msg in messages.items():
            latency.setdefault(frame.level[msg.source], []).append(delivered[mid])
        return StormResult(
            repliers=len(repliers),
            delivered=len(delivered),
            ticks=tick,
            max_queue_depth=max_queue,
            max_fanin=max_fanin,
            latency_by_distance=latency,
            events=events,
            conservation_ok=len(delivered) == len(repliers),
        )

    # -- unicast ------------------------------------------------------------

    def run_unicast(
        self, c: TileId, d: TileId, payload_length: int = 0, rho: float = 1.0
    ) -> UnicastResult:
        """Contention-free reply from d back to c with cost accounting.

        Latency is one tick per hop.  The accounted cost per hop is one
        software operation plus rho per copied payload unit plus rho per
        stack cell managed by the hardware (the stacks jointly hold the
        whole path), so the total is dist * (1 + rho*M + rho*dist).
        """
        frame = RelativeFrame(self.ball, c)
        addr = frame.address_of(d)
        dist = len(addr)
        if dist == 0:
            return UnicastResult(0, 0.0)
        per_hop = 1.0 + rho * payload_length + rho * dist
        return UnicastResult(dist, dist * per_hop)


def transmission_cost(dist: int, payload_length: int, rho: float) -> float:
    """Closed-form delay-free cost: dist * (1 + rho*M + rho*dist)."""
    if dist < 0 or payload_length < 0:
        raise ValueError("distance and payload length must be >= 0")
    if dist == 0:
        return 0.0
    return dist * (1.0 + rho * payload_length + rho * dist)


# ---------------------------------------------------------------------------
# Distance-law traffic model
# ---------------------------------------------------------------------------


def normalizing_constant(lam: float, p: int) -> float:
    """C with sum_k C * p * fib(2k+1) * exp(-lam*k) = 1.

    The level counts obey u(k+1) = 3u(k) - u(k-1) with generating function
    1/(1 - 3x + x^2), so the series sums to p*C/(1 - 3x + x^2) at
    x = exp(-lam).
    """
    x = math.exp(-lam)
    if BETA * x >= 1.0:
        raise ValueError("lam too small: the distance series diverges")
    return (1.0 - 3.0 * x + x * x) / p


def traffic_bound(k: int, lam: float, p: int, C: float | None = None) -> tuple[float, float]:
    """(P_k, tail bound beyond k) for the exponential distance law.

    P_k = C * p * fib(2k+1) * exp(-lam*k); the tail bound is
    D * gamma^(k+1) / (1 - gamma) with gamma = beta/exp(lam) and
    D = C * C1 * p, C1 = beta/sqrt(5) the growth constant of fib(2k+1).
    """
    gamma = BETA / math.exp(lam)
    if gamma >= 1.0:
        raise ValueError("gamma = beta/exp(lam) must be < 1 for a usable bound")
    if C is None:
        C = normalizing_constant(lam, p)
    p_k = C * p * fib(2 * k + 1, FibConvention.F01) * math.exp(-lam * k)
    c1 = BETA / math.sqrt(5.0)
    D = C * c1 * p
    tail = D * gamma ** (k + 1) / (1.0 - gamma)
    return p_k, tail


def sample_distances(lam: float, p: int, n: int, seed: int, k_max: int = 64) -> list[int]:
    """Draw n communication distances from the normalized law."""
    C = normalizing_constant(lam, p)
    weights = [C * p * fib(2 * k + 1, FibConvention.F01) * math.exp(-lam * k) for k in range(k_max + 1)]
    total = sum(weights)
    cdf = []
    acc = 0.0
    for w in weights:
        acc += w / total
        cdf.append(acc)
    rng = random.Random(seed)
    out = []
    for _ in range(n):
        u = rng.random()
        lo = 0
        while cdf[lo] < u:
            lo += 1
        out.append(lo)
    return out
