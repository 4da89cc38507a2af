"""Command-line surface: build balls, convert coordinates, route, map
carpet coordinates, simulate, verify, and render SVG figures.

Every output is a pure function of the arguments (plus the seed where one
applies), so repeated runs produce identical files.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import carpet as carpet_mod
from . import svg as svg_mod
from .fibtree import NodeStatus
from .grid import (
    CENTER,
    GridBall,
    TileId,
    build_ball,
    combinatorial_ball,
    isomorphic,
    tile_from_text,
    tiling_from_name,
    wang_numbering,
)
from .numeration import zeck_decode, zeck_encode
from .routing import (
    RelativeFrame,
    address_text,
    reply_route,
    reverse_digit_text,
    route_special,
    special_coordinate,
)
from .simulator import SyncSimulator, transmission_cost, write_event_log

RADIUS_CAP = {5: 8, 7: 7}


def _load_or_build(args) -> GridBall:
    if getattr(args, "ball", None):
        with open(args.ball, "r", encoding="utf-8") as fh:
            return GridBall.from_json(fh.read())
    tiling = tiling_from_name(args.tiling)
    if args.radius > RADIUS_CAP[tiling.p]:
        raise SystemExit(
            f"radius {args.radius} exceeds the desk-scale cap "
            f"{RADIUS_CAP[tiling.p]} for {tiling.name}"
        )
    return build_ball(tiling, args.radius)


def _parse_tile(ball: GridBall, text: str) -> TileId:
    """Accept '0', '*<sector><digits>', '<sector>:<zeckendorf word>' or
    '<sector>;<comma-separated son indices>'."""
    text = text.strip()
    if ":" in text:
        sector, word = text.split(":")
        from .fibtree import number_to_path

        return TileId(int(sector), number_to_path(zeck_decode(word)))
    if ";" in text:
        sector, body = text.split(";")
        path = tuple(int(x) for x in body.split(",") if x != "")
        return TileId(int(sector), path)
    return tile_from_text(text)


def cmd_build(args) -> int:
    ball = _load_or_build(args)
    payload = ball.to_json()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(payload)
        print(f"wrote {args.out}: {len(ball.tiles)} tiles, radius {ball.radius}")
    else:
        sys.stdout.write(payload)
    return 0


def cmd_coord(args) -> int:
    ball = _load_or_build(args)
    tile = _parse_tile(ball, args.value)
    if tile not in ball.ring:
        raise SystemExit(f"{tile.text()} is not inside the ball")
    info: dict[str, object] = {
        "text": tile.text(),
        "sector": tile.sector,
        "path": list(tile.path),
        "ring": ball.ring[tile],
        "boundary": ball.is_boundary(tile),
    }
    if tile.sector != 0:
        from .grid import tile_number

        nu = tile_number(tile)
        info["number"] = nu
        info["zeckendorf"] = zeck_encode(nu)
        info["status"] = int(ball.status(tile))
        info["sector_zeck"] = f"{tile.sector}:{zeck_encode(nu)}"
    print(json.dumps(info, sort_keys=True))
    return 0


def cmd_route(args) -> int:
    ball = _load_or_build(args)
    src = _parse_tile(ball, args.src)
    dst = _parse_tile(ball, args.dst)
    frame = RelativeFrame(ball, src)
    out: dict[str, object] = {"from": src.text(), "to": dst.text(), "system": args.system}
    if args.system == "arcs":
        addr = frame.address_of(dst)
        out["forward"] = address_text(addr)
        out["reverse"] = reverse_digit_text(addr)
        out["relative"] = frame.relative_coordinate(dst)
        out["length"] = len(addr)
        out["tiles"] = [src.text()] + [s.target.text() for s in addr]
    else:
        numbering = wang_numbering(ball, CENTER, args.seed_side)
        digits = route_special(ball, numbering, src, dst)
        out["forward"] = "".join(str(d) for d in digits)
        out["reverse"] = "".join(str(d) for d in reversed(digits))
        out["relative"] = frame.relative_coordinate(dst)
        out["length"] = len(digits)
        out["from_special"] = special_coordinate(ball, numbering, src)
        out["to_special"] = special_coordinate(ball, numbering, dst)
    print(json.dumps(out, sort_keys=True))
    return 0


def cmd_carpet(args) -> int:
    tiling = tiling_from_name(args.tiling)
    other = tiling_from_name("hepta" if tiling.p == 5 else "penta")
    src_ball = build_ball(tiling, args.radius)
    dst_ball = build_ball(other, args.radius)
    tile = _parse_tile(src_ball, args.value)
    coord = carpet_mod.carpet_coord(src_ball, tile)
    image = carpet_mod.carpet_tile(dst_ball, coord)
    print(
        json.dumps(
            {
                "tile": tile.text(),
                "carpet": coord.text(),
                "image_tiling": other.name,
                "image_tile": image.text(),
            },
            sort_keys=True,
        )
    )
    return 0


def cmd_simulate(args) -> int:
    ball = _load_or_build(args)
    src = _parse_tile(ball, args.source)
    sim = SyncSimulator(ball)
    broadcast = sim.run_broadcast(src)
    storm = sim.run_reply_storm(src, args.reply_level)
    if args.log:
        write_event_log(broadcast.events + storm.events, args.log)
    per_tick = broadcast.receivers_per_tick()
    latencies = sorted(
        (d, min(v), max(v)) for d, v in storm.latency_by_distance.items()
    )
    stats = {
        "source": src.text(),
        "broadcast_receivers": len(broadcast.arrival_tick) - 1,
        "broadcast_receivers_per_tick": {str(k): v for k, v in sorted(per_tick.items()) if k > 0},
        "reply_level": args.reply_level,
        "repliers": storm.repliers,
        "delivered": storm.delivered,
        "storm_ticks": storm.ticks,
        "max_queue_depth": storm.max_queue_depth,
        "max_fanin": storm.max_fanin,
        "latency_by_distance": [
            {"distance": d, "min": lo, "max": hi} for d, lo, hi in latencies
        ],
        "unicast_cost_example": transmission_cost(3, 10, 0.1),
    }
    print(json.dumps(stats, sort_keys=True))
    return 0


def cmd_verify(args) -> int:
    failures = 0

    def check(label: str, fn) -> None:
        nonlocal failures
        try:
            fn()
        except Exception as exc:  # noqa: BLE001 - report and continue
            failures += 1
            print(f"FAIL {label}: {exc}")
        else:
            print(f"ok   {label}")

    tiling = tiling_from_name(args.tiling)
    radius = args.radius
    ball = build_ball(tiling, radius)

    def oracle_agreement():
        comb = combinatorial_ball(tiling, radius)
        if not isomorphic(ball, comb):
            raise AssertionError("labelled adjacency differs from the tree rules")

    def arcs_classify():
        for key in ball.adjacency:
            ball.arc(*key)

    def geodesy():
        from collections import deque

        for c in ball.tiles:
            if not ball.is_interior(c):
                continue
            frame = RelativeFrame(ball, c)
            dist = {c: 0}
            queue = deque([c])
            while queue:
                u = queue.popleft()
                for _, v, _ in ball.neighbors(u):
                    if v not in dist:
                        dist[v] = dist[u] + 1
                        queue.append(v)
            for d in ball.tiles:
                if d == c or not frame.chain_trusted(d):
                    continue
                if len(frame.address_of(d)) != dist[d]:
                    raise AssertionError(f"{c.text()} -> {d.text()} not geodesic")

    def formula():
        for c in ball.tiles:
            if ball.is_interior(c):
                RelativeFrame(ball, c).check_formula()

    check("oracle agreement (tiles, sides, adjacency)", oracle_agreement)
    check("every arc classifies as a digit", arcs_classify)
    check("addresses are geodesic", geodesy)
    check("arc formula agrees with every relay", formula)
    if tiling.p == 5:
        def wang():
            numbering = wang_numbering(ball, CENTER, 1)
            numbering.check()

        check("edge numbering has no conflicts", wang)
    print("verify:", "FAIL" if failures else "PASS")
    return 1 if failures else 0


def cmd_render(args) -> int:
    ball = _load_or_build(args)
    highlight: list[TileId] = []
    if args.src and args.dst:
        frame = RelativeFrame(ball, _parse_tile(ball, args.src))
        highlight = frame.branch(_parse_tile(ball, args.dst))
    doc = svg_mod.render_ball(ball, highlight=highlight, labels=args.labels)
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(doc)
    print(f"wrote {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fibgrid",
        description="Fibonacci-tree coordinates and arc-digit routing on the "
        "pentagrid {5,4} and ternary heptagrid {7,3}",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, radius_default=4):
        p.add_argument("--tiling", default="penta", choices=["penta", "hepta"])
        p.add_argument("--radius", type=int, default=radius_default)
        p.add_argument("--ball", help="read a serialized ball instead of building")

    p = sub.add_parser("build", help="construct a ball and serialize it")
    common(p)
    p.add_argument("--out", help="output file (stdout if omitted)")
    p.set_defaults(fn=cmd_build)

    p = sub.add_parser("coord", help="decode a tile coordinate")
    common(p)
    p.add_argument("value", help="'0', '*<sector><digits>', '<sector>:<zeck>' or '<sector>;s0,s1,...'")
    p.set_defaults(fn=cmd_coord)

    p = sub.add_parser("route", help="route between two cells")
    common(p, radius_default=6)
    p.add_argument("--from", dest="src", required=True)
    p.add_argument("--to", dest="dst", required=True)
    p.add_argument("--system", choices=["arcs", "wang"], default="arcs")
    p.add_argument("--seed-side", type=int, default=1, help="edge numbering seed (wang)")
    p.set_defaults(fn=cmd_route)

    p = sub.add_parser("carpet", help="map a tile to the other grid by carpet coordinate")
    p.add_argument("--tiling", default="penta", choices=["penta", "hepta"])
    p.add_argument("--radius", type=int, default=4)
    p.add_argument("value")
    p.set_defaults(fn=cmd_carpet)

    p = sub.add_parser("simulate", help="broadcast + reply storm with an event log")
    common(p)
    p.add_argument("--source", default="0")
    p.add_argument("--reply-level", type=int, default=3)
    p.add_argument("--log", help="write a line-delimited event log here")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=cmd_simulate)

    p = sub.add_parser("verify", help="run the oracle-agreement and geodesy suites")
    p.add_argument("--tiling", default="penta", choices=["penta", "hepta"])
    p.add_argument("--radius", type=int, default=4)
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("render", help="draw the ball as an SVG")
    common(p)
    p.add_argument("--out", required=True)
    p.add_argument("--from", dest="src", help="highlight a route from this tile")
    p.add_argument("--to", dest="dst", help="...to this tile")
    p.add_argument("--labels", action="store_true")
    p.set_defaults(fn=cmd_render)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
