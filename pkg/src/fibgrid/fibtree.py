"""The standard Fibonacci tree: statuses, paths, breadth-first numbering.

Production rules (root is a 3-node):

* a 3-node has sons (2-node, 3-node, 3-node), left to right;
* a 2-node has sons (2-node, 3-node).

Son indices are 0-based, leftmost first.  Nodes are numbered level by
level, left to right, with 1 at the root; the *coordinate* of a node is
the Zeckendorf word of its number.  Trees are never materialised: every
operation replays the rules along a path.
"""

from __future__ import annotations

import enum
from typing import Iterator, Sequence

from . import numeration
from .numeration import level_count, zeck_encode


class NodeStatus(enum.IntEnum):
    TWO = 2
    THREE = 3


SON_STATUS: dict[NodeStatus, tuple[NodeStatus, ...]] = {
    NodeStatus.THREE: (NodeStatus.TWO, NodeStatus.THREE, NodeStatus.THREE),
    NodeStatus.TWO: (NodeStatus.TWO, NodeStatus.THREE),
}

Path = tuple[int, ...]


def arity(status: NodeStatus) -> int:
    return len(SON_STATUS[status])


def status_of(path: Sequence[int], root: NodeStatus = NodeStatus.THREE) -> NodeStatus:
    """Replay the production rules along `path` from the root."""
    st = root
    for depth, s in enumerate(path):
        sons = SON_STATUS[st]
        if not 0 <= s < len(sons):
            raise ValueError(
                f"son index {s} invalid for a {int(st)}-node at depth {depth}"
            )
        st = sons[s]
    return st


def sons(path: Sequence[int], root: NodeStatus = NodeStatus.THREE) -> list[Path]:
    st = status_of(path, root)
    return [tuple(path) + (s,) for s in range(arity(st))]


def father(path: Sequence[int]) -> Path:
    if not path:
        raise ValueError("the root has no father")
    return tuple(path[:-1])


def first_number_of_level(level: int, root: NodeStatus = NodeStatus.THREE) -> int:
    return 1 + sum(level_count(j, int(root)) for j in range(level))


def path_to_number(path: Sequence[int], root: NodeStatus = NodeStatus.THREE) -> int:
    """Breadth-first, left-to-right number of the node at `path` (root = 1)."""
    level = len(path)
    index = 0  # rank within the level
    st = root
    for depth, s in enumerate(path):
        below = level - depth - 1
        son_statuses = SON_STATUS[st]
        if not 0 <= s < len(son_statuses):
            raise ValueError(f"son index {s} invalid for a {int(st)}-node")
        for j in range(s):
            index += level_count(below, int(son_statuses[j]))
        st = son_statuses[s]
    return first_number_of_level(level, root) + index


def number_to_path(n: int, root: NodeStatus = NodeStatus.THREE) -> Path:
    """Inverse of :func:`path_to_number`."""
    if n < 1:
        raise ValueError("node numbers start at 1")
    level = 0
    while first_number_of_level(level + 1, root) <= n:
        level += 1
    index = n - first_number_of_level(level, root)
    path: list[int] = []
    st = root
    for depth in range(level):
        below = level - depth - 1
        for s, son_st in enumerate(SON_STATUS[st]):
            width = level_count(below, int(son_st))
            if index < width:
                path.append(s)
                st = son_st
                break
            index -= width
        else:  # pragma: no cover - exhaustiveness guard
            raise AssertionError("index exceeded level width")
    return tuple(path)


def coordinate_of(n: int) -> str:
    """Zeckendorf word of the node number; the node's coordinate."""
    return zeck_encode(n)


def iter_level(level: int, root: NodeStatus = NodeStatus.THREE) -> Iterator[Path]:
    """All paths of one level in left-to-right order."""
    if level == 0:
        yield ()
        return
    for prefix in iter_level(level - 1, root):
        st = status_of(prefix, root)
        for s in range(arity(st)):
            yield prefix + (s,)


# ---------------------------------------------------------------------------
# Coordinate digits: the arc-digit values used in tile addresses.
#
# Going father -> son, the crossed side carries the plain digit s+1 below a
# 3-node and s+2 below a 2-node (in both grids), so digit strings are
# independent of the tiling.
# ---------------------------------------------------------------------------


def son_to_digit(status: NodeStatus, s: int) -> int:
    if not 0 <= s < arity(status):
        raise ValueError(f"son index {s} invalid for a {int(status)}-node")
    return s + 1 if status is NodeStatus.THREE else s + 2


def digit_to_son(status: NodeStatus, digit: int) -> int:
    s = digit - 1 if status is NodeStatus.THREE else digit - 2
    if not 0 <= s < arity(status):
        raise ValueError(f"digit {digit} invalid below a {int(status)}-node")
    return s


def path_to_digits(path: Sequence[int], root: NodeStatus = NodeStatus.THREE) -> tuple[int, ...]:
    digits: list[int] = []
    st = root
    for s in path:
        digits.append(son_to_digit(st, s))
        st = SON_STATUS[st][s]
    return tuple(digits)


def digits_to_path(digits: Sequence[int], root: NodeStatus = NodeStatus.THREE) -> Path:
    path: list[int] = []
    st = root
    for d in digits:
        s = digit_to_son(st, d)
        path.append(s)
        st = SON_STATUS[st][s]
    return tuple(path)
