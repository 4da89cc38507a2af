"""Fibonacci sequences, splitting matrices and the Zeckendorf codec.

Everything here is exact integer arithmetic (Python bignums); no floating
point enters any computation except the explicitly numeric `dominant_root`.
"""

from __future__ import annotations

import enum
import math
from functools import lru_cache
from typing import Sequence


class FibConvention(enum.Enum):
    """Indexing conventions for the Fibonacci value sequence 1, 1, 2, 3, 5, ...

    All three enumerate the same values up to an index shift:

    * ``F12``       f(1) = 1, f(2) = 2   (so f(n) skips the duplicate 1)
    * ``F01``       f(0) = f(1) = 1
    * ``CLASSICAL`` f(1) = f(2) = 1
    """

    F12 = "f12"
    F01 = "f01"
    CLASSICAL = "classical"


_MIN_INDEX = {
    FibConvention.F12: 1,
    FibConvention.F01: 0,
    FibConvention.CLASSICAL: 1,
}

# Offset o such that fib(n, conv) == classical(n + o).
_CLASSICAL_OFFSET = {
    FibConvention.F12: 1,
    FibConvention.F01: 1,
    FibConvention.CLASSICAL: 0,
}


@lru_cache(maxsize=None)
def _classical(n: int) -> int:
    # classical(1) = classical(2) = 1
    if n <= 2:
        return 1
    a, b = 1, 1
    for _ in range(n - 2):
        a, b = b, a + b
    return b


def fib(n: int, conv: FibConvention = FibConvention.F12) -> int:
    """n-th Fibonacci number under the given indexing convention."""
    lo = _MIN_INDEX[conv]
    if n < lo:
        raise ValueError(f"index {n} below the range of {conv.value} (min {lo})")
    return _classical(n + _CLASSICAL_OFFSET[conv])


def convert_index(n: int, src: FibConvention, dst: FibConvention) -> int:
    """Map an index between conventions so the value is unchanged."""
    return n + _CLASSICAL_OFFSET[src] - _CLASSICAL_OFFSET[dst]


# ---------------------------------------------------------------------------
# Splitting matrices
# ---------------------------------------------------------------------------

Matrix = Sequence[Sequence[int]]

# Region splitting for the pentagrid quarter basis {quarter, strip}:
# a quarter sheds its leading tile and splits into two quarters and one
# strip; a strip splits into one quarter and one strip.
PENTAGRID_MATRIX: tuple[tuple[int, int], ...] = ((2, 1), (1, 1))
PENTAGRID_REGIONS = ("quarter", "strip")


def mat_mul(a: Matrix, b: Matrix) -> list[list[int]]:
    n, k, m = len(a), len(b), len(b[0])
    assert all(len(row) == k for row in a)
    return [
        [sum(a[i][t] * b[t][j] for t in range(k)) for j in range(m)]
        for i in range(n)
    ]


def mat_power(m: Matrix, n: int) -> list[list[int]]:
    """Exact integer matrix power; m**0 is the identity."""
    if n < 0:
        raise ValueError("negative matrix power")
    dim = len(m)
    result = [[int(i == j) for j in range(dim)] for i in range(dim)]
    base = [list(row) for row in m]
    while n:
        if n & 1:
            result = mat_mul(result, base)
        base = mat_mul(base, base)
        n >>= 1
    return result


def matrix_power_row_sum(m: Matrix, n: int, row: int) -> int:
    """Sum of the coefficients of 1-indexed `row` of m**n."""
    if not 1 <= row <= len(m):
        raise ValueError(f"row {row} out of range for a {len(m)}x{len(m)} matrix")
    return sum(mat_power(m, n)[row - 1])


def level_count(n: int, root_status: int = 3) -> int:
    """Number of tree nodes on level n below a 2-node or 3-node root.

    For a 3-node root this is fib(2n+1) under the F12 convention
    (1, 3, 8, 21, 55, ...); a 2-node root gives the second-row sums
    (1, 2, 5, 13, ...).  Both are row sums of the splitting matrix power.
    """
    if n < 0:
        raise ValueError("level must be >= 0")
    if root_status not in (2, 3):
        raise ValueError("root status must be 2 or 3")
    row = 1 if root_status == 3 else 2
    return matrix_power_row_sum(PENTAGRID_MATRIX, n, row)


def level_kind_counts(n: int) -> tuple[int, int]:
    """(three_nodes, two_nodes) on level n below a 3-node root."""
    first_row = mat_power(PENTAGRID_MATRIX, n)[0]
    return first_row[0], first_row[1]


# ---------------------------------------------------------------------------
# Characteristic polynomial (exact)
# ---------------------------------------------------------------------------

Poly = tuple[int, ...]  # coefficients, lowest degree first


def _poly_mul(a: Poly, b: Poly) -> Poly:
    out = [0] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        for j, cb in enumerate(b):
            out[i + j] += ca * cb
    return tuple(out)


def _poly_add(a: Poly, b: Poly) -> Poly:
    n = max(len(a), len(b))
    return tuple(
        (a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)
    )


def _poly_scale(a: Poly, k: int) -> Poly:
    return tuple(k * c for c in a)


def _char_det(entries: list[list[Poly]]) -> Poly:
    # Cofactor expansion over polynomial entries; dimensions here are tiny.
    n = len(entries)
    if n == 1:
        return entries[0][0]
    total: Poly = (0,)
    for j in range(n):
        minor = [row[:j] + row[j + 1 :] for row in entries[1:]]
        term = _poly_mul(entries[0][j], _char_det(minor))
        total = _poly_add(total, term if j % 2 == 0 else _poly_scale(term, -1))
    return total


def char_polynomial(m: Matrix) -> Poly:
    """det(X*I - m) with any trivial X^k factor removed.

    Returned as integer coefficients, lowest degree first, monic.
    The pentagrid matrix gives X^2 - 3X + 1, i.e. (1, -3, 1).
    """
    dim = len(m)
    if any(len(row) != dim for row in m):
        raise ValueError("matrix must be square")
    entries: list[list[Poly]] = [
        [((-m[i][j], 1) if i == j else (-m[i][j],)) for j in range(dim)]
        for i in range(dim)
    ]
    poly = list(_char_det(entries))
    while len(poly) > 1 and poly[0] == 0:  # strip X^k factor
        poly.pop(0)
    return tuple(poly)


def poly_text(poly: Poly) -> str:
    """Human-readable form, highest degree first, e.g. ``X^2 - 3X + 1``."""
    parts: list[str] = []
    for deg in range(len(poly) - 1, -1, -1):
        c = poly[deg]
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        if deg == 0:
            body = f"{mag}"
        else:
            x = "X" if deg == 1 else f"X^{deg}"
            body = x if mag == 1 else f"{mag}{x}"
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(f"{sign} {body}")
    return " ".join(parts) if parts else "0"


def dominant_root(poly: Poly) -> float:
    """Largest real root, by bisection on [0, 1 + sum|c|]."""

    def val(x: float) -> float:
        acc = 0.0
        for c in reversed(poly):
            acc = acc * x + c
        return acc

    hi = 1.0 + sum(abs(c) for c in poly)
    lo = 0.0
    # The leading coefficient is positive, so val(hi) > 0; scan down for a
    # sign change to bracket the largest root.
    step = hi / 4096.0
    x = hi
    while x > lo and val(x) > 0:
        x -= step
    if x <= lo:
        raise ValueError("no positive real root found")
    a, b = x, x + step
    for _ in range(200):
        mid = (a + b) / 2
        if val(mid) > 0:
            b = mid
        else:
            a = mid
    return (a + b) / 2


#: Growth rate of the pentagrid level counts: (3 + sqrt 5) / 2.
BETA = (3.0 + math.sqrt(5.0)) / 2.0


# ---------------------------------------------------------------------------
# Zeckendorf codec (standard Fibonacci representation)
# ---------------------------------------------------------------------------


def fib_basis_upto(n: int) -> list[int]:
    """F12 basis values 1, 2, 3, 5, 8, ... not exceeding n, ascending."""
    if n < 1:
        return []
    basis = [1, 2]
    while basis[-1] + basis[-2] <= n:
        basis.append(basis[-1] + basis[-2])
    if basis[-1] > n:
        basis.pop()
    return basis


def zeck_encode(n: int) -> str:
    """Greedy expansion over the basis 1, 2, 3, 5, 8, ...

    Produces the unique representation without the factor "11" (most
    significant digit first, no leading zero).
    """
    if n < 1:
        raise ValueError("zeck_encode requires n >= 1")
    basis = fib_basis_upto(n)
    bits: list[str] = []
    rest = n
    for value in reversed(basis):
        if value <= rest:
            bits.append("1")
            rest -= value
        else:
            bits.append("0")
    assert rest == 0
    return "".join(bits)


def zeck_decode(word: str) -> int:
    """Inverse of :func:`zeck_encode`; rejects malformed words."""
    if not word or any(ch not in "01" for ch in word):
        raise ValueError(f"not a binary word: {word!r}")
    if word[0] == "0":
        raise ValueError("leading zero in Zeckendorf word")
    if "11" in word:
        raise ValueError("factor '11' in Zeckendorf word")
    total = 0
    for i, ch in enumerate(reversed(word)):
        if ch == "1":
            total += fib(i + 1, FibConvention.F12)
    return total


def zeck_is_valid(word: str) -> bool:
    try:
        zeck_decode(word)
    except ValueError:
        return False
    return True
