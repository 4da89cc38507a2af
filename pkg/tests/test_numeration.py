import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fibgrid.numeration import (
    BETA,
    PENTAGRID_MATRIX,
    FibConvention,
    char_polynomial,
    dominant_root,
    fib,
    level_count,
    level_kind_counts,
    mat_power,
    matrix_power_row_sum,
    poly_text,
    zeck_decode,
    zeck_encode,
    zeck_is_valid,
)

F12 = FibConvention.F12
F01 = FibConvention.F01
CLASSICAL = FibConvention.CLASSICAL


# -- independent oracle: expand the tree rules level by level ---------------


def expand_statuses(root: int, depth: int) -> list[list[int]]:
    rules = {3: (2, 3, 3), 2: (2, 3)}
    levels = [[root]]
    for _ in range(depth):
        levels.append([s for node in levels[-1] for s in rules[node]])
    return levels


class TestFib:
    def test_base_case(self):
        assert fib(1, F12) == 1

    def test_unfold_recurrence(self):
        # f1=1, f2=2, then f_{n+2} = f_{n+1} + f_n: 1,2,3,5,8,13,21
        assert fib(7, F12) == 21

    def test_f01_convention(self):
        # 1, 1, 2, 3 under f0 = f1 = 1
        assert fib(3, F01) == 3
        assert fib(0, F01) == 1

    def test_classical(self):
        assert [fib(n, CLASSICAL) for n in range(1, 8)] == [1, 1, 2, 3, 5, 8, 13]

    def test_below_range_raises(self):
        with pytest.raises(ValueError):
            fib(0, F12)
        with pytest.raises(ValueError):
            fib(-1, F01)

    def test_conventions_shift(self):
        for n in range(1, 30):
            assert fib(n, F12) == fib(n, F01) == fib(n + 1, CLASSICAL)

    def test_big_values_exact(self):
        # arbitrary precision: no silent overflow at f_{2*40+1}
        v = fib(81, F12)
        assert v == fib(80, F12) + fib(79, F12)
        assert v > 2**54


class TestLevelCount:
    def test_root_alone(self):
        assert level_count(0, 3) == 1

    def test_depth3_matches_rule_expansion(self):
        levels = expand_statuses(3, 3)
        assert level_count(3, 3) == len(levels[3]) == 21

    def test_two_node_root(self):
        levels = expand_statuses(2, 2)
        assert level_count(2, 2) == len(levels[2]) == 5

    def test_equals_odd_indexed_fib(self):
        for n in range(12):
            assert level_count(n, 3) == fib(2 * n + 1, F12)

    def test_recurrence_to_40(self):
        for n in range(41):
            assert level_count(n + 2, 3) == 3 * level_count(n + 1, 3) - level_count(n, 3)

    def test_matches_expansion_both_roots(self):
        for root in (2, 3):
            levels = expand_statuses(root, 8)
            for n, level in enumerate(levels):
                assert level_count(n, root) == len(level)


class TestMatrix:
    def test_identity_power(self):
        assert matrix_power_row_sum(PENTAGRID_MATRIX, 0, 1) == 1

    def test_first_power(self):
        assert matrix_power_row_sum(PENTAGRID_MATRIX, 1, 1) == 3

    def test_cube_by_hand(self):
        # [[2,1],[1,1]]^3 = [[13,8],[8,5]]
        assert mat_power(PENTAGRID_MATRIX, 3) == [[13, 8], [8, 5]]
        assert matrix_power_row_sum(PENTAGRID_MATRIX, 3, 1) == 21
        assert matrix_power_row_sum(PENTAGRID_MATRIX, 3, 1) == level_count(3, 3)

    def test_row_out_of_range(self):
        with pytest.raises(ValueError):
            matrix_power_row_sum(PENTAGRID_MATRIX, 2, 3)

    def test_row_sums_equal_level_counts(self):
        for n in range(13):
            assert matrix_power_row_sum(PENTAGRID_MATRIX, n, 1) == level_count(n, 3)
            assert matrix_power_row_sum(PENTAGRID_MATRIX, n, 2) == level_count(n, 2)

    def test_kind_counts_match_expansion(self):
        for n in range(10):
            threes, twos = level_kind_counts(n)
            level = expand_statuses(3, n)[n]
            assert threes == level.count(3)
            assert twos == level.count(2)


class TestCharPolynomial:
    def test_pentagrid(self):
        assert char_polynomial(PENTAGRID_MATRIX) == (1, -3, 1)
        assert poly_text((1, -3, 1)) == "X^2 - 3X + 1"

    def test_one_by_one(self):
        assert char_polynomial([[1]]) == (-1, 1)

    def test_identity_2x2(self):
        assert char_polynomial([[1, 0], [0, 1]]) == (1, -2, 1)

    def test_trivial_factor_removed(self):
        # [[0,1],[0,1]] has det(XI - M) = X^2 - X = X(X - 1)
        assert char_polynomial([[0, 1], [0, 1]]) == (-1, 1)

    def test_dominant_root_is_beta(self):
        root = dominant_root(char_polynomial(PENTAGRID_MATRIX))
        assert abs(root - BETA) < 1e-9
        assert abs(BETA - 2.6180339887) < 1e-9
        assert BETA < math.e


class TestZeckendorf:
    def test_one(self):
        assert zeck_encode(1) == "1"

    def test_five(self):
        # greedy over 1,2,3,5; "110" (3+2) is rejected by the no-11 rule
        assert zeck_encode(5) == "1000"

    def test_seven(self):
        assert zeck_encode(7) == "1010"  # 5 + 2

    def test_decode_rejects_malformed(self):
        for bad in ("11", "011", "", "102", "110"):
            with pytest.raises(ValueError):
                zeck_decode(bad)
            assert not zeck_is_valid(bad)

    def test_encode_requires_positive(self):
        with pytest.raises(ValueError):
            zeck_encode(0)

    @given(st.integers(min_value=1, max_value=10**9))
    def test_roundtrip(self, n):
        word = zeck_encode(n)
        assert "11" not in word
        assert word[0] == "1"
        assert zeck_decode(word) == n

    def test_roundtrip_dense_range(self):
        for n in range(1, 20_000):
            word = zeck_encode(n)
            assert "11" not in word
            assert zeck_decode(word) == n

    @given(st.integers(min_value=1, max_value=10**6 - 1))
    @settings(max_examples=200)
    def test_monotone_length_then_lex(self, n):
        a, b = zeck_encode(n), zeck_encode(n + 1)
        assert (len(a), a) < (len(b), b)

    def test_maximality_small(self):
        # among ALL binary expansions over the basis, the encoder's word is
        # the right-aligned lexicographic maximum
        basis = [1, 2, 3, 5, 8, 13, 21, 34, 55, 89, 144, 233]
        for n in range(1, 300):
            reps = []

            def search(i, remaining, bits):
                if remaining == 0:
                    reps.append(("".join(bits) + "0" * (i + 1)).lstrip("0"))
                    return
                if i < 0 or sum(basis[: i + 1]) < remaining:
                    return
                if basis[i] <= remaining:
                    search(i - 1, remaining - basis[i], bits + ["1"])
                search(i - 1, remaining, bits + ["0"])

            search(len(basis) - 1, n, [])
            width = max(len(r) for r in reps)
            best = max(r.rjust(width, "0") for r in reps)
            assert best.lstrip("0") == zeck_encode(n)
