from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from rowfinite import (FiniteRow, ShortColumnError, ZERO_ROW, ZeroRowError,
                       as_scalar, format_scalar, parse_scalar)


def row(*dense):
    return FiniteRow.from_dense(dense)


class TestScalarText:
    def test_integer_forms(self):
        assert parse_scalar("5") == 5
        assert parse_scalar("-7") == -7
        assert parse_scalar("+3") == 3
        assert format_scalar(Fraction(5)) == "5"

    def test_fraction_forms(self):
        assert parse_scalar("-1/2") == Fraction(-1, 2)
        assert format_scalar(Fraction(-1, 2)) == "-1/2"
        assert parse_scalar("6/4") == Fraction(3, 2)

    @pytest.mark.parametrize("bad", ["1.5", "1/0", "1/-2", "a", "", "1 / 2", "0x3"])
    def test_rejects_non_rational_literals(self, bad):
        with pytest.raises(ValueError):
            parse_scalar(bad)

    @given(st.fractions(min_value=-10**9, max_value=10**9, max_denominator=10**6))
    def test_round_trip(self, q):
        assert parse_scalar(format_scalar(q)) == q

    def test_as_scalar_coercions(self):
        assert as_scalar(3) == Fraction(3)
        assert as_scalar("2/6") == Fraction(1, 3)
        with pytest.raises(TypeError):
            as_scalar(0.5)


class TestLength:
    def test_zero_row(self):
        assert ZERO_ROW.length == -1
        assert FiniteRow().length == -1

    def test_unit_row(self):
        assert row(1, 0, 0).length == 0

    def test_rightmost_nonzero(self):
        assert row(0, 2, -1, 0).length == 2

    def test_stored_zeros_dropped(self):
        r = FiniteRow([(0, 0), (3, 5), (7, 0)])
        assert r.support == (3,)
        assert r.length == 3


class TestConstruction:
    def test_duplicate_column_rejected(self):
        with pytest.raises(ValueError, match="duplicate"):
            FiniteRow([(1, 2), (1, 3)])

    def test_negative_column_rejected(self):
        with pytest.raises(ValueError):
            FiniteRow([(-1, 2)])

    def test_unsorted_input_accepted(self):
        assert FiniteRow([(4, 1), (0, 2)]).support == (0, 4)

    def test_dense_round_trip(self):
        dense = [Fraction(0), Fraction(3), Fraction(-1, 2)]
        assert FiniteRow.from_dense(dense).to_dense() == dense

    def test_to_dense_width_guard(self):
        with pytest.raises(ValueError):
            row(1, 2).to_dense(1)


class TestAxpy:
    def test_zero_multiplier_is_identity(self):
        r = row(1, 2, 1)
        assert r.axpy(0, row(9, 9)) == r

    def test_gaussian_step_second_order_instance(self):
        # dst (0,3,4,1) plus -4 times (1,2,1) clears column 2
        dst = row(0, 3, 4, 1)
        src = row(1, 2, 1)
        assert dst.axpy(-4, src) == row(-4, -5, 0, 1)

    def test_exact_cancellation_to_zero(self):
        r = row(1, 1)
        out = r.axpy(-1, row(1, 1))
        assert out.is_zero and out.length == -1

    def test_operators_match_axpy(self):
        a, b = row(1, 2), row(0, 5, 3)
        assert a + b == a.axpy(1, b)
        assert a - b == a.axpy(-1, b)
        assert 2 * a == a.scale(2)
        assert -a == a.scale(-1)


finite_rows = st.builds(
    FiniteRow,
    st.lists(
        st.tuples(st.integers(min_value=0, max_value=12),
                  st.fractions(min_value=-20, max_value=20, max_denominator=8)),
        max_size=8,
        unique_by=lambda e: e[0],
    ),
)
small_scalars = st.fractions(min_value=-20, max_value=20, max_denominator=8)


class TestProperties:
    @given(finite_rows, small_scalars, finite_rows)
    def test_axpy_length_bound(self, r, c, s):
        assert r.axpy(c, s).length <= max(r.length, s.length)

    @given(finite_rows, small_scalars)
    def test_equal_length_cancellation_shrinks(self, r, c):
        # cancel the rightmost entries of two equal-length rows
        if r.is_zero:
            return
        other = r.scale(2)
        out = r.axpy(Fraction(-1, 2), other)
        assert out.length < r.length

    @given(finite_rows)
    def test_normalize_idempotent(self, r):
        if r.is_zero:
            return
        once = r.normalize_rightmost()
        assert once.leading == 1
        assert once.normalize_rightmost() == once
        assert once.length == r.length


class TestNormalize:
    def test_divides_by_rightmost(self):
        assert row(0, 2, -1).normalize_rightmost() == row(0, -2, 1)

    def test_already_normalized(self):
        r = FiniteRow([(1, Fraction(1, 2)), (2, 1)])
        assert r.normalize_rightmost() == r

    def test_single_entry(self):
        assert row(5).normalize_rightmost() == row(1)

    def test_zero_row_rejected(self):
        with pytest.raises(ZeroRowError):
            ZERO_ROW.normalize_rightmost()


class TestDotPrefix:
    def test_plain_product(self):
        assert row(2, 1).dot_prefix([1, -2]) == 0

    def test_zero_row_any_column(self):
        assert ZERO_ROW.dot_prefix([]) == 0

    def test_residual_of_solution_prefix(self):
        assert row(1, 1, 1).dot_prefix([1, 1, -2]) == 0

    def test_short_column_rejected(self):
        with pytest.raises(ShortColumnError):
            row(1, 0, 3).dot_prefix([1, 2])

    def test_string_column_entries(self):
        assert row(0, 2).dot_prefix(["7", "1/2"]) == 1


class TestMisc:
    def test_get(self):
        r = row(0, 5, 0, -2)
        assert r.get(1) == 5
        assert r.get(2) == 0
        assert r.get(99) == 0

    def test_leading(self):
        assert row(0, 5, -3).leading == -3
        with pytest.raises(ZeroRowError):
            _ = ZERO_ROW.leading

    def test_equality_and_hash(self):
        assert row(0, 1) == FiniteRow([(1, 1)])
        assert hash(row(0, 1)) == hash(FiniteRow([(1, 1)]))
        assert row(0, 1) != row(1)

    def test_repr_and_bool(self):
        assert "FiniteRow" in repr(row(1, 2))
        assert repr(ZERO_ROW) == "FiniteRow()"
        assert bool(row(1)) and not bool(ZERO_ROW)
