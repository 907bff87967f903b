import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import naive_q, naive_white, pattern_matrices
from sscmod.errors import DimensionError, ParameterError, PatternParseError
from sscmod.pattern import (
    Entry,
    PatternMatrix,
    StructuredSystem,
    format_pattern,
    format_system,
    hamming_dist,
    hstack,
    member_check,
    parse_pattern,
    parse_system,
    q_transform,
    sample_realization,
)


def test_entry_alphabet():
    assert [e.char for e in Entry] == ["0", "*", "?"]
    assert Entry.from_char("?") is Entry.ANY
    with pytest.raises(PatternParseError):
        Entry.from_char("x")


def test_hstack_scalar():
    out = hstack(PatternMatrix(["*"]), PatternMatrix(["0"]))
    assert out == PatternMatrix(["* 0"])


def test_hstack_worked_example(a2, b_star):
    expected = PatternMatrix(["0 0 0 * 0", "0 * 0 * 0", "0 0 * 0 *"])
    assert hstack(a2, b_star) == expected


def test_hstack_zero_column_keeps_white_set(a1):
    extended = hstack(a1, PatternMatrix.zeros(3, 1))
    assert naive_white(extended) == naive_white(a1)


def test_hstack_rejects_row_mismatch():
    with pytest.raises(DimensionError):
        hstack(PatternMatrix.zeros(2, 2), PatternMatrix.zeros(3, 1))


@given(pattern_matrices(rows=3), pattern_matrices(rows=3))
def test_hstack_preserves_entries(left, right):
    out = hstack(left, right)
    assert out.cols == left.cols + right.cols
    assert np.array_equal(out.cells[:, :left.cols], left.cells)
    assert np.array_equal(out.cells[:, left.cols:], right.cells)


def test_q_transform_worked_example(a2):
    assert q_transform(a2) == PatternMatrix(["* 0 0", "0 ? 0", "0 0 ?"])


def test_q_transform_all_any_fixed_point():
    m = PatternMatrix.filled(4, 4, Entry.ANY)
    assert q_transform(m) == m


def test_q_transform_non_square():
    with pytest.raises(DimensionError):
        q_transform(PatternMatrix.zeros(2, 3))


@given(st.integers(1, 6).flatmap(lambda n: pattern_matrices(rows=n, cols=n)))
def test_q_transform_matches_case_analysis(a):
    assert q_transform(a) == naive_q(a)
    # the image always has a non-Zero diagonal with Any where A had Star or Any
    qq = q_transform(q_transform(a))
    assert np.all(np.diagonal(qq.cells) == Entry.ANY)


@given(st.integers(1, 5).flatmap(lambda n: pattern_matrices(rows=n, cols=n)))
def test_q_transform_idempotent_on_any_diagonal(a):
    arr = a.cells.copy()
    np.fill_diagonal(arr, Entry.ANY)
    m = PatternMatrix(arr)
    assert q_transform(m) == m


def test_hamming_examples():
    b = PatternMatrix(["* 0", "? *"])
    assert hamming_dist(b, b) == 0
    assert hamming_dist(PatternMatrix(["* 0"]), PatternMatrix(["0 0"])) == 1
    with pytest.raises(DimensionError):
        hamming_dist(PatternMatrix.zeros(1, 2), PatternMatrix.zeros(2, 1))


@given(st.data())
def test_hamming_metric_axioms(data):
    p, q = data.draw(st.integers(1, 4)), data.draw(st.integers(1, 4))
    x, y, z = (data.draw(pattern_matrices(rows=p, cols=q)) for _ in range(3))
    assert hamming_dist(x, y) == hamming_dist(y, x)
    assert (hamming_dist(x, y) == 0) == (x == y)
    assert hamming_dist(x, z) <= hamming_dist(x, y) + hamming_dist(y, z)


def test_realization_all_zero():
    rng = np.random.default_rng(0)
    assert np.all(sample_realization(PatternMatrix.zeros(3, 4), rng) == 0.0)


def test_realization_star_range():
    rng = np.random.default_rng(1)
    v = sample_realization(PatternMatrix(["*"]), rng, (0.1, 2.0))[0, 0]
    assert 0.1 <= abs(v) <= 2.0


def test_realization_any_is_zero_half_the_time():
    rng = np.random.default_rng(2)
    m = PatternMatrix(["?"])
    zeros = sum(sample_realization(m, rng)[0, 0] == 0.0 for _ in range(10_000))
    assert 0.45 <= zeros / 10_000 <= 0.55


def test_realization_rejects_nonpositive_range():
    with pytest.raises(ParameterError):
        sample_realization(PatternMatrix(["*"]), np.random.default_rng(0), (0.0, 1.0))


def test_realization_deterministic_per_stream():
    m = PatternMatrix(["* ?", "0 *"])
    r1 = sample_realization(m, np.random.default_rng(5))
    r2 = sample_realization(m, np.random.default_rng(5))
    assert np.array_equal(r1, r2)


def test_member_check_examples():
    assert member_check(np.zeros((2, 2)), PatternMatrix.zeros(2, 2))
    assert not member_check(np.array([[0.0]]), PatternMatrix(["*"]))
    assert not member_check(np.array([[1.0]]), PatternMatrix(["0"]))
    assert member_check(np.array([[0.0, 3.0]]), PatternMatrix(["? ?"]))
    with pytest.raises(DimensionError):
        member_check(np.zeros((1, 2)), PatternMatrix(["*"]))


@given(pattern_matrices(max_rows=6, max_cols=6), st.integers(0, 2**32 - 1))
def test_realization_round_trip(m, seed):
    assert member_check(sample_realization(m, np.random.default_rng(seed)), m)


# text format

def test_format_matches_canonical_layout():
    m = PatternMatrix(["* 0 ?", "0 0 *"])
    assert format_pattern(m) == "2 3\n* 0 ?\n0 0 *\n"


@given(pattern_matrices(max_rows=6, max_cols=6))
def test_pattern_text_round_trip(m):
    assert parse_pattern(format_pattern(m)) == m


def test_system_text_round_trip(a2, b_star):
    sys = StructuredSystem(a2, b_star)
    assert parse_system(format_system(sys)) == sys


@pytest.mark.parametrize("text, line, column", [
    ("2 2\n* 0\n0 x\n", 3, 3),
    ("2 2\n* 0\n", 3, None),
    ("2 2\n* 0 \n0 0\n", 2, 4),
    ("2 2\n*  0\n0 0\n", 2, None),
    ("2 x\n* 0\n", 1, None),
    ("1 1\n*", 2, None),
    ("1 1\n*\n0\n", 3, None),
])
def test_parse_errors_carry_location(text, line, column):
    with pytest.raises(PatternParseError) as info:
        parse_pattern(text)
    assert info.value.line == line
    if column is not None:
        assert info.value.column == column


def test_parse_system_rejects_row_mismatch():
    with pytest.raises(PatternParseError):
        parse_system("2 2\n0 0\n0 0\n3 1\n*\n*\n*\n")


def test_structured_system_invariants():
    with pytest.raises(DimensionError):
        StructuredSystem(PatternMatrix.zeros(2, 3), PatternMatrix.zeros(2, 1))
    with pytest.raises(DimensionError):
        StructuredSystem(PatternMatrix.zeros(2, 2), PatternMatrix.zeros(3, 1))


def test_pattern_matrix_is_immutable():
    m = PatternMatrix(["* 0"])
    with pytest.raises(ValueError):
        m.cells[0, 0] = 2
    assert m.with_entry(0, 1, Entry.ANY) == PatternMatrix(["* ?"])
    assert m == PatternMatrix(["* 0"])
