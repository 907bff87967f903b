import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import naive_white, naive_zero_forcing_number, pattern_matrices
from sscmod.errors import CapacityError, DimensionError, ParameterError
from sscmod.oracle import worst_case_instance
from sscmod.pattern import PatternMatrix, hstack, q_transform, sample_realization
from sscmod.zero_forcing import (
    color_change,
    diagonal_witness,
    is_full_row_rank,
    is_zero_forcing_set,
    joint_zero_forcing_number,
    zero_forcing_number,
)


def test_augmented_worked_example_is_fully_forced(a2, b_star):
    res = color_change(hstack(a2, b_star))
    assert res.white == frozenset()
    # sweep 1: columns 2 and 3 of A force rows 2 and 3; sweep 2: B's first column forces row 1
    assert res.trace == ((1, 1), (2, 2), (0, 3))


def test_a1_has_no_lone_star(a1):
    assert color_change(a1).white == {0, 1, 2}
    assert color_change(a1).trace == ()


def test_star_diagonal_forces_in_one_sweep():
    res = color_change(PatternMatrix.diagonal(5))
    assert res.white == frozenset()
    assert sorted(res.trace) == [(i, i) for i in range(5)]


def test_color_change_index_out_of_range():
    with pytest.raises(ParameterError):
        color_change(PatternMatrix.zeros(2, 2), [2])


@given(pattern_matrices(max_rows=6, max_cols=7), st.data())
def test_matches_set_based_rule(m, data):
    black = data.draw(st.sets(st.integers(0, m.rows - 1)))
    assert color_change(m, black).white == naive_white(m, black)


@given(pattern_matrices(max_rows=6, max_cols=7), st.data())
def test_trace_invariants(m, data):
    black = data.draw(st.sets(st.integers(0, m.rows - 1)))
    res = color_change(m, black)
    forced = [r for r, _ in res.trace]
    columns = [c for _, c in res.trace]
    assert len(set(columns)) == len(columns)          # one force per column
    assert len(set(forced)) == len(forced)
    assert not res.white & set(forced)
    assert res.white | set(forced) | black == set(range(m.rows))
    # fixed point
    again = color_change(m, set(black) | set(forced))
    assert again.white == res.white and again.trace == ()


@given(pattern_matrices(max_rows=6, max_cols=6), st.data())
def test_monotone_in_initial_black_set(m, data):
    small = data.draw(st.sets(st.integers(0, m.rows - 1)))
    big = small | data.draw(st.sets(st.integers(0, m.rows - 1)))
    assert color_change(m, big).white <= color_change(m, small).white


def test_full_row_rank_examples(a1):
    assert is_full_row_rank(PatternMatrix.diagonal(4))
    m = PatternMatrix(["* 0 ?", "0 0 0", "? * *"])
    assert not is_full_row_rank(m)


def test_a1_never_full_rank_with_two_columns(a1):
    qa1 = q_transform(a1)
    for flat in itertools.product((0, 1, 2), repeat=6):
        b = PatternMatrix(np.array(flat, dtype=np.int8).reshape(3, 2))
        assert not (is_full_row_rank(hstack(a1, b)) and is_full_row_rank(hstack(qa1, b)))


@given(pattern_matrices(max_rows=5, max_cols=5))
def test_zero_forcing_number_zero_iff_full_rank(m):
    z, _ = zero_forcing_number(m)
    assert (z == 0) == is_full_row_rank(m)


def test_zero_forcing_set_examples(a1):
    assert is_zero_forcing_set(a1, {0, 1, 2})
    assert is_zero_forcing_set(a1, {0, 2})
    assert not is_zero_forcing_set(a1, {2})
    assert is_zero_forcing_set(q_transform(a1), {1, 2})


def test_worked_example_zero_forcing_numbers(a1, a2):
    assert zero_forcing_number(a1)[0] == 2
    assert zero_forcing_number(q_transform(a1))[0] == 2
    z, witness = joint_zero_forcing_number(a2, q_transform(a2))
    assert z == 3 and witness == {0, 1, 2}


def test_zero_forcing_number_star_diagonal():
    assert zero_forcing_number(PatternMatrix.diagonal(6)) == (0, frozenset())


def test_worst_case_zero_forcing_number_n6():
    a = worst_case_instance(6).a_bar
    z, witness = zero_forcing_number(a)
    assert z == naive_zero_forcing_number(a) == 4
    assert is_zero_forcing_set(a, witness)


def test_zero_forcing_cap():
    with pytest.raises(CapacityError):
        zero_forcing_number(PatternMatrix.zeros(21, 1))


def test_joint_number_star_diagonal():
    d = PatternMatrix.diagonal(4)
    assert joint_zero_forcing_number(d, d)[0] == 0


def test_joint_number_dimension_check():
    with pytest.raises(DimensionError):
        joint_zero_forcing_number(PatternMatrix.zeros(2, 2), PatternMatrix.zeros(3, 3))


def test_joint_at_least_individual_numbers_random():
    rng = np.random.default_rng(11)
    for _ in range(200):
        a = PatternMatrix(rng.integers(0, 3, size=(5, 5)))
        qa = q_transform(a)
        zj, witness = joint_zero_forcing_number(a, qa)
        assert zj >= max(zero_forcing_number(a)[0], zero_forcing_number(qa)[0])
        assert is_zero_forcing_set(a, witness) and is_zero_forcing_set(qa, witness)


@given(st.integers(1, 5).flatmap(lambda n: pattern_matrices(rows=n, cols=n)))
def test_zero_forcing_numbers_match_naive_search(a):
    qa = q_transform(a)
    assert zero_forcing_number(a)[0] == naive_zero_forcing_number(a)
    assert joint_zero_forcing_number(a, qa)[0] == naive_zero_forcing_number(a, qa)


def test_diagonal_witness_examples():
    assert diagonal_witness({0}, 2) == PatternMatrix(["*", "0"])
    w = diagonal_witness({3, 1}, 4)
    assert w == PatternMatrix(["0 0", "* 0", "0 0", "0 *"])
    with pytest.raises(ParameterError):
        diagonal_witness({4}, 4)


@given(st.integers(1, 5).flatmap(lambda n: pattern_matrices(rows=n, cols=n)))
def test_common_forcing_set_gives_feasible_witness(a):
    qa = q_transform(a)
    z, v = joint_zero_forcing_number(a, qa)
    if z == 0:
        return
    w = diagonal_witness(v, a.rows)
    assert is_full_row_rank(hstack(a, w)) and is_full_row_rank(hstack(qa, w))


@pytest.mark.parametrize("n", [6, 8, 10])
def test_worst_case_four_column_witness(n):
    a = worst_case_instance(n).a_bar
    w = diagonal_witness({0, n - 3, n - 2, n - 1}, n)
    assert is_full_row_rank(hstack(a, w)) and is_full_row_rank(hstack(q_transform(a), w))


def _numerical_row_rank(x):
    sv = np.linalg.svd(x, compute_uv=False)
    return int(np.count_nonzero(sv > 1e-8 * sv[0])) if sv[0] > 0 else 0


@given(pattern_matrices(min_rows=1, max_rows=5, min_cols=1, max_cols=7,
                        alphabet=(0, 0, 1, 1, 2)), st.integers(0, 2**32 - 1))
def test_full_rank_verdict_holds_for_realizations(m, seed):
    if not is_full_row_rank(m):
        return
    rng = np.random.default_rng(seed)
    for _ in range(100):
        assert _numerical_row_rank(sample_realization(m, rng)) == m.rows
