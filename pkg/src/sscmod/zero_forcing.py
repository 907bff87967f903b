"""Color change rule, pattern full-row-rank test and zero forcing numbers."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .errors import CapacityError, DimensionError, ParameterError
from .pattern import Entry, PatternMatrix

ZF_CAP = 20


@dataclass(frozen=True)
class ColorChangeResult:
    white: frozenset
    trace: tuple = field(default=())  # (forced_row, forcing_column), 0-based

    @property
    def forced(self) -> frozenset:
        return frozenset(row for row, _ in self.trace)


def _to_mask(rows: Iterable[int], p: int) -> int:
    mask = 0
    for i in rows:
        if not 0 <= i < p:
            raise ParameterError(f"row index {i} out of range for {p} rows")
        mask |= 1 << i
    return mask


def _mask_to_set(mask: int) -> frozenset:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return frozenset(out)


def forcing_columns(star: Sequence[int], nonzero: Sequence[int]) -> list[tuple[int, int]]:
    """Keep only columns that contain a Star; the rest can never force."""
    return [(s, z) for s, z in zip(star, nonzero) if s]


def white_mask(columns: Sequence[tuple[int, int]], white: int) -> int:
    """Run the color change rule on bitmask columns and return the final white mask.

    A column forces row i when, restricted to the current white rows, its only
    nonzero entry is a Star at row i. Forces of one sweep are collected before
    the white set is updated.
    """
    while white:
        deleted = 0
        for s, z in columns:
            x = z & white
            if x and not (x & (x - 1)) and x & s:
                deleted |= x
        if not deleted:
            break
        white &= ~deleted
    return white


def color_change(m: PatternMatrix, initially_black: Iterable[int] = ()) -> ColorChangeResult:
    p = m.rows
    white = ((1 << p) - 1) & ~_to_mask(initially_black, p)
    star, nz = m.star_masks, m.nonzero_masks
    trace = []
    while white:
        deleted = 0
        for j in range(m.cols):
            s = star[j]
            if not s:
                continue
            x = nz[j] & white
            if x and not (x & (x - 1)) and x & s and not x & deleted:
                deleted |= x
                trace.append((x.bit_length() - 1, j))
        if not deleted:
            break
        white &= ~deleted
    return ColorChangeResult(white=_mask_to_set(white), trace=tuple(trace))


def is_full_row_rank(m: PatternMatrix) -> bool:
    cols = forcing_columns(m.star_masks, m.nonzero_masks)
    return white_mask(cols, (1 << m.rows) - 1) == 0


def is_zero_forcing_set(m: PatternMatrix, v0: Iterable[int]) -> bool:
    p = m.rows
    white = ((1 << p) - 1) & ~_to_mask(v0, p)
    return white_mask(forcing_columns(m.star_masks, m.nonzero_masks), white) == 0


def _min_common_forcing_set(matrices: Sequence[PatternMatrix]) -> tuple[int, frozenset]:
    p = matrices[0].rows
    if p > ZF_CAP:
        raise CapacityError(f"zero forcing search is capped at {ZF_CAP} rows, got {p}")
    all_rows = (1 << p) - 1
    col_sets = [forcing_columns(m.star_masks, m.nonzero_masks) for m in matrices]
    for k in range(p + 1):
        for combo in combinations(range(p), k):
            black = 0
            for i in combo:
                black |= 1 << i
            white = all_rows & ~black
            if all(white_mask(cols, white) == 0 for cols in col_sets):
                return k, frozenset(combo)
    raise AssertionError("the full row set is always a zero forcing set")


def zero_forcing_number(m: PatternMatrix) -> tuple[int, frozenset]:
    """Minimum zero forcing set size and the lexicographically first witness.

    Exhaustive over subsets by increasing size, so capped at ``ZF_CAP`` rows.
    """
    return _min_common_forcing_set([m])


def joint_zero_forcing_number(a: PatternMatrix, qa: PatternMatrix) -> tuple[int, frozenset]:
    if a.shape != qa.shape or a.rows != a.cols:
        raise DimensionError(f"need two square matrices of equal size, got {a.shape} and {qa.shape}")
    return _min_common_forcing_set([a, qa])


def diagonal_witness(v: Iterable[int], n: int) -> PatternMatrix:
    """n x |v| matrix whose k-th column has a single Star at the k-th smallest row of v."""
    rows = sorted(set(v))
    if not rows:
        raise ParameterError("witness needs at least one row")
    if rows[0] < 0 or rows[-1] >= n:
        raise ParameterError(f"rows {rows} out of range for n={n}")
    arr = np.zeros((n, len(rows)), dtype=np.int8)
    for k, i in enumerate(rows):
        arr[i, k] = Entry.STAR
    return PatternMatrix(arr)
