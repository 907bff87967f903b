"""Greedy column-by-column structural modification."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .controllability import ModificationResult, SystemEvaluator
from .errors import StateError
from .pattern import Entry, PatternMatrix, StructuredSystem
from .zero_forcing import _mask_to_set, forcing_columns


@dataclass
class GreedyState:
    b: PatternMatrix
    remaining: set            # J: columns still identical to B_bar (0-based)
    white: frozenset          # I: union of white rows of both augmented tests (0-based)
    history: list = field(default_factory=list)  # (iteration, i*, j*, distance, white_total, cost)


def _initial_state(ev: SystemEvaluator) -> GreedyState:
    sys = ev.sys
    w1, w2 = ev.white_masks(sys.b_bar)
    return GreedyState(b=sys.b_bar, remaining=set(range(sys.m)), white=_mask_to_set(w1 | w2))


def greedy_step(sys: StructuredSystem, state: GreedyState, epsilon: Optional[int] = None,
                evaluator: Optional[SystemEvaluator] = None):
    """Best single-column rewrite over (i, j) in I x J.

    Column j of the candidate gets a Star at row i and Zero on the other rows
    of I; rows outside I keep their current values. Ties go to the smallest
    (j, i). Returns ``(i, j, candidate, breakdown)``.
    """
    if not state.white or not state.remaining:
        raise StateError("greedy_step needs nonempty white rows and remaining columns")
    ev = evaluator if evaluator is not None else SystemEvaluator(sys, epsilon)
    cells = state.b.cells
    bbar = sys.b_bar.cells
    rows = sorted(state.white)
    white_bits = 0
    for i in rows:
        white_bits |= 1 << i

    star, nz = list(state.b.star_masks), list(state.b.nonzero_masks)
    col_dist = np.count_nonzero(cells != bbar, axis=0)
    base_dist = int(col_dist.sum())

    best = None
    for j in sorted(state.remaining):
        others = [(star[k], nz[k]) for k in range(sys.m) if k != j and star[k]]
        keep_star = star[j] & ~white_bits
        keep_nz = nz[j] & ~white_bits
        col = cells[:, j].copy()
        col[rows] = Entry.ZERO
        for i in rows:
            col[i] = Entry.STAR
            dist = base_dist - int(col_dist[j]) + int(np.count_nonzero(col != bbar[:, j]))
            col[i] = Entry.ZERO
            bit = 1 << i
            w1, w2 = ev.white_masks_from_columns(others + [(keep_star | bit, keep_nz | bit)])
            whites = w1.bit_count() + w2.bit_count()
            c = dist + ev.epsilon * whites
            if best is None or c < best[0]:
                best = (c, i, j, dist, whites)

    c, i, j, dist, whites = best
    arr = cells.copy()
    arr[rows, j] = Entry.ZERO
    arr[i, j] = Entry.STAR
    candidate = PatternMatrix(arr)
    return i, j, candidate, ev.cost(candidate)


def greedy_modify(sys: StructuredSystem, epsilon: Optional[int] = None,
                  time_limit: Optional[float] = None) -> ModificationResult:
    ev = SystemEvaluator(sys, epsilon)
    state = _initial_state(ev)
    start = time.monotonic()
    status = None
    while state.white and state.remaining:
        if time_limit is not None and time.monotonic() - start > time_limit:
            status = "timeout"
            break
        i, j, b, bd = greedy_step(sys, state, evaluator=ev)
        state.b = b
        state.remaining.discard(j)
        w1, w2 = ev.white_masks(b)
        state.white = _mask_to_set(w1 | w2)
        state.history.append((len(state.history) + 1, i, j, bd.distance, bd.white_total, bd.total))
    bd = ev.cost(state.b)
    if status is None:
        status = "ok" if bd.controllable else "infeasible"
    return ModificationResult(algo="greedy", b=state.b, breakdown=bd, status=status,
                              history=state.history)
