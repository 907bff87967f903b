"""Strong structural controllability test, the penalized cost and feasibility bounds."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import DimensionError, ParameterError
from .pattern import Entry, PatternMatrix, StructuredSystem, hamming_dist, q_transform
from .zero_forcing import (
    _mask_to_set,
    forcing_columns,
    joint_zero_forcing_number,
    white_mask,
    zero_forcing_number,
)


@dataclass(frozen=True)
class SscVerdict:
    controllable: bool
    white_first: frozenset   # whites of [A B]
    white_second: frozenset  # whites of [Q(A) B]


@dataclass(frozen=True)
class CostBreakdown:
    distance: int
    white_total: int
    epsilon: int

    @property
    def total(self) -> int:
        return self.distance + self.epsilon * self.white_total

    @property
    def controllable(self) -> bool:
        return self.white_total == 0


@dataclass(frozen=True)
class FeasibilityReport:
    necessary_m: int         # max(Z(A), Z(Q(A)))
    sufficient_m: int        # joint zero forcing number
    witness: frozenset       # a minimum common zero forcing set (0-based)
    z_a: int
    z_qa: int
    m: int
    n: int

    @property
    def cost_lower(self) -> int:
        return self.necessary_m

    @property
    def cost_upper(self) -> int:
        return self.n * self.sufficient_m

    @property
    def necessary_holds(self) -> bool:
        return self.m >= self.necessary_m

    @property
    def sufficient_holds(self) -> bool:
        return self.m >= self.sufficient_m


def default_epsilon(sys: StructuredSystem) -> int:
    return sys.n * sys.m + 1


def _check_b(sys: StructuredSystem, b: PatternMatrix):
    if b.shape != sys.b_bar.shape:
        raise DimensionError(f"input pattern has shape {b.shape}, expected {sys.b_bar.shape}")


class SystemEvaluator:
    """Precomputed forcing columns of A and Q(A) for repeated evaluation of candidate B.

    Every cost query is two color change runs over bitmask columns.
    """

    def __init__(self, sys: StructuredSystem, epsilon: Optional[int] = None):
        if epsilon is None:
            epsilon = default_epsilon(sys)
        if epsilon <= sys.n * sys.m:
            raise ParameterError(f"epsilon must exceed n*m = {sys.n * sys.m}, got {epsilon}")
        self.sys = sys
        self.epsilon = int(epsilon)
        self.qa = q_transform(sys.a_bar)
        self.a_cols = forcing_columns(sys.a_bar.star_masks, sys.a_bar.nonzero_masks)
        self.qa_cols = forcing_columns(self.qa.star_masks, self.qa.nonzero_masks)
        self.full = (1 << sys.n) - 1

    def white_masks_from_columns(self, b_cols: Sequence[tuple[int, int]]) -> tuple[int, int]:
        return (white_mask(self.a_cols + list(b_cols), self.full),
                white_mask(self.qa_cols + list(b_cols), self.full))

    def white_masks(self, b: PatternMatrix) -> tuple[int, int]:
        return self.white_masks_from_columns(forcing_columns(b.star_masks, b.nonzero_masks))

    def white_total(self, b: PatternMatrix) -> int:
        w1, w2 = self.white_masks(b)
        return w1.bit_count() + w2.bit_count()

    def cost(self, b: PatternMatrix) -> CostBreakdown:
        return CostBreakdown(hamming_dist(b, self.sys.b_bar), self.white_total(b), self.epsilon)


def is_ssc(sys: StructuredSystem, b: Optional[PatternMatrix] = None) -> SscVerdict:
    b = sys.b_bar if b is None else b
    _check_b(sys, b)
    w1, w2 = SystemEvaluator(sys).white_masks(b)
    return SscVerdict(controllable=(w1 | w2) == 0,
                      white_first=_mask_to_set(w1), white_second=_mask_to_set(w2))


def white_index_set(sys: StructuredSystem, b: Optional[PatternMatrix] = None) -> frozenset:
    v = is_ssc(sys, b)
    return v.white_first | v.white_second


def is_feasible_member(b: PatternMatrix, b_bar: PatternMatrix) -> bool:
    """True iff b writes Any only where b_bar already has Any."""
    if b.shape != b_bar.shape:
        raise DimensionError(f"shapes {b.shape} and {b_bar.shape} differ")
    return not np.any((b.cells == Entry.ANY) & (b_bar.cells != Entry.ANY))


def cost(sys: StructuredSystem, b: PatternMatrix, epsilon: Optional[int] = None) -> CostBreakdown:
    _check_b(sys, b)
    return SystemEvaluator(sys, epsilon).cost(b)


def feasibility_report(sys: StructuredSystem) -> FeasibilityReport:
    """Zero forcing bounds on the number of input columns and on the optimal cost.

    Exhaustive, so subject to the zero forcing row cap.
    """
    a = sys.a_bar
    qa = q_transform(a)
    z_a, _ = zero_forcing_number(a)
    z_qa, _ = zero_forcing_number(qa)
    z_joint, witness = joint_zero_forcing_number(a, qa)
    return FeasibilityReport(necessary_m=max(z_a, z_qa), sufficient_m=z_joint, witness=witness,
                             z_a=z_a, z_qa=z_qa, m=sys.m, n=sys.n)


@dataclass
class ModificationResult:
    """Outcome of a modification run.

    ``status`` is ``"ok"`` when the returned ``b`` makes the system strongly
    structurally controllable, ``"infeasible"`` when the run ended with white
    rows left, and ``"timeout"`` when a time limit cut it short.
    """

    algo: str
    b: PatternMatrix
    breakdown: CostBreakdown
    status: str
    history: list = None

    @property
    def cost(self) -> int:
        return self.breakdown.total

    @property
    def controllable(self) -> bool:
        return self.breakdown.controllable
