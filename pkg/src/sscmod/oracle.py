"""Exhaustive optimizer, benchmark instance families and a numerical controllability check."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterator, Optional

import numpy as np

from .controllability import SystemEvaluator
from .errors import CapacityError, DimensionError, ParameterError
from .pattern import Entry, PatternMatrix, StructuredSystem
from .seeding import INSTANCE, make_rng
from .zero_forcing import white_mask

ENUM_CAP = 1 << 24
WITNESS_CAP = 100


@dataclass(frozen=True)
class InstanceSpec:
    kind: str = "erdos_renyi"  # erdos_renyi | worst_case | from_file
    n: int = 5
    m: int = 5
    p_star: float = 0.45
    p_any: float = 0.1
    seed: int = 0

    def __post_init__(self):
        for name in ("p_star", "p_any"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ParameterError(f"{name} must lie in [0, 1], got {v}")
        if self.n < 1 or self.m < 1:
            raise ParameterError("n and m must be positive")


@dataclass
class OracleResult:
    optimal_cost: int
    optimizer_count: int       # number of minimizers over the feasible set
    witnesses: list            # first minimizers in enumeration order, capped
    feasible_count: int        # size of the feasible set
    epsilon: int

    @property
    def feasible(self) -> bool:
        return self.optimal_cost < self.epsilon


def feasible_set_size(b_bar: PatternMatrix) -> int:
    k = b_bar.count(Entry.ANY)
    return 2 ** (b_bar.rows * b_bar.cols - k) * 3 ** k


def _cell_choices(b_bar: PatternMatrix, full_alphabet: bool) -> list[tuple[int, ...]]:
    if full_alphabet:
        return [(0, 1, 2)] * b_bar.cells.size
    return [(0, 1, 2) if v == Entry.ANY else (0, 1) for v in b_bar.cells.ravel().tolist()]


def enumerate_assignments(b_bar: PatternMatrix, full_alphabet: bool = False) -> Iterator[tuple]:
    """Row-major odometer over cell values, Zero < Star < Any, first cell most significant."""
    return product(*_cell_choices(b_bar, full_alphabet))


def _evaluate_all(ev: SystemEvaluator, full_alphabet: bool):
    """Yield (values, distance, white_total) for every enumerated assignment."""
    b_bar = ev.sys.b_bar
    n, m = b_bar.shape
    bbar_flat = b_bar.cells.ravel().tolist()
    cell_col = [k % m for k in range(n * m)]
    cell_bit = [1 << (k // m) for k in range(n * m)]
    full = ev.full
    a_cols, qa_cols = ev.a_cols, ev.qa_cols

    for values in enumerate_assignments(b_bar, full_alphabet):
        star = [0] * m
        nz = [0] * m
        dist = 0
        for k, v in enumerate(values):
            if v != bbar_flat[k]:
                dist += 1
            if v:
                j = cell_col[k]
                nz[j] |= cell_bit[k]
                if v == 1:
                    star[j] |= cell_bit[k]
        b_cols = [(s, z) for s, z in zip(star, nz) if s]
        whites = (white_mask(a_cols + b_cols, full).bit_count()
                  + white_mask(qa_cols + b_cols, full).bit_count())
        yield values, dist, whites


def _values_to_matrix(values, shape) -> PatternMatrix:
    return PatternMatrix(np.array(values, dtype=np.int8).reshape(shape))


def brute_force_optimal(sys: StructuredSystem, epsilon: Optional[int] = None,
                        cap: int = ENUM_CAP) -> OracleResult:
    size = feasible_set_size(sys.b_bar)
    if size > cap:
        raise CapacityError(f"feasible set has {size} members, cap is {cap}")
    ev = SystemEvaluator(sys, epsilon)
    best = None
    count = 0
    witnesses = []
    for values, dist, whites in _evaluate_all(ev, full_alphabet=False):
        c = dist + ev.epsilon * whites
        if best is None or c < best:
            best, count, witnesses = c, 0, []
        if c == best:
            count += 1
            if len(witnesses) < WITNESS_CAP:
                witnesses.append(values)
    shape = sys.b_bar.shape
    return OracleResult(optimal_cost=best, optimizer_count=count,
                        witnesses=[_values_to_matrix(v, shape) for v in witnesses],
                        feasible_count=size, epsilon=ev.epsilon)


def min_distance_controllable(sys: StructuredSystem, cap: int = ENUM_CAP):
    """Minimum Hamming distance over all of {0,*,?}^(n x m) subject to SSC.

    Returns ``(distance, minimizers)`` with ``distance`` None when no input
    pattern makes the system controllable.
    """
    size = 3 ** sys.b_bar.cells.size
    if size > cap:
        raise CapacityError(f"{size} patterns to enumerate, cap is {cap}")
    ev = SystemEvaluator(sys)
    best, argmin = None, []
    for values, dist, whites in _evaluate_all(ev, full_alphabet=True):
        if whites:
            continue
        if best is None or dist < best:
            best, argmin = dist, []
        if dist == best:
            argmin.append(_values_to_matrix(values, sys.b_bar.shape))
    return best, argmin


def worst_case_instance(n: int) -> StructuredSystem:
    """Adversarial family on which the greedy method pays n-2 while 4 changes suffice."""
    if n < 6:
        raise ParameterError(f"worst-case construction needs n >= 6, got {n}")
    a = np.full((n, n), Entry.STAR, dtype=np.int8)
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i == j:
                a[i - 1, j - 1] = Entry.ANY
            elif abs(i - j) > 1 and (max(i, j) <= n - 3 or min(i, j) >= n - 2):
                a[i - 1, j - 1] = Entry.ZERO
    return StructuredSystem(PatternMatrix(a), PatternMatrix.zeros(n, n))


def _random_pattern(rng: np.random.Generator, shape, p_star: float, p_any: float) -> PatternMatrix:
    is_any = rng.random(shape) < p_any
    is_star = rng.random(shape) < p_star
    cells = np.where(is_any, Entry.ANY, np.where(is_star, Entry.STAR, Entry.ZERO))
    return PatternMatrix(cells.astype(np.int8))


def erdos_renyi_instance(spec: InstanceSpec,
                         rng: Optional[np.random.Generator] = None) -> StructuredSystem:
    """Every cell independently: Any with p_any, otherwise Star with p_star, otherwise Zero."""
    if rng is None:
        rng = make_rng(spec.seed, INSTANCE)
    a = _random_pattern(rng, (spec.n, spec.n), spec.p_star, spec.p_any)
    b = _random_pattern(rng, (spec.n, spec.m), spec.p_star, spec.p_any)
    return StructuredSystem(a, b)


def make_instance(spec: InstanceSpec) -> StructuredSystem:
    if spec.kind == "erdos_renyi":
        return erdos_renyi_instance(spec)
    if spec.kind == "worst_case":
        return worst_case_instance(spec.n)
    raise ParameterError(f"cannot generate instances of kind {spec.kind!r}")


def kalman_controllable(a: np.ndarray, b: np.ndarray, tol: float = 1e-8) -> bool:
    """Numerical rank of [B, AB, ..., A^(n-1) B] against tol * largest singular value."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or b.ndim != 2 or b.shape[0] != a.shape[0]:
        raise DimensionError(f"incompatible shapes {a.shape} and {b.shape}")
    if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
        raise ParameterError("realizations must be finite")
    n = a.shape[0]
    blocks = [b]
    for _ in range(n - 1):
        blocks.append(a @ blocks[-1])
    ctrb = np.hstack(blocks)
    sv = np.linalg.svd(ctrb, compute_uv=False)
    if sv.size == 0 or sv[0] == 0.0:
        return False
    return int(np.count_nonzero(sv > tol * sv[0])) == n
