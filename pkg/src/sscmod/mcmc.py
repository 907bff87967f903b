"""Annealed Metropolis chain over the feasible input patterns.

The chain moves between patterns at Hamming distance one, accepting with
``min(1, exp((c_old - c_new) / T))`` and cooling geometrically. The inner
loop of one temperature level runs in a numba kernel; the very same function
body runs as plain Python on lists (``backend="python"``), which is used for
n above 62 rows and to cross-check the compiled path.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .controllability import ModificationResult, SystemEvaluator, is_feasible_member
from .errors import CapacityError, ParameterError, StateError
from .oracle import enumerate_assignments, feasible_set_size
from .pattern import Entry, PatternMatrix, StructuredSystem
from .seeding import MCMC, make_rng

MAX_JIT_ROWS = 62
TRANSITION_CAP = 4096


@dataclass(frozen=True)
class McmcParams:
    r_max: int = 50_000
    t_start: float = 1.0
    t_stop: float = 1e-10
    alpha: float = 0.1
    seed: int = 0
    epsilon: Optional[int] = None  # defaults to n*m + 1

    def __post_init__(self):
        if self.r_max < 1:
            raise ParameterError(f"r_max must be >= 1, got {self.r_max}")
        if not 0 < self.t_stop <= self.t_start:
            raise ParameterError("need 0 < t_stop <= t_start")
        if not 0 < self.alpha < 1:
            raise ParameterError(f"alpha must lie in (0, 1), got {self.alpha}")

    def temperatures(self) -> list[float]:
        temps = []
        t = self.t_start
        while t >= self.t_stop:
            temps.append(t)
            t *= self.alpha
        return temps


@dataclass
class McmcTrace:
    temperature: np.ndarray
    cell: np.ndarray            # (k, 2) proposed cell, 0-based
    accepted: np.ndarray
    proposed_cost: np.ndarray
    current_cost: np.ndarray    # after the accept/reject decision
    best_cost_so_far: np.ndarray
    best_b: PatternMatrix = None
    best_cost: int = 0
    final_b: PatternMatrix = None
    final_cost: int = 0
    levels_run: int = 0
    timed_out: bool = False

    def __len__(self):
        return len(self.accepted)


# neighborhood and proposal

def neighborhood_size(b_bar: PatternMatrix) -> int:
    return b_bar.rows * b_bar.cols + b_bar.count(Entry.ANY)


def _slots(b_bar: PatternMatrix) -> tuple[np.ndarray, np.ndarray]:
    """One slot per neighbor: cells in row-major order, Any cells twice (alternative 0, 1)."""
    cells, alts = [], []
    for k, v in enumerate(b_bar.cells.ravel().tolist()):
        cells.append(k)
        alts.append(0)
        if v == Entry.ANY:
            cells.append(k)
            alts.append(1)
    return np.array(cells, dtype=np.int64), np.array(alts, dtype=np.int64)


def _replacement(current: int, allowed_any: bool, alt: int) -> int:
    if not allowed_any:
        return 1 - current
    # the two values of {0, *, ?} other than current, in increasing order
    first = 1 if current == 0 else 0
    second = 1 if current == 2 else 2
    return first if alt == 0 else second


def propose(b: PatternMatrix, b_bar: PatternMatrix, rng: np.random.Generator):
    """Uniform draw from the distance-one feasible neighbors of ``b``.

    Picks cell (i, j) with weight 2 if b_bar has Any there and 1 otherwise,
    then a uniform replacement value. Returns ``(b_new, (i, j))``.
    """
    if not is_feasible_member(b, b_bar):
        raise StateError("current pattern writes Any where the reference pattern forbids it")
    slot_cell, slot_alt = _slots(b_bar)
    s = int(rng.integers(len(slot_cell)))
    k = int(slot_cell[s])
    i, j = divmod(k, b.cols)
    new = _replacement(int(b.cells[i, j]), b_bar.cells[i, j] == Entry.ANY, int(slot_alt[s]))
    return b.with_entry(i, j, Entry(new)), (i, j)


def acceptance_probability(c_old: float, c_new: float, t: float) -> float:
    if t <= 0:
        raise ParameterError(f"temperature must be positive, got {t}")
    if c_new <= c_old:
        return 1.0
    return math.exp((c_old - c_new) / t)


# the level kernel, shared by the compiled and the pure Python backend

def _popcount(x):
    c = 0
    while x:
        x &= x - 1
        c += 1
    return c


def _white(a_s, a_z, b_s, b_z, full):
    white = full
    while white:
        deleted = 0
        for k in range(len(a_s)):
            x = a_z[k] & white
            if x != 0 and (x & (x - 1)) == 0 and (x & a_s[k]) != 0:
                deleted |= x
        for k in range(len(b_s)):
            x = b_z[k] & white
            if x != 0 and (x & (x - 1)) == 0 and (x & b_s[k]) != 0:
                deleted |= x
        if deleted == 0:
            break
        white &= ~deleted
    return white


def _make_level_kernel(white, popcount):
    def level(a_s, a_z, q_s, q_z, b_cells, bbar, b_s, b_z, n, m, full,
              slot_cell, slot_alt, draws, uniforms, temperature, epsilon,
              state, best_cells, rec_cell, rec_acc, rec_prop, rec_cur, rec_best, offset, record):
        # state = [distance, white_total, cost, best_cost]
        cur_dist = state[0]
        cur_white = state[1]
        cur_cost = state[2]
        best_cost = state[3]
        for r in range(len(draws)):
            s = draws[r]
            k = slot_cell[s]
            j = k % m
            cur = b_cells[k]
            ref = bbar[k]
            if ref != 2:
                new = 1 - cur
            elif slot_alt[s] == 0:
                new = 1 if cur == 0 else 0
            else:
                new = 1 if cur == 2 else 2
            new_dist = cur_dist + (1 if new != ref else 0) - (1 if cur != ref else 0)
            old_s = b_s[j]
            old_z = b_z[j]
            b_cells[k] = new
            ns = 0
            nz = 0
            for i in range(n):
                v = b_cells[i * m + j]
                if v != 0:
                    nz |= 1 << i
                    if v == 1:
                        ns |= 1 << i
            b_s[j] = ns
            b_z[j] = nz
            new_white = popcount(white(a_s, a_z, b_s, b_z, full)) + popcount(
                white(q_s, q_z, b_s, b_z, full))
            new_cost = new_dist + epsilon * new_white
            accept = new_cost <= cur_cost
            if not accept:
                accept = uniforms[r] < math.exp((cur_cost - new_cost) / temperature)
            if accept:
                cur_dist = new_dist
                cur_white = new_white
                cur_cost = new_cost
                if new_cost < best_cost:
                    best_cost = new_cost
                    for t in range(n * m):
                        best_cells[t] = b_cells[t]
            else:
                b_cells[k] = cur
                b_s[j] = old_s
                b_z[j] = old_z
            if record:
                rec_cell[offset + r] = k
                rec_acc[offset + r] = accept
                rec_prop[offset + r] = new_cost
                rec_cur[offset + r] = cur_cost
                rec_best[offset + r] = best_cost
        state[0] = cur_dist
        state[1] = cur_white
        state[2] = cur_cost
        state[3] = best_cost
    return level


_level_python = _make_level_kernel(_white, _popcount)
_level_jit = None


def _get_jit_kernel():
    global _level_jit
    if _level_jit is None:
        import numba
        white = numba.njit(cache=True)(_white)
        popcount = numba.njit(cache=True)(_popcount)
        _level_jit = numba.njit(_make_level_kernel(white, popcount))
    return _level_jit


def _forcing_arrays(pattern: PatternMatrix, as_array: bool):
    pairs = [(s, z) for s, z in zip(pattern.star_masks, pattern.nonzero_masks) if s]
    s = [p[0] for p in pairs]
    z = [p[1] for p in pairs]
    if as_array:
        return np.array(s, dtype=np.int64), np.array(z, dtype=np.int64)
    return s, z


def mcmc_modify(sys: StructuredSystem, params: McmcParams = McmcParams(),
                record_trace: bool = False, backend: str = "auto",
                time_limit: Optional[float] = None) -> tuple[ModificationResult, McmcTrace]:
    """Run the annealed chain from ``B_bar``; report the best visited pattern.

    The trace also carries the final state of the chain. Fully determined by
    ``params.seed``; both backends consume the same random draws.
    """
    ev = SystemEvaluator(sys, params.epsilon)
    n, m = sys.n, sys.m
    if backend == "auto":
        backend = "jit" if n <= MAX_JIT_ROWS else "python"
    if backend == "jit" and n > MAX_JIT_ROWS:
        raise ParameterError(f"compiled backend handles at most {MAX_JIT_ROWS} rows")
    as_array = backend == "jit"
    kernel = _get_jit_kernel() if as_array else _level_python

    a_s, a_z = _forcing_arrays(sys.a_bar, as_array)
    q_s, q_z = _forcing_arrays(ev.qa, as_array)
    b0 = sys.b_bar
    b_s = list(b0.star_masks)
    b_z = list(b0.nonzero_masks)
    b_cells = b0.cells.ravel().tolist()
    bbar = list(b_cells)
    slot_cell, slot_alt = _slots(b0)
    if as_array:
        b_s = np.array(b_s, dtype=np.int64)
        b_z = np.array(b_z, dtype=np.int64)
        b_cells = np.array(b_cells, dtype=np.int64)
        bbar = np.array(bbar, dtype=np.int64)
    else:
        slot_cell, slot_alt = slot_cell.tolist(), slot_alt.tolist()
    full = (1 << n) - 1
    bd0 = ev.cost(b0)
    state = [bd0.distance, bd0.white_total, bd0.total, bd0.total]
    if as_array:
        state = np.array(state, dtype=np.int64)
    best_cells = b_cells.copy()

    temps = params.temperatures()
    total = len(temps) * params.r_max if record_trace else 0
    rec_cell = np.zeros(total, dtype=np.int64)
    rec_acc = np.zeros(total, dtype=np.bool_)
    rec_prop = np.zeros(total, dtype=np.int64)
    rec_cur = np.zeros(total, dtype=np.int64)
    rec_best = np.zeros(total, dtype=np.int64)
    rec_temp = np.zeros(total, dtype=float)

    rng = make_rng(params.seed, MCMC)
    n_slots = len(slot_cell)
    start = time.monotonic()
    levels = 0
    timed_out = False
    for level, t in enumerate(temps):
        if time_limit is not None and time.monotonic() - start > time_limit:
            timed_out = True
            break
        draws = rng.integers(0, n_slots, size=params.r_max)
        uniforms = rng.random(params.r_max)
        if not as_array:
            draws, uniforms = draws.tolist(), uniforms.tolist()
        offset = level * params.r_max
        kernel(a_s, a_z, q_s, q_z, b_cells, bbar, b_s, b_z, n, m, full,
               slot_cell, slot_alt, draws, uniforms, float(t), ev.epsilon,
               state, best_cells, rec_cell, rec_acc, rec_prop, rec_cur, rec_best,
               offset, record_trace)
        if record_trace:
            rec_temp[offset:offset + params.r_max] = t
        levels += 1

    used = levels * params.r_max if record_trace else 0
    final_b = PatternMatrix(np.asarray(b_cells, dtype=np.int8).reshape(n, m))
    best_b = PatternMatrix(np.asarray(best_cells, dtype=np.int8).reshape(n, m))
    best_bd = ev.cost(best_b)
    final_bd = ev.cost(final_b)
    assert best_bd.total == int(state[3]) and final_bd.total == int(state[2])
    cells = rec_cell[:used]
    trace = McmcTrace(temperature=rec_temp[:used], cell=np.stack(divmod(cells, m), axis=1),
                      accepted=rec_acc[:used], proposed_cost=rec_prop[:used],
                      current_cost=rec_cur[:used], best_cost_so_far=rec_best[:used],
                      best_b=best_b, best_cost=best_bd.total, final_b=final_b,
                      final_cost=final_bd.total, levels_run=levels, timed_out=timed_out)
    if timed_out:
        status = "timeout"
    else:
        status = "ok" if best_bd.controllable else "infeasible"
    return ModificationResult(algo="mcmc", b=best_b, breakdown=best_bd, status=status), trace


def write_trace_csv(trace: McmcTrace, path) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write("iter,T,i,j,proposed_cost,accepted,current_cost,best_cost\n")
        for k in range(len(trace)):
            fh.write(f"{k + 1},{float(trace.temperature[k])!r},{trace.cell[k, 0] + 1},"
                     f"{trace.cell[k, 1] + 1},{trace.proposed_cost[k]},{int(trace.accepted[k])},"
                     f"{trace.current_cost[k]},{trace.best_cost_so_far[k]}\n")


# exact chain on tiny instances

@dataclass
class ExactChain:
    states: list                 # feasible patterns, enumeration order
    costs: np.ndarray
    matrix: np.ndarray           # row-stochastic transition matrix
    temperature: float
    log_offdiag: np.ndarray = None  # log of off-diagonal entries, -inf off the neighborhood


def transition_matrix(sys: StructuredSystem, t: float, epsilon: Optional[int] = None,
                      cap: int = TRANSITION_CAP) -> ExactChain:
    """Explicit transition matrix of the chain at fixed temperature ``t``."""
    if t <= 0:
        raise ParameterError(f"temperature must be positive, got {t}")
    size = feasible_set_size(sys.b_bar)
    if size > cap:
        raise CapacityError(f"feasible set has {size} members, cap is {cap}")
    ev = SystemEvaluator(sys, epsilon)
    b_bar = sys.b_bar
    shape = b_bar.shape
    assignments = list(enumerate_assignments(b_bar))
    index = {v: k for k, v in enumerate(assignments)}
    states = [PatternMatrix(np.array(v, dtype=np.int8).reshape(shape)) for v in assignments]
    costs = np.array([ev.cost(b).total for b in states], dtype=float)
    log_s = math.log(neighborhood_size(b_bar))
    any_cell = (b_bar.cells.ravel() == Entry.ANY).tolist()

    P = np.zeros((size, size))
    L = np.full((size, size), -np.inf)
    for a, values in enumerate(assignments):
        for k, allowed_any in enumerate(any_cell):
            for alt in ((0, 1) if allowed_any else (0,)):
                nb = list(values)
                nb[k] = _replacement(values[k], allowed_any, alt)
                b = index[tuple(nb)]
                L[a, b] = min(0.0, (costs[a] - costs[b]) / t) - log_s
                P[a, b] = math.exp(L[a, b])
        P[a, a] = max(0.0, 1.0 - P[a].sum())
    return ExactChain(states=states, costs=costs, matrix=P, temperature=t, log_offdiag=L)


def softmax_distribution(costs: np.ndarray, t: float) -> np.ndarray:
    z = -(np.asarray(costs, dtype=float) - np.min(costs)) / t
    w = np.exp(z)
    return w / w.sum()


def stationary_distribution(chain) -> np.ndarray:
    """Stationary law of an irreducible chain by Grassmann-Taksar-Heyman elimination.

    The elimination never subtracts, so it stays accurate when the chain is
    nearly decomposable (low temperature). Accepts an ``ExactChain``, which is
    processed in the log domain so underflowed uphill moves still count, or a
    plain row-stochastic matrix.
    """
    if isinstance(chain, ExactChain):
        L = chain.log_offdiag.copy()
    else:
        with np.errstate(divide="ignore"):
            L = np.log(np.asarray(chain, dtype=float))
    k = L.shape[0]
    np.fill_diagonal(L, -np.inf)
    for j in range(k - 1, 0, -1):
        log_out = np.logaddexp.reduce(L[j, :j])
        if log_out == -np.inf:
            raise StateError("chain is reducible")
        L[:j, j] -= log_out
        L[:j, :j] = np.logaddexp(L[:j, :j], L[:j, j, None] + L[None, j, :j])
    log_pi = np.zeros(k)
    for j in range(1, k):
        log_pi[j] = np.logaddexp.reduce(log_pi[:j] + L[:j, j])
    log_pi -= log_pi.max()
    pi = np.exp(log_pi)
    return pi / pi.sum()


def t_stop_bound(delta: float, feasible_count: int, optimal_count_lower: int = 1) -> float:
    """Largest temperature for which the stationary law puts mass 1 - delta on optima."""
    if optimal_count_lower < 1 or feasible_count <= optimal_count_lower:
        raise ParameterError("need 1 <= optimal count < feasible count")
    if not 0 < delta < 1 - optimal_count_lower / feasible_count:
        raise ParameterError(
            f"delta must lie in (0, {1 - optimal_count_lower / feasible_count}), got {delta}")
    return 1.0 / (math.log(1.0 / delta - 1.0) + math.log(feasible_count / optimal_count_lower - 1.0))
