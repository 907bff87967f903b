import itertools
import os

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from sscmod.pattern import PatternMatrix, StructuredSystem

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", max_examples=300, deadline=None)
settings.load_profile(os.environ.get("SSCMOD_HYPOTHESIS_PROFILE", "default"))


# independent oracles, written straight from the set formulation

def naive_white(m: PatternMatrix, black=()):
    """Color change rule over explicit edge sets, no bitmasks."""
    cells = m.cells.tolist()
    p, q = len(cells), len(cells[0])
    e_star = {(j, i) for i in range(p) for j in range(q) if cells[i][j] == 1}
    e_any = {(j, i) for i in range(p) for j in range(q) if cells[i][j] == 2}
    white = set(range(p)) - set(black)
    while True:
        w_del = {i for i in white
                 if any((j, i) in e_star
                        and all((j, k) not in e_star | e_any for k in white - {i})
                        for j in range(q))}
        if not w_del:
            return white
        white -= w_del


def naive_zero_forcing_number(*matrices):
    p = matrices[0].rows
    for k in range(p + 1):
        for combo in itertools.combinations(range(p), k):
            if all(not naive_white(m, combo) for m in matrices):
                return k
    raise AssertionError


def naive_q(a: PatternMatrix) -> PatternMatrix:
    rows = a.cells.tolist()
    out = [list(r) for r in rows]
    for i in range(len(rows)):
        out[i][i] = 1 if rows[i][i] == 0 else 2
    return PatternMatrix(out)


# hypothesis strategies

def pattern_matrices(min_rows=1, max_rows=5, min_cols=1, max_cols=5, rows=None, cols=None,
                     alphabet=(0, 1, 2)):
    @st.composite
    def build(draw):
        p = rows if rows is not None else draw(st.integers(min_rows, max_rows))
        q = cols if cols is not None else draw(st.integers(min_cols, max_cols))
        flat = draw(st.lists(st.sampled_from(alphabet), min_size=p * q, max_size=p * q))
        return PatternMatrix(np.array(flat, dtype=np.int8).reshape(p, q))
    return build()


@st.composite
def systems(draw, max_n=4, max_m=3, max_cells=None):
    n = draw(st.integers(1, max_n))
    hi = max_m if max_cells is None else max(1, min(max_m, max_cells // n))
    m = draw(st.integers(1, hi))
    a = draw(pattern_matrices(rows=n, cols=n))
    b = draw(pattern_matrices(rows=n, cols=m))
    return StructuredSystem(a, b)


# worked-example matrices

@pytest.fixture
def a1():
    return PatternMatrix(["0 ? ?", "0 * ?", "0 ? ?"])


@pytest.fixture
def a2():
    return PatternMatrix(["0 0 0", "0 * 0", "0 0 *"])


@pytest.fixture
def b_star():
    return PatternMatrix(["* 0", "* 0", "0 *"])
