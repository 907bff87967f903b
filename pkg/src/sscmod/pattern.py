"""Pattern matrices over the alphabet {0, *, ?} and structured systems.

A pattern matrix stores a dense ``int8`` grid (0 = Zero, 1 = Star, 2 = Any)
together with per-column row bitmasks, which is what the forcing routines
actually consume. Row ``i`` (0-based) is bit ``1 << i``.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionError, ParameterError, PatternParseError


class Entry(IntEnum):
    ZERO = 0
    STAR = 1
    ANY = 2

    @property
    def char(self) -> str:
        return _CHARS[self]

    @classmethod
    def from_char(cls, ch: str) -> "Entry":
        try:
            return cls(_CHARS.index(ch))
        except ValueError:
            raise PatternParseError(f"invalid pattern character {ch!r}") from None


_CHARS = "0*?"


class PatternMatrix:
    """Immutable p x q pattern matrix."""

    __slots__ = ("_cells", "_star_masks", "_nonzero_masks", "_hash")

    def __init__(self, cells):
        if isinstance(cells, PatternMatrix):
            arr = cells._cells
        elif isinstance(cells, (list, tuple)) and cells and isinstance(cells[0], str):
            arr = np.array([[Entry.from_char(ch) for ch in row.split()] for row in cells],
                           dtype=np.int8)
        else:
            arr = np.array(cells, dtype=np.int8)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise DimensionError(f"pattern matrix must be a non-empty 2-D grid, got shape {arr.shape}")
        if arr.size and (arr.min() < 0 or arr.max() > 2):
            raise ParameterError("pattern entries must be 0 (Zero), 1 (Star) or 2 (Any)")
        arr = np.array(arr, dtype=np.int8, copy=True)
        arr.setflags(write=False)
        self._cells = arr
        self._star_masks = None
        self._nonzero_masks = None
        self._hash = None

    # construction helpers

    @classmethod
    def zeros(cls, p: int, q: int) -> "PatternMatrix":
        return cls(np.zeros((p, q), dtype=np.int8))

    @classmethod
    def filled(cls, p: int, q: int, entry: Entry) -> "PatternMatrix":
        return cls(np.full((p, q), int(entry), dtype=np.int8))

    @classmethod
    def diagonal(cls, n: int, entry: Entry = Entry.STAR) -> "PatternMatrix":
        arr = np.zeros((n, n), dtype=np.int8)
        np.fill_diagonal(arr, int(entry))
        return cls(arr)

    # accessors

    @property
    def cells(self) -> np.ndarray:
        """Read-only ``int8`` view of the grid."""
        return self._cells

    @property
    def shape(self) -> tuple[int, int]:
        return self._cells.shape

    @property
    def rows(self) -> int:
        return self._cells.shape[0]

    @property
    def cols(self) -> int:
        return self._cells.shape[1]

    def __getitem__(self, idx) -> Entry:
        return Entry(int(self._cells[idx]))

    @property
    def star_masks(self) -> tuple[int, ...]:
        """Per column, the bitmask of rows holding Star."""
        if self._star_masks is None:
            self._build_masks()
        return self._star_masks

    @property
    def nonzero_masks(self) -> tuple[int, ...]:
        """Per column, the bitmask of rows holding Star or Any."""
        if self._nonzero_masks is None:
            self._build_masks()
        return self._nonzero_masks

    def _build_masks(self):
        weights = [1 << i for i in range(self.rows)]
        star, nz = [], []
        for col in self._cells.T:
            s = z = 0
            for w, v in zip(weights, col.tolist()):
                if v:
                    z |= w
                    if v == 1:
                        s |= w
            star.append(s)
            nz.append(z)
        self._star_masks = tuple(star)
        self._nonzero_masks = tuple(nz)

    def count(self, entry: Entry) -> int:
        return int(np.count_nonzero(self._cells == int(entry)))

    def with_entry(self, i: int, j: int, entry: Entry) -> "PatternMatrix":
        arr = self._cells.copy()
        arr[i, j] = int(entry)
        return PatternMatrix(arr)

    def to_text(self) -> str:
        return format_pattern(self)

    def __eq__(self, other):
        if not isinstance(other, PatternMatrix):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self._cells, other._cells))

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.shape, self._cells.tobytes()))
        return self._hash

    def __repr__(self):
        rows = "; ".join(" ".join(_CHARS[v] for v in row) for row in self._cells.tolist())
        return f"PatternMatrix([{rows}])"


@dataclass(frozen=True)
class StructuredSystem:
    """The pair (A_bar, B_bar): an n x n state pattern and an n x m input pattern."""

    a_bar: PatternMatrix
    b_bar: PatternMatrix

    def __post_init__(self):
        if self.a_bar.rows != self.a_bar.cols:
            raise DimensionError(f"state pattern must be square, got {self.a_bar.shape}")
        if self.b_bar.rows != self.a_bar.rows:
            raise DimensionError(
                f"input pattern has {self.b_bar.rows} rows, state pattern has {self.a_bar.rows}")

    @property
    def n(self) -> int:
        return self.a_bar.rows

    @property
    def m(self) -> int:
        return self.b_bar.cols


def hstack(left: PatternMatrix, right: PatternMatrix) -> PatternMatrix:
    if left.rows != right.rows:
        raise DimensionError(f"cannot stack {left.shape} with {right.shape}: row counts differ")
    return PatternMatrix(np.hstack([left.cells, right.cells]))


def q_transform(a: PatternMatrix) -> PatternMatrix:
    """Diagonal rewrite Zero -> Star, Star -> Any, Any -> Any; off-diagonal copied."""
    if a.rows != a.cols:
        raise DimensionError(f"q_transform needs a square matrix, got {a.shape}")
    arr = a.cells.copy()
    diag = np.diagonal(arr).copy()
    np.fill_diagonal(arr, np.where(diag == Entry.ZERO, Entry.STAR, Entry.ANY))
    return PatternMatrix(arr)


def _check_same_shape(x, y, what):
    if x.shape != y.shape:
        raise DimensionError(f"{what}: shapes {x.shape} and {y.shape} differ")


def hamming_dist(b1: PatternMatrix, b2: PatternMatrix) -> int:
    _check_same_shape(b1, b2, "hamming_dist")
    return int(np.count_nonzero(b1.cells != b2.cells))


def sample_realization(m: PatternMatrix, rng: np.random.Generator,
                       magnitude_range: tuple[float, float] = (0.5, 2.0)) -> np.ndarray:
    """Draw a real matrix from the pattern class of ``m``.

    Star cells get a random sign times a magnitude uniform in ``magnitude_range``;
    Any cells are exactly zero with probability 1/2 and otherwise drawn like Star.
    """
    lo, hi = magnitude_range
    if not (0 < lo < hi) or not np.isfinite(hi):
        raise ParameterError(f"magnitude range must satisfy 0 < lo < hi, got {magnitude_range}")
    cells = m.cells
    shape = cells.shape
    values = rng.uniform(lo, hi, size=shape) * rng.choice([-1.0, 1.0], size=shape)
    keep_any = rng.random(size=shape) >= 0.5
    nonzero = (cells == Entry.STAR) | ((cells == Entry.ANY) & keep_any)
    return np.where(nonzero, values, 0.0)


def member_check(real: np.ndarray, pattern: PatternMatrix) -> bool:
    real = np.asarray(real, dtype=float)
    _check_same_shape(real, pattern, "member_check")
    cells = pattern.cells
    if np.any(real[cells == Entry.ZERO] != 0.0):
        return False
    return not np.any(real[cells == Entry.STAR] == 0.0)


# text format

def format_pattern(m: PatternMatrix) -> str:
    lines = [f"{m.rows} {m.cols}"]
    lines += [" ".join(_CHARS[v] for v in row) for row in m.cells.tolist()]
    return "\n".join(lines) + "\n"


def format_system(sys: StructuredSystem) -> str:
    return format_pattern(sys.a_bar) + format_pattern(sys.b_bar)


def _parse_block(lines: Sequence[str], start: int) -> tuple[PatternMatrix, int]:
    """Parse one matrix whose header is ``lines[start]``; returns the matrix and next index."""
    lineno = start + 1
    if start >= len(lines):
        raise PatternParseError("missing matrix header", line=lineno)
    header = lines[start].split(" ")
    if len(header) != 2 or not all(tok.isdigit() for tok in header):
        raise PatternParseError(f"header must be 'p q', got {lines[start]!r}", line=lineno)
    p, q = int(header[0]), int(header[1])
    if p < 1 or q < 1:
        raise PatternParseError(f"dimensions must be positive, got {p}x{q}", line=lineno)
    grid = np.zeros((p, q), dtype=np.int8)
    for r in range(p):
        idx = start + 1 + r
        lineno = idx + 1
        if idx >= len(lines):
            raise PatternParseError(f"expected {p} rows, found {r}", line=lineno)
        line = lines[idx]
        if len(line) != 2 * q - 1:
            raise PatternParseError(
                f"row must have {q} entries separated by single spaces", line=lineno,
                column=min(len(line), 2 * q - 1) + 1)
        for c in range(q):
            ch = line[2 * c]
            if ch not in _CHARS:
                raise PatternParseError(f"invalid pattern character {ch!r}", line=lineno,
                                        column=2 * c + 1)
            grid[r, c] = _CHARS.index(ch)
            if c < q - 1 and line[2 * c + 1] != " ":
                raise PatternParseError("entries must be separated by a single space",
                                        line=lineno, column=2 * c + 2)
    return PatternMatrix(grid), start + 1 + p


def _split_lines(text: str) -> list[str]:
    if not text.endswith("\n"):
        raise PatternParseError("input must be newline-terminated",
                                line=text.count("\n") + 1)
    return text[:-1].split("\n")


def parse_pattern(text: str) -> PatternMatrix:
    lines = _split_lines(text)
    m, nxt = _parse_block(lines, 0)
    if nxt != len(lines):
        raise PatternParseError("unexpected trailing content", line=nxt + 1)
    return m


def parse_system(text: str) -> StructuredSystem:
    lines = _split_lines(text)
    a, nxt = _parse_block(lines, 0)
    b, end = _parse_block(lines, nxt)
    if end != len(lines):
        raise PatternParseError("unexpected trailing content", line=end + 1)
    if a.rows != a.cols:
        raise PatternParseError(f"state pattern must be square, got {a.rows}x{a.cols}", line=1)
    if b.rows != a.rows:
        raise PatternParseError(
            f"input pattern must have {a.rows} rows, got {b.rows}", line=nxt + 1)
    return StructuredSystem(a, b)


def one_based(indices: Iterable[int]) -> list[int]:
    """Sorted 1-based list for user-facing output."""
    return sorted(i + 1 for i in indices)
