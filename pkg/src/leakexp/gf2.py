"""GF(2) matrices with packed-bit rows.

Rows are Python ints; bit j of a row int is the entry in column j+1.
External column indices are 1-based, the packed representation is private.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import InputParseError, SizeLimitError

__all__ = [
    "BinMatrix",
    "IndexSet",
    "rank",
    "submatrix_cols",
    "random_matrix",
    "min_distance",
    "parse_matrix",
    "format_matrix",
]

_MIN_DISTANCE_MAX_ROWS = 24


@dataclass(frozen=True)
class BinMatrix:
    """Immutable k x n matrix over GF(2). `rows`/`cols` are counts."""

    rows: int
    cols: int
    bits: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.rows < 0 or self.cols < 0:
            raise ValueError("negative dimension")
        if len(self.bits) != self.rows:
            raise ValueError(f"expected {self.rows} packed rows, got {len(self.bits)}")
        limit = 1 << self.cols
        for i, b in enumerate(self.bits):
            if not 0 <= b < limit:
                raise ValueError(f"row {i + 1} does not fit in {self.cols} columns")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "BinMatrix":
        """Build from nested 0/1 sequences (row-major)."""
        k = len(rows)
        n = len(rows[0]) if k else 0
        packed = []
        for r in rows:
            if len(r) != n:
                raise ValueError("ragged rows")
            v = 0
            for j, b in enumerate(r):
                if b not in (0, 1):
                    raise ValueError("entries must be 0 or 1")
                v |= b << j
            packed.append(v)
        return cls(k, n, tuple(packed))

    @classmethod
    def identity(cls, n: int) -> "BinMatrix":
        return cls(n, n, tuple(1 << i for i in range(n)))

    def to_rows(self) -> tuple[tuple[int, ...], ...]:
        return tuple(
            tuple((b >> j) & 1 for j in range(self.cols)) for b in self.bits
        )

    def to_bit_strings(self) -> tuple[str, ...]:
        return tuple(
            "".join("1" if (b >> j) & 1 else "0" for j in range(self.cols))
            for b in self.bits
        )

    def column_ints(self) -> tuple[int, ...]:
        """Columns packed the other way: bit i of column j is entry (i+1, j+1)."""
        cols = [0] * self.cols
        for i, b in enumerate(self.bits):
            while b:
                low = b & -b
                cols[low.bit_length() - 1] |= 1 << i
                b ^= low
        return tuple(cols)


@dataclass(frozen=True)
class IndexSet:
    """Subset of column positions {1, ..., n} with its ambient length n."""

    n: int
    members: frozenset[int]

    def __init__(self, n: int, members: Iterable[int] = ()) -> None:
        ms = frozenset(members)
        if n < 0:
            raise ValueError("ambient length must be >= 0")
        for i in ms:
            if not 1 <= i <= n:
                raise ValueError(f"index {i} outside 1..{n}")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "members", ms)

    def complement(self) -> "IndexSet":
        return IndexSet(self.n, frozenset(range(1, self.n + 1)) - self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, i: int) -> bool:
        return i in self.members


def rank(m: BinMatrix) -> int:
    """Rank over GF(2) via row elimination; the empty matrix has rank 0."""
    pivots: dict[int, int] = {}
    r = 0
    for v in m.bits:
        while v:
            p = v.bit_length() - 1
            b = pivots.get(p)
            if b is None:
                pivots[p] = v
                r += 1
                break
            v ^= b
    return r


def submatrix_cols(m: BinMatrix, j: IndexSet) -> BinMatrix:
    """Columns of `m` selected by `j` in ascending original order."""
    if j.n != m.cols:
        raise ValueError(f"index set over 1..{j.n} does not match {m.cols} columns")
    sel = sorted(j.members)
    packed = []
    for b in m.bits:
        v = 0
        for t, col in enumerate(sel):
            v |= ((b >> (col - 1)) & 1) << t
        packed.append(v)
    return BinMatrix(m.rows, len(sel), tuple(packed))


def random_matrix(k: int, n: int, seed: int) -> BinMatrix:
    """I.i.d. uniform k x n matrix; identical (k, n, seed) is bit-identical everywhere."""
    if k > n:
        raise ValueError(f"need k <= n, got k={k} n={n}")
    if k < 0:
        raise ValueError("k must be >= 0")
    rng = np.random.default_rng(seed)
    ent = rng.integers(0, 2, size=(k, n), dtype=np.uint8)
    packed = tuple(
        sum(int(ent[i, j]) << j for j in range(n)) for i in range(k)
    )
    return BinMatrix(k, n, packed)


def min_distance(m: BinMatrix) -> int:
    """Minimum weight of u @ m over nonzero messages u; 0 when rank-deficient."""
    k = m.rows
    if k == 0:
        raise ValueError("no nonzero messages for an empty message space")
    if k > _MIN_DISTANCE_MAX_ROWS:
        raise SizeLimitError(
            f"min_distance enumerates 2^k codewords; k={k} exceeds {_MIN_DISTANCE_MAX_ROWS}"
        )
    if m.cols <= 64:
        # Doubling build: entry u of `cw` is the codeword for message bitmask u.
        cw = np.zeros(1, dtype=np.uint64)
        for b in m.bits:
            cw = np.concatenate([cw, cw ^ np.uint64(b)])
        weights = np.bitwise_count(cw[1:])
        return int(weights.min())
    # Wide rows exceed uint64; walk messages in Gray-code order instead.
    word = 0
    best = m.cols + 1
    for u in range(1, 1 << k):
        word ^= m.bits[(u & -u).bit_length() - 1]
        best = min(best, word.bit_count())
    return best


def parse_matrix(text: str) -> BinMatrix:
    """Parse the on-disk format: a 'k n' header line, then k rows of n chars in {0,1}.

    Raises InputParseError naming the offending line (and column where it
    applies); any shape other than exactly k+1 lines is rejected.
    """
    lines = text.splitlines()
    if not lines:
        raise InputParseError("line 1: missing 'k n' header")
    head = lines[0].split()
    if len(head) != 2:
        raise InputParseError("line 1: header must be two integers 'k n'")
    try:
        k, n = int(head[0]), int(head[1])
    except ValueError:
        raise InputParseError("line 1: header must be two integers 'k n'") from None
    if k < 0 or n < 0:
        raise InputParseError("line 1: dimensions must be >= 0")
    if len(lines) < k + 1:
        raise InputParseError(
            f"line {len(lines) + 1}: expected {k} row lines, file ends after {len(lines) - 1}"
        )
    if len(lines) > k + 1:
        raise InputParseError(f"line {k + 2}: unexpected content after {k} rows")
    packed = []
    for i in range(k):
        row = lines[i + 1]
        if len(row) != n:
            raise InputParseError(
                f"line {i + 2}: expected {n} characters, got {len(row)}"
            )
        v = 0
        for j, ch in enumerate(row):
            if ch == "1":
                v |= 1 << j
            elif ch != "0":
                raise InputParseError(
                    f"line {i + 2}, column {j + 1}: invalid character {ch!r}"
                )
        packed.append(v)
    return BinMatrix(k, n, tuple(packed))


def format_matrix(m: BinMatrix) -> str:
    """Inverse of parse_matrix; ends with a newline."""
    body = "".join(s + "\n" for s in m.to_bit_strings())
    return f"{m.rows} {m.cols}\n" + body
