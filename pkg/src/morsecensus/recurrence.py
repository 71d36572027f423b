"""Two-parameter recurrence table behind the census of Morse classes.

The table stores exact rationals T(x, y) for x + 2y <= W, filled in
increasing weight w = x + 2y:

    y = 0:           T(x, 0) = 2^-x
    x = 0, y > 0:    (2y+1) T(0,y) = T(1,y-1)
                         + (1/2) sum_{y1=0}^{y-1} T(0,y1) T(0,y-1-y1)
    x > 0, y > 0:    (x+2y+1) T(x,y) = (x+1) T(x+1,y-1) + ((x+1)/2) T(x-1,y)
                         + ((x+1)/2) sum_{0<=a<=x, 0<=b<=y-1} T(a,b) T(x-a,y-1-b)

with T(.,.) = 0 at any negative index.  Every right-hand entry has weight
< w, so the fill is well founded.  The number of Morse classes with 2n+2
critical points is (2n+1)! * T(0,n), always an integer in practice (the
accessor asserts it).

Fast fill: internally the builder stores the scaled integers
S(x,y) = T(x,y) * 2^x * (x+2y+1)!, turning the recurrences into pure
big-integer convolutions

    S(x,0) = (x+1)!
    2 S(0,y) = S(1,y-1) + sum_{y1} binom(2y, 2y1+1) S(0,y1) S(0,y-1-y1)
    2 S(x,y) = (x+1) [ S(x+1,y-1) + 2 S(x-1,y)
                  + sum_{a,b} binom(x+2y, a+2b+1) S(a,b) S(x-a,y-1-b) ]

Integrality of S is observed on everything computed so far but unproven,
so every division is checked and the builder silently falls back to plain
Fraction arithmetic on failure.  Both modes produce bit-identical
canonical rationals.
"""
from __future__ import annotations

import os
import re
from fractions import Fraction
from math import comb

from .exactmath import factorial, format_rational, parse_rational

__all__ = [
    "CensusTable",
    "build_table",
    "extend_table",
    "save_table",
    "load_table",
    "CacheFormatError",
    "CacheLockError",
    "TableRangeError",
    "ConsistencyError",
]

CACHE_MAGIC = "morse-htable v1"


class TableRangeError(ValueError):
    """Requested index lies outside the table's weight bound."""


class ConsistencyError(RuntimeError):
    """(2n+1)! * T(0,n) failed to be an integer: a recurrence bug."""


class CacheFormatError(ValueError):
    """Cache file malformed; `line_no` names the offending line."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"cache line {line_no}: {message}")
        self.line_no = line_no


class CacheLockError(OSError):
    """Another writer holds the cache lock."""


class _IntegralityError(Exception):
    # internal: scaled-integer mode hit a non-exact division
    pass


class CensusTable:
    """Completed triangular table; immutable and safe to share."""

    __slots__ = ("_weight_bound", "_entries")

    def __init__(self, weight_bound: int, entries: dict[tuple[int, int], Fraction]):
        self._weight_bound = weight_bound
        self._entries = entries

    @property
    def weight_bound(self) -> int:
        return self._weight_bound

    @property
    def max_index(self) -> int:
        """Largest n with 2n <= weight bound."""
        return self._weight_bound // 2

    def entry(self, x: int, y: int) -> Fraction:
        if x < 0 or y < 0 or x + 2 * y > self._weight_bound:
            raise TableRangeError(
                f"entry ({x},{y}) outside table with weight bound {self._weight_bound}"
            )
        return self._entries[(x, y)]

    def normalized_count(self, n: int) -> Fraction:
        """T(0, n): the class count divided by (2n+1)!."""
        if n < 0 or 2 * n > self._weight_bound:
            raise TableRangeError(
                f"n={n} needs weight bound >= {2 * n}, table has {self._weight_bound}"
            )
        return self._entries[(0, n)]

    def morse_count(self, n: int) -> int:
        """Number of equivalence classes with 2n+2 critical points."""
        value = self.normalized_count(n) * factorial(2 * n + 1)
        if value.denominator != 1:
            raise ConsistencyError(
                f"(2n+1)! * T(0,{n}) is not an integer: recurrence implementation bug"
            )
        return value.numerator

    def items(self):
        """Entries sorted by (weight, x)."""
        return sorted(self._entries.items(), key=lambda kv: (kv[0][0] + 2 * kv[0][1], kv[0][0]))

    def __len__(self) -> int:
        return len(self._entries)

    def __eq__(self, other) -> bool:
        if not isinstance(other, CensusTable):
            return NotImplemented
        return self._weight_bound == other._weight_bound and self._entries == other._entries


# ---------------------------------------------------------------------------
# fill routines


def _fill_scaled(scaled: dict[tuple[int, int], int], w_start: int, w_stop: int) -> None:
    """Fill scaled-integer entries for weights in (w_start, w_stop]."""
    fact = [1]
    for i in range(1, w_stop + 2):
        fact.append(fact[-1] * i)
    for w in range(w_start + 1, w_stop + 1):
        row = [comb(w, k) for k in range(w + 1)]
        for y in range(w // 2 + 1):
            x = w - 2 * y
            if y == 0:
                scaled[(x, 0)] = fact[x + 1]
                continue
            if x == 0:
                acc = scaled[(1, y - 1)]
                col = 0
                for y1 in range(y // 2):
                    col += row[2 * y1 + 1] * scaled[(0, y1)] * scaled[(0, y - 1 - y1)]
                col += col
                if y % 2 == 1:
                    c = y // 2
                    col += row[2 * c + 1] * scaled[(0, c)] ** 2
                acc += col
            else:
                # convolution over the rectangle, halved by the central symmetry
                # (a,b) <-> (x-a, y-1-b), under which the binomial factor is invariant
                conv = 0
                for a in range((x + 1) // 2):
                    ra = x - a
                    part = 0
                    for b in range(y):
                        part += row[a + 2 * b + 1] * scaled[(a, b)] * scaled[(ra, y - 1 - b)]
                    conv += part
                conv += conv
                if x % 2 == 0:
                    a = x // 2
                    part = 0
                    for b in range(y // 2):
                        part += row[a + 2 * b + 1] * scaled[(a, b)] * scaled[(a, y - 1 - b)]
                    part += part
                    if y % 2 == 1:
                        b = y // 2
                        part += row[a + 2 * b + 1] * scaled[(a, b)] ** 2
                    conv += part
                acc = (x + 1) * (scaled[(x + 1, y - 1)] + 2 * scaled[(x - 1, y)] + conv)
            q, r = divmod(acc, 2)
            if r:
                raise _IntegralityError(f"scaled entry ({x},{y}) not an even integer")
            scaled[(x, y)] = q


def _fill_fractions(entries: dict[tuple[int, int], Fraction], w_start: int, w_stop: int) -> None:
    """Reference fill in plain Fractions for weights in (w_start, w_stop]."""
    for w in range(w_start + 1, w_stop + 1):
        for y in range(w // 2 + 1):
            x = w - 2 * y
            if y == 0:
                entries[(x, 0)] = Fraction(1, 1 << x)
            elif x == 0:
                s = sum(entries[(0, y1)] * entries[(0, y - 1 - y1)] for y1 in range(y))
                entries[(0, y)] = (entries[(1, y - 1)] + s / 2) / (2 * y + 1)
            else:
                conv = sum(
                    entries[(a, b)] * entries[(x - a, y - 1 - b)]
                    for a in range(x + 1)
                    for b in range(y)
                )
                entries[(x, y)] = (
                    (x + 1) * entries[(x + 1, y - 1)]
                    + Fraction(x + 1, 2) * (entries[(x - 1, y)] + conv)
                ) / (x + 2 * y + 1)


def _scale_factor(x: int, y: int) -> int:
    return (1 << x) * factorial(x + 2 * y + 1)


def _to_fractions(scaled: dict[tuple[int, int], int]) -> dict[tuple[int, int], Fraction]:
    return {(x, y): Fraction(s, _scale_factor(x, y)) for (x, y), s in scaled.items()}


def _to_scaled(entries: dict[tuple[int, int], Fraction]) -> dict[tuple[int, int], int]:
    scaled = {}
    for (x, y), q in entries.items():
        s = q * _scale_factor(x, y)
        if s.denominator != 1:
            raise _IntegralityError(f"entry ({x},{y}) does not scale to an integer")
        scaled[(x, y)] = s.numerator
    return scaled


def extend_table(table: CensusTable | None, weight_bound: int,
                 use_fractions: bool = False) -> CensusTable:
    """Pure extension of `table` (or a fresh build from None) to `weight_bound`.

    Returns the input unchanged when it already covers the bound.
    `use_fractions` forces the reference fill instead of the fast one.
    """
    if weight_bound < 0:
        raise ValueError("weight_bound must be >= 0")
    if table is not None and table.weight_bound >= weight_bound:
        return table
    if table is None:
        entries, w_start = {(0, 0): Fraction(1)}, 0
    else:
        entries, w_start = dict(table._entries), table.weight_bound
    if not use_fractions:
        try:
            scaled = _to_scaled(entries)
            _fill_scaled(scaled, w_start, weight_bound)
            return CensusTable(weight_bound, _to_fractions(scaled))
        except _IntegralityError:
            pass
    _fill_fractions(entries, w_start, weight_bound)
    return CensusTable(weight_bound, entries)


def build_table(weight_bound: int, cache_path: str | os.PathLike | None = None,
                use_fractions: bool = False) -> CensusTable:
    """Build the table for all x + 2y <= weight_bound.

    With `cache_path`, a valid cache file is loaded and extended instead of
    recomputed, and the extension is written back (atomic rename).  The
    returned table covers at least the requested bound; it is larger when
    the cache already was.
    """
    cached = None
    if cache_path is not None and os.path.exists(cache_path):
        cached = load_table(cache_path)
        if cached.weight_bound >= weight_bound:
            return cached
    table = extend_table(cached, weight_bound, use_fractions)
    if cache_path is not None:
        save_table(table, cache_path)
    return table


# ---------------------------------------------------------------------------
# cache persistence

_HEADER_RE = re.compile(r"^morse-htable v1 W=(\d+)$")
_ENTRY_RE = re.compile(r"^(\d+) (\d+) (-?\d+(?:/\d+)?)$")


def save_table(table: CensusTable, path: str | os.PathLike) -> None:
    """Write the cache file: header, then "x y p/q" sorted by (x+2y, x).

    Takes an exclusive advisory lock (fail-fast) and replaces the file
    atomically, so an interrupted write never corrupts an existing cache.
    """
    path = os.fspath(path)
    parent = os.path.dirname(path) or "."
    os.makedirs(parent, exist_ok=True)
    lock_path = path + ".lock"
    try:
        lock_fd = os.open(lock_path, os.O_CREAT | os.O_EXCL | os.O_WRONLY)
    except FileExistsError:
        raise CacheLockError(f"cache {path} is locked by another writer ({lock_path})")
    try:
        os.write(lock_fd, str(os.getpid()).encode())
        tmp_path = f"{path}.tmp.{os.getpid()}"
        with open(tmp_path, "w") as fh:
            fh.write(f"{CACHE_MAGIC} W={table.weight_bound}\n")
            for (x, y), q in table.items():
                fh.write(f"{x} {y} {format_rational(q)}\n")
        os.replace(tmp_path, path)
    finally:
        os.close(lock_fd)
        os.unlink(lock_path)


def load_table(path: str | os.PathLike) -> CensusTable:
    """Read a cache file back; bit-exact inverse of :func:`save_table`."""
    entries: dict[tuple[int, int], Fraction] = {}
    with open(path) as fh:
        header = fh.readline().rstrip("\n")
        m = _HEADER_RE.match(header)
        if not m:
            raise CacheFormatError(1, f"bad header {header!r}")
        weight_bound = int(m.group(1))
        last_key = (-1, -1)
        for line_no, line in enumerate(fh, start=2):
            m = _ENTRY_RE.match(line.rstrip("\n"))
            if not m:
                raise CacheFormatError(line_no, f"bad entry {line.rstrip()!r}")
            x, y = int(m.group(1)), int(m.group(2))
            if x + 2 * y > weight_bound:
                raise CacheFormatError(line_no, f"entry ({x},{y}) exceeds W={weight_bound}")
            key = (x + 2 * y, x)
            if key <= last_key:
                raise CacheFormatError(line_no, f"entry ({x},{y}) out of order or duplicated")
            last_key = key
            entries[(x, y)] = parse_rational(m.group(3))
    expected = sum(w // 2 + 1 for w in range(weight_bound + 1))
    if len(entries) != expected:
        raise CacheFormatError(
            1, f"W={weight_bound} needs {expected} entries, file has {len(entries)}"
        )
    return CensusTable(weight_bound, entries)
