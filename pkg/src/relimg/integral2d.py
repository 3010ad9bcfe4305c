"""Summed-area tables, eager and lazily memoized, with box sums and Haar features.

Coordinates follow image convention: ``x`` is the column, ``y`` the row, and
``S[x][y]`` is the sum of all pixels with column < x and row < y. Tables are
stored row-major as ``rows[y][x]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from ._validation import check_rect

__all__ = [
    "Image", "SummedAreaTable", "LazySAT", "HaarFeature", "HAAR_KINDS",
    "build_sat", "box_sum", "lazy_entry", "box_sum_lazy", "haar_value",
    "haar_regions", "brute_box_sum",
]


@dataclass(frozen=True)
class Image:
    width: int
    height: int
    pixels: tuple

    def __post_init__(self):
        if self.width < 0 or self.height < 0:
            raise ValueError("image dimensions must be non-negative")
        if len(self.pixels) != self.width * self.height:
            raise ValueError(
                f"expected {self.width * self.height} pixels, got {len(self.pixels)}"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "Image":
        rows = [list(r) for r in rows]
        width = len(rows[0]) if rows else 0
        if any(len(r) != width for r in rows):
            raise ValueError("ragged rows")
        return cls(width, len(rows), tuple(int(p) for r in rows for p in r))

    def pixel(self, x: int, y: int) -> int:
        return self.pixels[y * self.width + x]

    def rows(self) -> list[list[int]]:
        w = self.width
        return [list(self.pixels[y * w:(y + 1) * w]) for y in range(self.height)]


class SummedAreaTable:
    """Immutable ``(width+1) x (height+1)`` table with a zero border."""

    __slots__ = ("width", "height", "rows")

    def __init__(self, width: int, height: int, rows: tuple):
        self.width = width
        self.height = height
        self.rows = rows

    def entry(self, x: int, y: int) -> int:
        if not (0 <= x <= self.width and 0 <= y <= self.height):
            raise IndexError(f"SAT index ({x}, {y}) out of range")
        return self.rows[y][x]

    @property
    def entry_count(self) -> int:
        """Number of entries the recurrence computes (the border is free)."""
        return self.width * self.height


def build_sat(img: Image) -> SummedAreaTable:
    w = img.width
    prev = [0] * (w + 1)
    rows = [tuple(prev)]
    for y in range(img.height):
        row = [0] * (w + 1)
        base = y * w
        for x in range(1, w + 1):
            row[x] = img.pixels[base + x - 1] + row[x - 1] + prev[x] - prev[x - 1]
        rows.append(tuple(row))
        prev = row
    return SummedAreaTable(w, img.height, tuple(rows))


def _corners(entry, x, y, w, h):
    return entry(x + w, y + h) - entry(x, y + h) - entry(x + w, y) + entry(x, y)


def box_sum(sat: SummedAreaTable, rect: Sequence[int]) -> int:
    x, y, w, h = check_rect(rect, sat.width, sat.height)
    return _corners(sat.entry, x, y, w, h)


def brute_box_sum(img: Image, rect: Sequence[int]) -> int:
    x, y, w, h = check_rect(rect, img.width, img.height)
    return sum(img.pixel(i, j) for j in range(y, y + h) for i in range(x, x + w))


class LazySAT:
    """Summed-area table whose entries are computed on first use.

    The dependency closure of ``S[x][y]`` is the rectangle ``[1..x] x [1..y]``,
    so the memo is always a staircase anchored at the origin: ``_extent[y]``
    is how many columns of row ``y`` are known, non-increasing in ``y``.
    ``touches`` counts interior entries computed so far. Not thread-safe.
    """

    def __init__(self, img: Image):
        self.image = img
        self.width = img.width
        self.height = img.height
        self._rows: list[list] = [[0] * (img.width + 1) for _ in range(img.height + 1)]
        self._extent = [img.width] + [0] * img.height
        self.touches = 0

    def entry(self, x: int, y: int) -> int:
        if not (0 <= x <= self.width and 0 <= y <= self.height):
            raise IndexError(f"SAT index ({x}, {y}) out of range")
        if x == 0 or y == 0 or self._extent[y] >= x:
            return self._rows[y][x]
        pixels, w = self.image.pixels, self.width
        rows, extent = self._rows, self._extent
        for yy in range(1, y + 1):
            start = extent[yy]
            if start >= x:
                continue
            row, prev = rows[yy], rows[yy - 1]
            base = (yy - 1) * w
            for xx in range(start + 1, x + 1):
                row[xx] = pixels[base + xx - 1] + row[xx - 1] + prev[xx] - prev[xx - 1]
            self.touches += x - start
            extent[yy] = x
        return rows[y][x]

    def is_memoized(self, x: int, y: int) -> bool:
        return x == 0 or y == 0 or self._extent[y] >= x


def lazy_entry(ls: LazySAT, x: int, y: int) -> int:
    return ls.entry(x, y)


def box_sum_lazy(ls: LazySAT, rect: Sequence[int]) -> int:
    x, y, w, h = check_rect(rect, ls.width, ls.height)
    return _corners(ls.entry, x, y, w, h)


HAAR_KINDS = ("horizontal2", "vertical2", "horizontal3")


@dataclass(frozen=True)
class HaarFeature:
    """A Haar-like feature; the first listed region is positive.

    ``horizontal2``: left minus right half. ``vertical2``: top minus bottom
    half. ``horizontal3``: outer thirds minus the middle third.
    """

    kind: str
    x: int
    y: int
    w: int
    h: int

    def __post_init__(self):
        if self.kind not in HAAR_KINDS:
            raise ValueError(f"unknown feature kind {self.kind!r}; choose from {HAAR_KINDS}")
        if self.w < 1 or self.h < 1:
            raise ValueError("feature needs w, h >= 1")
        if self.kind == "horizontal2" and self.w % 2:
            raise ValueError("horizontal2 needs an even width")
        if self.kind == "vertical2" and self.h % 2:
            raise ValueError("vertical2 needs an even height")
        if self.kind == "horizontal3" and self.w % 3:
            raise ValueError("horizontal3 needs a width divisible by 3")

    @property
    def rect(self) -> tuple[int, int, int, int]:
        return (self.x, self.y, self.w, self.h)


def haar_regions(f: HaarFeature) -> list[tuple[int, tuple[int, int, int, int]]]:
    """``(sign, rect)`` pairs that partition the feature's bounding box."""
    x, y, w, h = f.rect
    if f.kind == "horizontal2":
        half = w // 2
        return [(1, (x, y, half, h)), (-1, (x + half, y, half, h))]
    if f.kind == "vertical2":
        half = h // 2
        return [(1, (x, y, w, half)), (-1, (x, y + half, w, half))]
    third = w // 3
    return [
        (1, (x, y, third, h)),
        (-1, (x + third, y, third, h)),
        (1, (x + 2 * third, y, third, h)),
    ]


def haar_value(src: SummedAreaTable | LazySAT, f: HaarFeature) -> int:
    check_rect(f.rect, src.width, src.height)
    query = box_sum_lazy if isinstance(src, LazySAT) else box_sum
    return sum(sign * query(src, rect) for sign, rect in haar_regions(f))
