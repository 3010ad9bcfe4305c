"""Connected-component labeling.

The relational labeler gives every foreground pixel a fresh logic variable
and, scanning in raster order with ``builde_nest``, unifies it with the
variables of its already-visited foreground neighbours. The triangular
substitution then plays the role of a union-find forest: reifying the label
list names each equivalence class ``_.k`` in order of first appearance,
which is directly the canonical labeling.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Sequence

from ._validation import check_connectivity
from .kanren import Symbol, conj, eq, fresh, run, succeed
from .loops import builde_nest

__all__ = [
    "BinaryImage", "LabelGrid", "label_components_relational",
    "flood_fill_oracle", "canonicalize", "component_count",
]

_BACKWARD = {
    4: ((-1, 0), (0, -1)),
    8: ((-1, 0), (-1, -1), (0, -1), (1, -1)),
}
_ALL = {
    4: ((1, 0), (-1, 0), (0, 1), (0, -1)),
    8: tuple((dx, dy) for dy in (-1, 0, 1) for dx in (-1, 0, 1) if dx or dy),
}


@dataclass(frozen=True)
class BinaryImage:
    width: int
    height: int
    bits: tuple

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ValueError("binary image needs width, height >= 1")
        if len(self.bits) != self.width * self.height:
            raise ValueError(
                f"expected {self.width * self.height} bits, got {len(self.bits)}"
            )
        if any(b not in (0, 1) for b in self.bits):
            raise ValueError("bits must be 0 or 1")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "BinaryImage":
        rows = [list(r) for r in rows]
        width = len(rows[0]) if rows else 0
        if any(len(r) != width for r in rows):
            raise ValueError("ragged rows")
        return cls(width, len(rows), tuple(int(b) for r in rows for b in r))

    def rows(self) -> list[list[int]]:
        w = self.width
        return [list(self.bits[y * w:(y + 1) * w]) for y in range(self.height)]


@dataclass(frozen=True)
class LabelGrid:
    width: int
    height: int
    labels: tuple

    def rows(self) -> list[list[int]]:
        w = self.width
        return [list(self.labels[y * w:(y + 1) * w]) for y in range(self.height)]


def component_count(lg: LabelGrid) -> int:
    return len({l for l in lg.labels if l})


def canonicalize(lg: LabelGrid) -> LabelGrid:
    """Renumber so components are 1, 2, ... by first raster occurrence."""
    mapping: dict = {}
    out = []
    for label in lg.labels:
        if not label:
            out.append(0)
            continue
        if label not in mapping:
            mapping[label] = len(mapping) + 1
        out.append(mapping[label])
    return LabelGrid(lg.width, lg.height, tuple(out))


def flood_fill_oracle(img: BinaryImage, connectivity: int = 4) -> LabelGrid:
    """BFS flood fill seeded in raster order."""
    steps = _ALL[check_connectivity(connectivity)]
    w, h, bits = img.width, img.height, img.bits
    labels = [0] * (w * h)
    current = 0
    for start in range(w * h):
        if not bits[start] or labels[start]:
            continue
        current += 1
        labels[start] = current
        queue = deque([start])
        while queue:
            p = queue.popleft()
            px, py = p % w, p // w
            for dx, dy in steps:
                nx, ny = px + dx, py + dy
                if 0 <= nx < w and 0 <= ny < h:
                    q = ny * w + nx
                    if bits[q] and not labels[q]:
                        labels[q] = current
                        queue.append(q)
    return LabelGrid(w, h, tuple(labels))


def labeling_goal(img: BinaryImage, connectivity: int, q):
    """Goal binding ``q`` to the per-pixel label terms (0 for background)."""
    neighbours = _BACKWARD[check_connectivity(connectivity)]
    w, h, bits = img.width, img.height, img.bits
    foreground = [p for p in range(w * h) if bits[p]]

    def body(*vars_):
        slot = dict(zip(foreground, vars_))

        def visit(y, x):
            p = y * w + x
            if not bits[p]:
                return succeed
            links = []
            for dx, dy in neighbours:
                nx, ny = x + dx, y + dy
                if 0 <= nx < w and 0 <= ny < h and bits[ny * w + nx]:
                    links.append(eq(slot[p], slot[ny * w + nx]))
            return conj(*links)

        return conj(
            builde_nest([h, w], visit),
            eq(q, [slot.get(p, 0) for p in range(w * h)]),
        )
    return fresh(len(foreground), body)


def label_components_relational(img: BinaryImage, connectivity: int = 4) -> LabelGrid:
    (answer,) = run(1, lambda q: labeling_goal(img, connectivity, q))
    classes: dict = {}
    labels = []
    for term in answer:
        if isinstance(term, Symbol):
            labels.append(classes.setdefault(term, len(classes) + 1))
        else:
            labels.append(0)
    return canonicalize(LabelGrid(img.width, img.height, tuple(labels)))
