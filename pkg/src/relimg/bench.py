"""Eager vs lazy summed-area-table workloads.

``sparse`` places ten random 8x8 rectangles inside a 32x32 window at the
image origin (the staircase memo only pays off when queries sit near the
origin of the table). ``full`` tiles the whole image with 8x8 rectangles.
"""

from __future__ import annotations

import random
import time

from .integral2d import Image, LazySAT, box_sum, box_sum_lazy, build_sat

__all__ = ["SCENARIOS", "make_workload", "run_bench", "CSV_FIELDS"]

SCENARIOS = ("sparse", "full")
CSV_FIELDS = ("workload", "strategy", "entries_touched", "wall_time")

IMAGE_SIZE = 256
RECT_SIZE = 8
WINDOW = 32
SPARSE_QUERIES = 10


def make_workload(scenario: str, seed: int, size: int = IMAGE_SIZE):
    """Return ``(image, rects)`` for ``scenario``; deterministic in ``seed``."""
    if scenario not in SCENARIOS:
        raise ValueError(f"unknown scenario {scenario!r}")
    rng = random.Random(seed)
    img = Image(size, size, tuple(rng.randrange(256) for _ in range(size * size)))
    if scenario == "sparse":
        span = min(WINDOW, size) - RECT_SIZE
        rects = [
            (rng.randint(0, span), rng.randint(0, span), RECT_SIZE, RECT_SIZE)
            for _ in range(SPARSE_QUERIES)
        ]
    else:
        rects = [
            (x, y, RECT_SIZE, RECT_SIZE)
            for y in range(0, size, RECT_SIZE)
            for x in range(0, size, RECT_SIZE)
        ]
    return img, rects


def _eager(img, rects):
    sat = build_sat(img)
    return [box_sum(sat, r) for r in rects], sat.entry_count


def _lazy(img, rects):
    ls = LazySAT(img)
    return [box_sum_lazy(ls, r) for r in rects], ls.touches


def run_bench(scenario: str, seed: int = 0, reps: int = 1, size: int = IMAGE_SIZE) -> list[dict]:
    if reps < 1:
        raise ValueError("reps must be >= 1")
    img, rects = make_workload(scenario, seed, size)
    rows = []
    reference = None
    for name, fn in (("eager", _eager), ("lazy", _lazy)):
        elapsed = 0.0
        for _ in range(reps):
            start = time.perf_counter()
            sums, touched = fn(img, rects)
            elapsed += time.perf_counter() - start
        if reference is None:
            reference = sums
        elif sums != reference:
            raise AssertionError(f"{name} box sums disagree with eager")
        rows.append({
            "workload": scenario,
            "strategy": name,
            "entries_touched": touched,
            "wall_time": elapsed / reps,
        })
    return rows
