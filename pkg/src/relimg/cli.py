"""Command-line front end: ``relimg {label,movavg,boxsum,haar,bench}``."""

from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import dataclass
from typing import Sequence

from . import signal
from ._validation import format_exact, parse_exact
from .bench import CSV_FIELDS, SCENARIOS, run_bench
from .ccl import LabelGrid, label_components_relational
from .integral2d import HAAR_KINDS, HaarFeature, LazySAT, box_sum, box_sum_lazy, build_sat, haar_value
from .pnm import PNMError, read_pbm, read_pgm

__all__ = ["main", "RunConfig", "read_signals", "format_grid", "parse_grid"]

IMPLEMENTATIONS = {
    "naive": signal.moving_average_naive,
    "stream": signal.moving_average_stream,
    "memo": signal.moving_average_memo,
    "relational": lambda v, w: signal.moving_average_relational(v, w).averages,
}


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    subcommand: str
    input: str | None = None
    window: int | None = None
    impl: str | None = None
    rect: tuple[int, int, int, int] | None = None
    kind: str | None = None
    connectivity: int = 4
    threshold: int = 0
    format: str = "grid"
    scenario: str | None = None
    reps: int = 1
    seed: int = 0

    def validate(self) -> "RunConfig":
        if self.subcommand == "movavg" and (self.window is None or self.window < 1):
            raise UsageError(f"--window must be a positive integer, got {self.window}")
        if self.subcommand == "bench" and self.reps < 1:
            raise UsageError("--reps must be >= 1")
        if self.subcommand == "label" and self.connectivity not in (4, 8):
            raise UsageError("--connectivity must be 4 or 8")
        return self

    @classmethod
    def from_namespace(cls, ns: argparse.Namespace) -> "RunConfig":
        fields = {k: v for k, v in vars(ns).items() if k in cls.__dataclass_fields__}
        return cls(**fields).validate()


def _rect(text: str) -> tuple[int, int, int, int]:
    try:
        parts = tuple(int(p) for p in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"rect must be x,y,w,h: {text!r}") from None
    if len(parts) != 4:
        raise argparse.ArgumentTypeError(f"rect must be x,y,w,h: {text!r}")
    return parts


def read_signals(text: str) -> list[list]:
    """One signal per non-blank line, whitespace-separated exact numbers."""
    return [[parse_exact(tok) for tok in line.split()]
            for line in text.splitlines() if line.strip()]


def format_grid(lg: LabelGrid, fmt: str = "grid") -> str:
    rows = lg.rows()
    if fmt == "grid":
        return "\n".join(" ".join(str(v) for v in row) for row in rows)
    if fmt == "list":
        return "(" + " ".join("(" + " ".join(str(v) for v in row) + ")" for row in rows) + ")"
    raise ValueError(f"unknown format {fmt!r}")


def parse_grid(text: str) -> LabelGrid:
    """Inverse of :func:`format_grid` for either format."""
    text = text.strip()
    if text.startswith("("):
        inner = text[1:-1].strip()
        rows = [r.strip(" ()").split() for r in inner.split(")") if r.strip(" ()")]
    else:
        rows = [line.split() for line in text.splitlines() if line.strip()]
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise ValueError("ragged label grid")
    return LabelGrid(width, len(rows), tuple(int(v) for r in rows for v in r))


def cmd_label(cfg: RunConfig) -> int:
    img = read_pbm(cfg.input, cfg.threshold)
    lg = label_components_relational(img, cfg.connectivity)
    print(format_grid(lg, cfg.format))
    return 0


def cmd_movavg(cfg: RunConfig) -> int:
    with open(cfg.input) as fh:
        signals = read_signals(fh.read())
    status = 0
    for v in signals:
        if cfg.window > len(v):
            raise UsageError(f"--window {cfg.window} exceeds signal length {len(v)}")
        if cfg.impl != "all":
            print(" ".join(format_exact(x) for x in IMPLEMENTATIONS[cfg.impl](v, cfg.window)))
            continue
        results = {}
        for name in ("naive", "stream", "memo"):
            results[name] = IMPLEMENTATIONS[name](v, cfg.window)
        rel = signal.moving_average_relational(v, cfg.window)
        results["relational"] = rel.averages
        for name, out in results.items():
            print(name, " ".join(format_exact(x) for x in out))
        agree = all(out == results["naive"] for out in results.values())
        print("AGREE" if agree else "DISAGREE")
        print(f"shortcut_hits={rel.stats.shortcut_hits} "
              f"direct_computations={rel.stats.direct_computations}")
        if not agree:
            status = 1
    return status


def cmd_boxsum(cfg: RunConfig) -> int:
    img = read_pgm(cfg.input)
    if cfg.impl == "lazy":
        ls = LazySAT(img)
        print(box_sum_lazy(ls, cfg.rect))
        print(f"entries_touched={ls.touches}", file=sys.stderr)
    else:
        print(box_sum(build_sat(img), cfg.rect))
    return 0


def cmd_haar(cfg: RunConfig) -> int:
    img = read_pgm(cfg.input)
    feature = HaarFeature(cfg.kind, *cfg.rect)
    src = LazySAT(img) if cfg.impl == "lazy" else build_sat(img)
    print(haar_value(src, feature))
    return 0


def cmd_bench(cfg: RunConfig) -> int:
    rows = run_bench(cfg.scenario, cfg.seed, cfg.reps)
    writer = csv.DictWriter(sys.stdout, fieldnames=CSV_FIELDS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({**row, "wall_time": f"{row['wall_time']:.6f}"})
    return 0


COMMANDS = {
    "label": cmd_label,
    "movavg": cmd_movavg,
    "boxsum": cmd_boxsum,
    "haar": cmd_haar,
    "bench": cmd_bench,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="relimg", description=__doc__)
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("label", help="label connected components of a PBM/PGM image")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--connectivity", type=int, choices=(4, 8), default=4)
    p.add_argument("--format", choices=("grid", "list"), default="grid")
    p.add_argument("--threshold", type=int, default=0,
                   help="graymap pixels above this value are foreground")

    p = sub.add_parser("movavg", help="moving average of each signal line")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--window", type=int, required=True)
    p.add_argument("--impl", choices=(*IMPLEMENTATIONS, "all"), default="naive")

    p = sub.add_parser("boxsum", help="sum of pixels in a rectangle")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--rect", type=_rect, required=True, metavar="X,Y,W,H")
    p.add_argument("--impl", choices=("eager", "lazy"), default="eager")

    p = sub.add_parser("haar", help="Haar-like feature value")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--kind", choices=HAAR_KINDS, required=True)
    p.add_argument("--rect", type=_rect, required=True, metavar="X,Y,W,H")
    p.add_argument("--impl", choices=("eager", "lazy"), default="eager")

    p = sub.add_parser("bench", help="eager vs lazy SAT workloads, as CSV")
    p.add_argument("--scenario", choices=SCENARIOS, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--reps", type=int, default=1)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = RunConfig.from_namespace(args)
        return COMMANDS[cfg.subcommand](cfg)
    except UsageError as exc:
        parser.error(str(exc))
    except (OSError, PNMError, ValueError, TypeError) as exc:
        print(f"relimg {args.subcommand}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
