"""Minimal netpbm reader for P1/P2/P4/P5 with maxval <= 255."""

from __future__ import annotations

import os

from .ccl import BinaryImage
from .integral2d import Image

__all__ = [
    "PNMError", "PNMHeaderError", "PNMTruncatedError", "PNMMaxvalError",
    "read_pnm", "read_pgm", "read_pbm", "parse_pnm", "to_binary",
]


class PNMError(ValueError):
    pass


class PNMHeaderError(PNMError):
    pass


class PNMTruncatedError(PNMError):
    pass


class PNMMaxvalError(PNMError):
    pass


_WS = b" \t\n\r\v\f"


class _Cursor:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def skip_space(self):
        data = self.data
        while self.pos < len(data):
            c = data[self.pos:self.pos + 1]
            if c == b"#":
                end = data.find(b"\n", self.pos)
                self.pos = len(data) if end < 0 else end + 1
            elif c in _WS:
                self.pos += 1
            else:
                break

    def token(self) -> bytes | None:
        self.skip_space()
        start = self.pos
        data = self.data
        while self.pos < len(data) and data[self.pos:self.pos + 1] not in _WS + b"#":
            self.pos += 1
        return data[start:self.pos] or None

    def header_int(self, what: str) -> int:
        tok = self.token()
        if tok is None:
            raise PNMHeaderError(f"missing {what} in header")
        if not tok.isdigit():
            raise PNMHeaderError(f"bad {what} in header: {tok!r}")
        return int(tok)


def parse_pnm(data: bytes) -> tuple[str, int, int, int, list[int]]:
    """Return ``(magic, width, height, maxval, samples)``.

    For P1/P4 ``maxval`` is 1 and samples are 1 for black (foreground).
    """
    cur = _Cursor(data)
    magic = data[:2].decode("latin-1")
    if magic not in ("P1", "P2", "P4", "P5"):
        raise PNMHeaderError(f"unsupported magic number {magic!r}")
    cur.pos = 2
    width = cur.header_int("width")
    height = cur.header_int("height")
    if width < 1 or height < 1:
        raise PNMHeaderError(f"bad dimensions {width}x{height}")
    if magic in ("P2", "P5"):
        maxval = cur.header_int("maxval")
        if not 1 <= maxval <= 255:
            raise PNMMaxvalError(f"unsupported maxval {maxval} (need 1..255)")
    else:
        maxval = 1
    count = width * height

    if magic == "P1":
        samples = []
        while len(samples) < count:
            cur.skip_space()
            if cur.pos >= len(data):
                raise PNMTruncatedError(f"expected {count} bits, got {len(samples)}")
            c = data[cur.pos:cur.pos + 1]
            if c not in b"01":
                raise PNMHeaderError(f"bad bit {c!r} in P1 raster")
            samples.append(int(c))
            cur.pos += 1
    elif magic == "P2":
        samples = []
        for _ in range(count):
            tok = cur.token()
            if tok is None:
                raise PNMTruncatedError(f"expected {count} samples, got {len(samples)}")
            if not tok.isdigit():
                raise PNMHeaderError(f"bad sample {tok!r} in P2 raster")
            value = int(tok)
            if value > maxval:
                raise PNMMaxvalError(f"sample {value} exceeds maxval {maxval}")
            samples.append(value)
    else:
        if cur.pos >= len(data) or data[cur.pos:cur.pos + 1] not in _WS:
            raise PNMHeaderError("missing whitespace after header")
        raster = data[cur.pos + 1:]
        if magic == "P5":
            if len(raster) < count:
                raise PNMTruncatedError(f"expected {count} bytes, got {len(raster)}")
            samples = list(raster[:count])
            if any(v > maxval for v in samples):
                raise PNMMaxvalError(f"sample exceeds maxval {maxval}")
        else:
            stride = (width + 7) // 8
            if len(raster) < stride * height:
                raise PNMTruncatedError(
                    f"expected {stride * height} bytes, got {len(raster)}"
                )
            samples = [
                (raster[y * stride + x // 8] >> (7 - x % 8)) & 1
                for y in range(height) for x in range(width)
            ]
    return magic, width, height, maxval, samples


def read_pnm(path: str | os.PathLike) -> tuple[str, int, int, int, list[int]]:
    with open(path, "rb") as fh:
        return parse_pnm(fh.read())


def read_pgm(path: str | os.PathLike) -> Image:
    """Read any supported netpbm file as an integer image.

    Bitmaps come back with 1 for foreground, so labeling and box sums agree.
    """
    _, width, height, _, samples = read_pnm(path)
    return Image(width, height, tuple(samples))


def to_binary(img: Image, threshold: int = 0) -> BinaryImage:
    return BinaryImage(img.width, img.height,
                       tuple(1 if p > threshold else 0 for p in img.pixels))


def read_pbm(path: str | os.PathLike, threshold: int = 0) -> BinaryImage:
    """Read a bitmap directly, or threshold a graymap (``pixel > threshold``)."""
    return to_binary(read_pgm(path), threshold)
