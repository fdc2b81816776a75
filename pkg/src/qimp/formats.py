"""PGM (P2/P5) and IDX3-ubyte image readers and writers."""
from __future__ import annotations

import gzip
import struct
from pathlib import Path

import numpy as np

from .codec import ImageBuffer
from .errors import ParseError

IDX3_MAGIC = 0x00000803
_WHITESPACE = b" \t\n\r\v\f"


def depth_for_maxval(maxval):
    """Bit depth for a PGM maxval: exact for ``2**k - 1``, else 8 or 16."""
    if (maxval + 1) & maxval == 0:
        return maxval.bit_length()
    return 8 if maxval <= 255 else 16


class _HeaderReader:
    def __init__(self, data):
        self.data = data
        self.pos = 0

    def _skip_space_and_comments(self):
        data = self.data
        while self.pos < len(data):
            ch = data[self.pos:self.pos + 1]
            if ch == b"#":
                end = data.find(b"\n", self.pos)
                self.pos = len(data) if end < 0 else end + 1
            elif ch in _WHITESPACE:
                self.pos += 1
            else:
                break

    def token(self, what):
        self._skip_space_and_comments()
        start = self.pos
        while self.pos < len(self.data) and self.data[self.pos:self.pos + 1] not in _WHITESPACE + b"#":
            self.pos += 1
        if start == self.pos:
            raise ParseError(f"expected {what}, found end of data", start)
        self.last_start = start
        return self.data[start:self.pos], start

    def integer(self, what):
        tok, start = self.token(what)
        if not tok.isdigit():
            raise ParseError(f"expected {what}, found {tok[:16]!r}", start)
        return int(tok)


def parse_pgm(data: bytes) -> ImageBuffer:
    reader = _HeaderReader(data)
    magic, _ = reader.token("magic number")
    if magic not in (b"P2", b"P5"):
        raise ParseError(f"unsupported magic {magic[:8]!r}, expected P2 or P5", 0)
    width = reader.integer("width")
    height = reader.integer("height")
    maxval = reader.integer("maxval")
    maxval_at = reader.last_start
    if width == 0 or height == 0:
        raise ParseError(f"empty image {width}x{height}", maxval_at)
    if not 0 < maxval <= 65535:
        raise ParseError(f"maxval {maxval} outside 1..65535", maxval_at)
    count = width * height

    if magic == b"P5":
        # exactly one whitespace byte separates the header from the raster
        start = reader.pos + 1
        dtype = np.dtype(">u2") if maxval > 255 else np.dtype("u1")
        needed = count * dtype.itemsize
        if len(data) - start < needed:
            raise ParseError(
                f"raster needs {needed} bytes, only {max(0, len(data) - start)} present",
                len(data),
            )
        pixels = np.frombuffer(data, dtype=dtype, count=count, offset=start).astype(np.int64)
        bad = np.flatnonzero(pixels > maxval)
        if bad.size:
            raise ParseError(f"sample exceeds maxval {maxval}", start + int(bad[0]) * dtype.itemsize)
    else:
        pixels = np.empty(count, dtype=np.int64)
        for i in range(count):
            try:
                value = reader.integer(f"sample {i} of {count}")
            except ParseError as exc:
                raise ParseError(f"truncated or malformed raster: {exc.reason}", exc.offset) from None
            if value > maxval:
                raise ParseError(f"sample {value} exceeds maxval {maxval}", reader.last_start)
            pixels[i] = value

    return ImageBuffer(pixels.reshape(height, width), depth_for_maxval(maxval))


def read_pgm(path) -> ImageBuffer:
    return parse_pgm(Path(path).read_bytes())


def format_pgm(img: ImageBuffer, binary: bool = True) -> bytes:
    if img.depth_bits > 16:
        raise ValueError(f"PGM holds at most 16 bits per sample, image has {img.depth_bits}")
    maxval = img.max_value
    header = f"{'P5' if binary else 'P2'}\n{img.cols} {img.rows}\n{maxval}\n".encode("ascii")
    if binary:
        dtype = ">u2" if maxval > 255 else "u1"
        return header + img.pixels.astype(dtype).tobytes()
    lines = (" ".join(str(v) for v in row) for row in img.pixels.tolist())
    return header + ("\n".join(lines) + "\n").encode("ascii")


def write_pgm(img: ImageBuffer, path, binary: bool = True) -> None:
    Path(path).write_bytes(format_pgm(img, binary))


def _open_idx(path):
    path = Path(path)
    return gzip.open(path, "rb") if path.suffix == ".gz" else open(path, "rb")


def read_idx_images(path, index: int) -> ImageBuffer:
    """Image ``index`` from an IDX3-ubyte file (optionally gzipped), 8-bit depth."""
    with _open_idx(path) as fh:
        header = fh.read(16)
        if len(header) < 16:
            raise ParseError("IDX header needs 16 bytes", len(header))
        magic, count, rows, cols = struct.unpack(">IIII", header)
        if magic != IDX3_MAGIC:
            raise ParseError(f"bad IDX3 magic 0x{magic:08x}, expected 0x{IDX3_MAGIC:08x}", 0)
        if not 0 <= index < count:
            raise ValueError(f"image index {index} out of range for {count} images")
        size = rows * cols
        offset = 16 + index * size
        fh.seek(offset)
        raw = fh.read(size)
    if len(raw) < size:
        raise ParseError(f"image {index} needs {size} bytes, only {len(raw)} present", offset + len(raw))
    return ImageBuffer(np.frombuffer(raw, dtype=np.uint8).reshape(rows, cols), 8)


def format_idx_images(images) -> bytes:
    """Serialize equally sized 8-bit images as IDX3-ubyte."""
    images = list(images)
    if not images:
        raise ValueError("need at least one image")
    rows, cols = images[0].pixels.shape
    body = bytearray(struct.pack(">IIII", IDX3_MAGIC, len(images), rows, cols))
    for img in images:
        if img.pixels.shape != (rows, cols) or img.depth_bits != 8:
            raise ValueError("IDX3 images must share shape and be 8-bit")
        body += img.pixels.astype(np.uint8).tobytes()
    return bytes(body)
