"""Classical rasters and their QPIE, FRQI and NEQR quantum encodings.

Pixels are flattened column by column: the row index varies fastest, so flat
index ``i`` addresses pixel ``(i % rows, i // rows)``.  Consecutive basis
states therefore hold vertically adjacent pixels.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import pi

import numpy as np

from .errors import CorruptHistogramError, DomainError
from .statevector import ShotHistogram, StateVector

# numpy memory order matching the flattening above
FLATTEN_ORDER = "F"


@dataclass(frozen=True, eq=False)
class ImageBuffer:
    """Grayscale raster of shape ``(rows, cols)`` with ``depth_bits`` bits per pixel.

    ``unobserved`` lists flat indices that a shot-based estimate never saw;
    those pixels are reported as 0.
    """

    pixels: np.ndarray
    depth_bits: int = 8
    unobserved: tuple[int, ...] = field(default=(), compare=False)

    def __post_init__(self):
        px = np.array(self.pixels)
        if px.ndim == 1:
            px = px.reshape(1, -1)
        if px.ndim != 2 or px.size == 0:
            raise ValueError(f"pixels must be a non-empty 2-D array, got shape {px.shape}")
        if self.depth_bits < 1:
            raise ValueError(f"depth_bits must be >= 1, got {self.depth_bits}")
        if not np.issubdtype(px.dtype, np.integer):
            if not np.array_equal(px, np.round(px)):
                raise ValueError("pixels must be integers")
        px = px.astype(np.int64)
        if px.min() < 0 or px.max() > self.max_value:
            raise ValueError(
                f"pixel values must lie in [0, {self.max_value}] for depth {self.depth_bits}"
            )
        px.flags.writeable = False
        object.__setattr__(self, "pixels", px)
        object.__setattr__(self, "unobserved", tuple(int(i) for i in self.unobserved))

    @property
    def rows(self):
        return self.pixels.shape[0]

    @property
    def cols(self):
        return self.pixels.shape[1]

    @property
    def max_value(self):
        return (1 << self.depth_bits) - 1

    def flat(self):
        return self.pixels.reshape(-1, order=FLATTEN_ORDER)

    @classmethod
    def from_flat(cls, values, rows, cols, depth_bits=8, unobserved=()):
        px = np.asarray(values).reshape((rows, cols), order=FLATTEN_ORDER)
        return cls(px, depth_bits, unobserved)

    def transpose(self):
        return ImageBuffer(self.pixels.T, self.depth_bits)

    def __eq__(self, other):
        if not isinstance(other, ImageBuffer):
            return NotImplemented
        return self.depth_bits == other.depth_bits and np.array_equal(self.pixels, other.pixels)


def qubits_for(size):
    """Smallest register holding ``size`` amplitudes (at least one qubit)."""
    return max(1, (int(size) - 1).bit_length())


def amplitude_state(values, num_qubits=None):
    """Normalize a real vector into a state, zero-padding up to ``2**num_qubits``."""
    values = np.asarray(values, dtype=np.float64).reshape(-1)
    if num_qubits is None:
        num_qubits = qubits_for(values.size)
    if values.size > 1 << num_qubits:
        raise ValueError(f"{values.size} values do not fit in {num_qubits} qubits")
    norm = np.linalg.norm(values)
    if norm == 0:
        raise DomainError("cannot normalize an all-zero vector")
    amps = np.zeros(1 << num_qubits)
    amps[: values.size] = values / norm
    return StateVector(amps), float(norm)


def _side_exponent(img):
    r, c = img.rows, img.cols
    if r != c or r & (r - 1):
        raise ValueError(f"encoding needs a square 2^n x 2^n image, got {r}x{c}")
    return r.bit_length() - 1


# -- QPIE -------------------------------------------------------------------

@dataclass(frozen=True)
class QpieEncoding:
    state: StateVector
    rows: int
    cols: int
    norm_factor: float


def qpie_encode(img: ImageBuffer) -> QpieEncoding:
    state, norm = amplitude_state(img.flat(), qubits_for(img.rows * img.cols))
    return QpieEncoding(state, img.rows, img.cols, norm)


def qpie_estimate(hist: ShotHistogram, rows: int, cols: int, depth_bits: int = 8) -> ImageBuffer:
    """Estimate an image from QPIE measurement counts.

    Amplitudes come back as ``sqrt(N_i / N)``; the original norm is not
    recoverable, so the brightest estimate is mapped to full scale.
    """
    size = rows * cols
    if size > hist.counts.size:
        raise ValueError(f"{rows}x{cols} image does not fit a {hist.num_qubits}-qubit histogram")
    amps = np.sqrt(hist.frequencies()[:size])
    peak = amps.max()
    maxval = (1 << depth_bits) - 1
    pixels = np.rint(amps / peak * maxval) if peak > 0 else np.zeros(size)
    unobserved = np.flatnonzero(hist.counts[:size] == 0)
    return ImageBuffer.from_flat(pixels.astype(np.int64), rows, cols, depth_bits, unobserved)


# -- FRQI -------------------------------------------------------------------

@dataclass(frozen=True)
class FrqiEncoding:
    """Color qubit is the most significant; index ``color * 4**n + position``."""

    state: StateVector
    thetas: np.ndarray
    n: int


@dataclass(frozen=True)
class FrqiEstimate:
    thetas: np.ndarray
    unobserved: tuple[int, ...]


def gray_to_theta(values, depth_bits):
    return (pi / 2) * np.asarray(values, dtype=np.float64) / ((1 << depth_bits) - 1)


def frqi_encode(img: ImageBuffer) -> FrqiEncoding:
    n = _side_exponent(img)
    thetas = gray_to_theta(img.flat(), img.depth_bits)
    scale = 1.0 / (1 << n)
    amps = np.concatenate([np.cos(thetas), np.sin(thetas)]) * scale
    return FrqiEncoding(StateVector(amps), thetas, n)


def frqi_estimate(hist: ShotHistogram, n: int) -> FrqiEstimate:
    """Per-position angle from the conditional frequency of color qubit 0."""
    if hist.num_qubits != 2 * n + 1:
        raise ValueError(f"FRQI with n={n} needs {2 * n + 1} qubits, histogram has {hist.num_qubits}")
    positions = 1 << (2 * n)
    n0 = hist.counts[:positions].astype(np.float64)
    n1 = hist.counts[positions:].astype(np.float64)
    seen = (n0 + n1) > 0
    thetas = np.zeros(positions)
    thetas[seen] = np.arccos(np.sqrt(n0[seen] / (n0[seen] + n1[seen])))
    return FrqiEstimate(thetas, tuple(int(i) for i in np.flatnonzero(~seen)))


# -- NEQR -------------------------------------------------------------------

@dataclass(frozen=True)
class NeqrEncoding:
    """Gray register is the most significant; index ``gray * 4**n + position``."""

    state: StateVector
    n: int
    q: int


def neqr_encode(img: ImageBuffer) -> NeqrEncoding:
    n = _side_exponent(img)
    q = img.depth_bits
    positions = 1 << (2 * n)
    amps = np.zeros(positions << q)
    amps[img.flat() * positions + np.arange(positions)] = 1.0 / (1 << n)
    return NeqrEncoding(StateVector(amps), n, q)


def neqr_retrieve(hist: ShotHistogram, n: int, q: int) -> ImageBuffer:
    """Decode every observed outcome into ``(gray, position)`` exactly."""
    if hist.num_qubits != 2 * n + q:
        raise ValueError(f"NEQR with n={n}, q={q} needs {2 * n + q} qubits, histogram has {hist.num_qubits}")
    positions = 1 << (2 * n)
    observed = np.flatnonzero(hist.counts)
    gray, pos = np.divmod(observed, positions)
    pixels = np.zeros(positions, dtype=np.int64)
    seen = np.zeros(positions, dtype=bool)
    for g, p in zip(gray.tolist(), pos.tolist()):
        if seen[p] and pixels[p] != g:
            raise CorruptHistogramError(
                f"position {p} observed with gray values {pixels[p]} and {g}"
            )
        pixels[p] = g
        seen[p] = True
    side = 1 << n
    return ImageBuffer.from_flat(pixels, side, side, q, np.flatnonzero(~seen))
