"""Quantum edge detection on QPIE states.

Each method runs two fixed circuits and interleaves their odd-index
amplitudes into one signed difference per flat pixel position:

* ``backward``: ``values[j] = (c[j-1] - c[j]) / sqrt(2)``.  Circuit A is a
  Hadamard on qubit 0; circuit B shifts the amplitudes by one first.
* ``central``: ``values[j] = (c[j-1] - c[j+1]) / sqrt(2)``.  Circuit A is
  SWAP(0, 1) then a Hadamard on qubit 0; circuit B shifts by two first.

Entries that only exist because of the cyclic shift (they pair pixels across
the ends of the flat vector, or touch zero padding) are flagged ``padded``.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .circuit import Circuit
from .codec import ImageBuffer, QpieEncoding
from .statevector import StateVector, sample


class Method(str, Enum):
    BACKWARD = "backward"
    CENTRAL = "central"


@dataclass(frozen=True, eq=False)
class EdgeMap:
    method: Method
    rows: int
    cols: int
    values: np.ndarray
    padded: np.ndarray
    magnitude_only: bool = False

    def __post_init__(self):
        size = self.rows * self.cols
        if self.values.shape != (size,) or self.padded.shape != (size,):
            raise ValueError(f"EdgeMap of {self.rows}x{self.cols} needs {size} entries")

    @property
    def measured(self):
        return ~self.padded

    def coverage(self):
        return ["padded" if p else "measured" for p in self.padded]


def pipeline_circuits(method, num_qubits) -> tuple[Circuit, Circuit]:
    method = Method(method)
    if method is Method.BACKWARD:
        return (
            Circuit(num_qubits).h(0),
            Circuit(num_qubits).shift(1).h(0),
        )
    if num_qubits < 2:
        raise ValueError("central differences need at least two qubits")
    return (
        Circuit(num_qubits).swap(0, 1).h(0),
        Circuit(num_qubits).shift(2).swap(0, 1).h(0),
    )


def extract_odd_amplitudes(state: StateVector) -> np.ndarray:
    return state.amplitudes[1::2].real.copy()


def _interleave(method, odd_a, odd_b):
    """Place the two circuits' odd amplitudes at their difference positions."""
    d = np.empty(2 * odd_a.size, dtype=odd_a.dtype)
    if method is Method.BACKWARD:
        d[1::2] = odd_a
        d[0::2] = np.roll(odd_b, 1)
    else:
        d[1::4] = odd_a[0::2]
        d[2::4] = odd_a[1::2]
        d[3::4] = odd_b[0::2]
        d[0::4] = np.roll(odd_b[1::2], 1)
    return d


def _padded_mask(method, size):
    padded = np.zeros(size, dtype=bool)
    padded[0] = True
    if method is Method.CENTRAL:
        padded[-1] = True
    return padded


def _detect(enc: QpieEncoding, method) -> EdgeMap:
    method = Method(method)
    circuit_a, circuit_b = pipeline_circuits(method, enc.state.num_qubits)
    odd_a = extract_odd_amplitudes(circuit_a.run(enc.state))
    odd_b = extract_odd_amplitudes(circuit_b.run(enc.state))
    size = enc.rows * enc.cols
    values = _interleave(method, odd_a, odd_b)[:size]
    return EdgeMap(method, enc.rows, enc.cols, values, _padded_mask(method, size))


def detect_backward(enc: QpieEncoding) -> EdgeMap:
    return _detect(enc, Method.BACKWARD)


def detect_central(enc: QpieEncoding) -> EdgeMap:
    return _detect(enc, Method.CENTRAL)


def detect(enc: QpieEncoding, method) -> EdgeMap:
    return _detect(enc, method)


def detect_from_shots(enc: QpieEncoding, method, shots: int, seed: int) -> EdgeMap:
    """Estimate edge magnitudes by sampling both circuits, half the shots each.

    Signs cannot be recovered from counts, so the map holds ``|values|``.
    """
    method = Method(method)
    if not isinstance(shots, (int, np.integer)) or shots < 2:
        raise ValueError(f"need at least 2 shots to run both circuits, got {shots!r}")
    circuit_a, circuit_b = pipeline_circuits(method, enc.state.num_qubits)
    seed_a, seed_b = np.random.SeedSequence(seed).spawn(2)
    hist_a = sample(circuit_a.run(enc.state), shots - shots // 2, seed_a)
    hist_b = sample(circuit_b.run(enc.state), shots // 2, seed_b)
    odd_a = np.sqrt(hist_a.frequencies()[1::2])
    odd_b = np.sqrt(hist_b.frequencies()[1::2])
    size = enc.rows * enc.cols
    values = _interleave(method, odd_a, odd_b)[:size]
    return EdgeMap(method, enc.rows, enc.cols, values, _padded_mask(method, size), magnitude_only=True)


def edge_image(
    edges: EdgeMap,
    mode: str = "abs",
    threshold_fraction: float = 0.5,
    depth_bits: int = 8,
    keep_padded: bool = False,
) -> ImageBuffer:
    """Render an edge map as a grayscale image.

    ``abs`` scales ``|v|`` so the largest magnitude is full white;
    ``threshold`` paints white wherever ``|v| >= threshold_fraction * max|v|``.
    Padded entries render black unless ``keep_padded``.
    """
    if not 0.0 <= threshold_fraction <= 1.0:
        raise ValueError(f"threshold_fraction must lie in [0, 1], got {threshold_fraction}")
    mags = np.abs(edges.values)
    if not keep_padded:
        mags = np.where(edges.padded, 0.0, mags)
    maxval = (1 << depth_bits) - 1
    peak = mags.max()
    if peak == 0:
        pixels = np.zeros(mags.size, dtype=np.int64)
    elif mode == "abs":
        pixels = np.rint(mags / peak * maxval).astype(np.int64)
    elif mode == "threshold":
        pixels = np.where(mags >= threshold_fraction * peak, maxval, 0)
    else:
        raise ValueError(f"unknown render mode {mode!r}")
    return ImageBuffer.from_flat(pixels, edges.rows, edges.cols, depth_bits)
