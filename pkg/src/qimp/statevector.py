"""Dense statevector simulation for the handful of gates the image pipelines need.

Qubit 0 is the least-significant bit of the basis index, so a Hadamard on
qubit 0 mixes the amplitude pairs ``(2k, 2k+1)``.  In tensor-product notation
qubit 0 is the rightmost factor.

Gate functions come in two layers: ``*_amplitudes`` kernels work on raw
(possibly unnormalized) complex arrays, and ``apply_*`` wrap them for
validated :class:`StateVector` values.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import sqrt

import numpy as np

from .errors import ResourceError

NORM_TOL = 1e-10
# 2**24 complex128 amplitudes is 256 MiB; the swap test on two 11-qubit images fits.
MAX_QUBITS = 24

_SQRT1_2 = 1 / sqrt(2)


def _check_qubit(qubit, n):
    if not isinstance(qubit, (int, np.integer)) or not 0 <= qubit < n:
        raise ValueError(f"qubit {qubit!r} out of range for {n}-qubit register")


def _num_qubits(size):
    n = int(size).bit_length() - 1
    if n < 1 or 1 << n != size:
        raise ValueError(f"amplitude count {size} is not a power of two >= 2")
    return n


# -- raw kernels ------------------------------------------------------------

def hadamard_amplitudes(amps, qubit):
    n = _num_qubits(amps.size)
    _check_qubit(qubit, n)
    view = amps.reshape(-1, 2, 1 << qubit)
    out = np.empty_like(view, dtype=np.result_type(amps.dtype, np.float64))
    out[:, 0, :] = (view[:, 0, :] + view[:, 1, :]) * _SQRT1_2
    out[:, 1, :] = (view[:, 0, :] - view[:, 1, :]) * _SQRT1_2
    return out.reshape(-1)


def swap_amplitudes(amps, qubit_a, qubit_b):
    n = _num_qubits(amps.size)
    _check_qubit(qubit_a, n)
    _check_qubit(qubit_b, n)
    if qubit_a == qubit_b:
        raise ValueError("SWAP needs two distinct qubits")
    t = amps.reshape((2,) * n)
    return np.swapaxes(t, n - 1 - qubit_a, n - 1 - qubit_b).reshape(-1)


def controlled_swap_amplitudes(amps, control, qubit_a, qubit_b):
    n = _num_qubits(amps.size)
    for q in (control, qubit_a, qubit_b):
        _check_qubit(q, n)
    if len({control, qubit_a, qubit_b}) != 3:
        raise ValueError("controlled-SWAP needs three distinct qubits")
    t = amps.reshape((2,) * n)
    out = t.copy()
    ax_c = n - 1 - control
    sel = [slice(None)] * n
    sel[ax_c] = 1
    sel = tuple(sel)
    # selecting control=1 drops that axis, shifting later axes down by one
    ax_a, ax_b = (ax - (ax > ax_c) for ax in (n - 1 - qubit_a, n - 1 - qubit_b))
    out[sel] = np.swapaxes(t[sel], ax_a, ax_b)
    return out.reshape(-1)


def shift_amplitudes(amps, amount):
    """Cyclic permutation ``new[i] = old[(i + amount) mod 2**n]``."""
    return np.roll(amps, -int(amount))


# -- validated states --------------------------------------------------------

@dataclass(frozen=True, eq=False)
class StateVector:
    """Normalized pure state of ``num_qubits`` qubits. Immutable."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=np.complex128).reshape(-1)
        n = _num_qubits(amps.size)
        if n > MAX_QUBITS:
            raise ResourceError(f"{n} qubits exceeds the {MAX_QUBITS}-qubit simulation limit")
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"amplitudes have norm {norm!r}, expected 1")
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)

    @property
    def num_qubits(self):
        return self.amplitudes.size.bit_length() - 1

    @property
    def probabilities(self):
        return np.abs(self.amplitudes) ** 2

    @classmethod
    def basis(cls, num_qubits, index=0):
        amps = np.zeros(1 << num_qubits, dtype=np.complex128)
        amps[index] = 1.0
        return cls(amps)

    def __len__(self):
        return self.amplitudes.size


def apply_hadamard(state: StateVector, qubit: int) -> StateVector:
    return StateVector(hadamard_amplitudes(state.amplitudes, qubit))


def apply_swap(state: StateVector, qubit_a: int, qubit_b: int) -> StateVector:
    return StateVector(swap_amplitudes(state.amplitudes, qubit_a, qubit_b))


def apply_shift(state: StateVector, amount: int) -> StateVector:
    return StateVector(shift_amplitudes(state.amplitudes, amount))


def apply_controlled_swap(state: StateVector, control: int, qubit_a: int, qubit_b: int) -> StateVector:
    return StateVector(controlled_swap_amplitudes(state.amplitudes, control, qubit_a, qubit_b))


def inner_product(a: StateVector, b: StateVector) -> complex:
    """``<a|b>``, conjugating the first argument."""
    if a.num_qubits != b.num_qubits:
        raise ValueError(f"dimension mismatch: {a.num_qubits} vs {b.num_qubits} qubits")
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def tensor(a: StateVector, b: StateVector) -> StateVector:
    """``a (x) b``; ``a`` occupies the high-order qubits."""
    if a.num_qubits + b.num_qubits > MAX_QUBITS:
        raise ResourceError(
            f"{a.num_qubits + b.num_qubits} qubits exceeds the {MAX_QUBITS}-qubit simulation limit"
        )
    return StateVector(np.kron(a.amplitudes, b.amplitudes))


# -- measurement -------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ShotHistogram:
    """Outcome counts indexed by basis state, stored densely."""

    counts: np.ndarray
    num_qubits: int

    def __post_init__(self):
        counts = np.asarray(self.counts, dtype=np.int64).reshape(-1)
        if counts.size != 1 << self.num_qubits:
            raise ValueError(f"expected {1 << self.num_qubits} bins, got {counts.size}")
        if (counts < 0).any():
            raise ValueError("counts must be nonnegative")
        counts.flags.writeable = False
        object.__setattr__(self, "counts", counts)

    @property
    def total_shots(self):
        return int(self.counts.sum())

    @classmethod
    def from_dict(cls, counts, num_qubits):
        dense = np.zeros(1 << num_qubits, dtype=np.int64)
        for index, count in counts.items():
            if not 0 <= index < dense.size:
                raise ValueError(f"basis index {index} out of range for {num_qubits} qubits")
            dense[index] = count
        return cls(dense, num_qubits)

    def to_dict(self):
        return {int(i): int(self.counts[i]) for i in np.flatnonzero(self.counts)}

    def frequencies(self):
        total = self.total_shots
        if total == 0:
            raise ValueError("histogram is empty")
        return self.counts / total

    def __eq__(self, other):
        if not isinstance(other, ShotHistogram):
            return NotImplemented
        return self.num_qubits == other.num_qubits and np.array_equal(self.counts, other.counts)


def _check_shots(shots):
    if not isinstance(shots, (int, np.integer)) or shots < 1:
        raise ValueError(f"shots must be a positive integer, got {shots!r}")


def sample(state: StateVector, shots: int, seed: int) -> ShotHistogram:
    """Draw ``shots`` projective measurements of every qubit."""
    _check_shots(shots)
    probs = state.probabilities
    probs = probs / probs.sum()
    counts = np.random.default_rng(seed).multinomial(shots, probs)
    return ShotHistogram(counts, state.num_qubits)


def qubit_zero_probability(state: StateVector, qubit: int) -> float:
    _check_qubit(qubit, state.num_qubits)
    view = state.probabilities.reshape(-1, 2, 1 << qubit)
    p0 = view[:, 0, :].sum()
    # ratio form keeps exact 0/1 outcomes exact despite rounding in the total
    return float(p0 / (p0 + view[:, 1, :].sum()))


def measure_qubit(state: StateVector, qubit: int, shots: int, seed: int) -> tuple[int, int]:
    """Measure one qubit ``shots`` times; returns ``(count0, count1)``."""
    _check_shots(shots)
    p0 = qubit_zero_probability(state, qubit)
    count0 = int(np.random.default_rng(seed).binomial(shots, p0))
    return count0, shots - count0
