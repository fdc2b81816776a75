"""Swap-test comparison of two encoded images.

Register layout is ``[ancilla | a | b]`` with the ancilla as the most
significant qubit; qubit ``k`` of ``b`` is paired with qubit ``k`` of ``a``.
The ancilla reads 0 with probability ``1/2 + |<a|b>|**2 / 2``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .circuit import Circuit
from .codec import ImageBuffer, amplitude_state, qpie_encode
from .edges import detect
from .errors import DomainError
from .statevector import StateVector, measure_qubit, qubit_zero_probability, tensor


@dataclass(frozen=True)
class SimilarityResult:
    p0_estimate: float
    shots: int
    count0: int
    exact_p0: Optional[float] = None

    @property
    def fidelity_estimate(self):
        return min(1.0, max(0.0, 2.0 * self.p0_estimate - 1.0))

    def to_dict(self):
        return {
            "p0_estimate": self.p0_estimate,
            "exact_p0": self.exact_p0,
            "fidelity_estimate": self.fidelity_estimate,
            "shots": self.shots,
            "count0": self.count0,
        }


def swap_test_circuit(n: int) -> Circuit:
    ancilla = 2 * n
    circuit = Circuit(2 * n + 1).h(ancilla)
    for k in range(n):
        circuit.cswap(ancilla, n + k, k)
    return circuit.h(ancilla)


def build_swap_test(a: StateVector, b: StateVector) -> StateVector:
    if a.num_qubits != b.num_qubits:
        raise ValueError(f"cannot compare {a.num_qubits}- and {b.num_qubits}-qubit states")
    n = a.num_qubits
    register = tensor(StateVector.basis(1, 0), tensor(a, b))
    return swap_test_circuit(n).run(register)


def compare(a: StateVector, b: StateVector, shots: int, seed: int) -> SimilarityResult:
    state = build_swap_test(a, b)
    ancilla = state.num_qubits - 1
    count0, _ = measure_qubit(state, ancilla, shots, seed)
    exact = qubit_zero_probability(state, ancilla)
    return SimilarityResult(count0 / shots, shots, count0, exact)


def edge_state(img: ImageBuffer, method) -> StateVector:
    """QPIE state of the exact edge magnitudes; wraparound entries are zeroed."""
    enc = qpie_encode(img)
    edges = detect(enc, method)
    mags = np.where(edges.padded, 0.0, np.abs(edges.values))
    try:
        state, _ = amplitude_state(mags, enc.state.num_qubits)
    except DomainError:
        raise DomainError("image has no edges; its edge state is undefined") from None
    return state


def compare_edges(img_a: ImageBuffer, img_b: ImageBuffer, method, shots: int, seed: int) -> SimilarityResult:
    if img_a.pixels.shape != img_b.pixels.shape:
        raise ValueError(
            f"image shapes differ: {img_a.pixels.shape} vs {img_b.pixels.shape}"
        )
    return compare(edge_state(img_a, method), edge_state(img_b, method), shots, seed)


def compare_images(img_a: ImageBuffer, img_b: ImageBuffer, shots: int, seed: int) -> SimilarityResult:
    if img_a.pixels.shape != img_b.pixels.shape:
        raise ValueError(
            f"image shapes differ: {img_a.pixels.shape} vs {img_b.pixels.shape}"
        )
    return compare(qpie_encode(img_a).state, qpie_encode(img_b).state, shots, seed)
