"""Minimal circuit description: an ordered list of operations on a StateVector.

Only used to make pipeline structure inspectable (gate counts) and replayable.
Shifts are classical amplitude permutations and are counted separately from
quantum gates.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .statevector import (
    StateVector,
    apply_controlled_swap,
    apply_hadamard,
    apply_shift,
    apply_swap,
)

GATES = {
    "h": apply_hadamard,
    "swap": apply_swap,
    "cswap": apply_controlled_swap,
}
PERMUTATIONS = {
    "shift": apply_shift,
}


@dataclass(frozen=True)
class Op:
    name: str
    args: tuple[int, ...]


@dataclass
class Circuit:
    num_qubits: int
    ops: list[Op] = field(default_factory=list)

    def h(self, qubit):
        self.ops.append(Op("h", (qubit,)))
        return self

    def swap(self, qubit_a, qubit_b):
        self.ops.append(Op("swap", (qubit_a, qubit_b)))
        return self

    def cswap(self, control, qubit_a, qubit_b):
        self.ops.append(Op("cswap", (control, qubit_a, qubit_b)))
        return self

    def shift(self, amount):
        self.ops.append(Op("shift", (amount,)))
        return self

    @property
    def gate_count(self):
        return sum(op.name in GATES for op in self.ops)

    @property
    def permutation_count(self):
        return sum(op.name in PERMUTATIONS for op in self.ops)

    def run(self, state: StateVector) -> StateVector:
        if state.num_qubits != self.num_qubits:
            raise ValueError(
                f"circuit acts on {self.num_qubits} qubits, state has {state.num_qubits}"
            )
        for op in self.ops:
            fn = GATES.get(op.name) or PERMUTATIONS[op.name]
            state = fn(state, *op.args)
        return state
