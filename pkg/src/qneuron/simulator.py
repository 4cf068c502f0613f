"""Dense state-vector execution of qubit circuits and the neuron pipeline.

Gates update amplitudes in place along per-wire strides; no gate matrix is
ever built here, which keeps this path independent of the kron-product
oracle in :mod:`qneuron.circuits`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .circuits import QubitCircuit, mcx
from .diagonal import GRAY, HADAMARD, merged_diagonal, synth_alg1, synth_alg2

__all__ = [
    "ANCILLA",
    "MEASURE_ALL",
    "AMPLITUDE_WIRE_LIMIT",
    "MeasurementOutcome",
    "Histogram",
    "zero_state",
    "run",
    "build_neuron_circuit",
    "neuron_qubit",
    "outcome_from_state",
    "sample",
]

ANCILLA = "ancilla"
MEASURE_ALL = "measure-all"

#: amplitude count 2^w caps the register width
AMPLITUDE_WIRE_LIMIT = 24

_SQRT1_2 = 1.0 / math.sqrt(2.0)


def zero_state(num_wires: int) -> np.ndarray:
    state = np.zeros(1 << num_wires, dtype=complex)
    state[0] = 1.0
    return state


def _slicer(num_wires: int, fixed: dict[int, int]) -> tuple:
    index: list = [slice(None)] * num_wires
    for axis, value in fixed.items():
        index[axis] = value
    return tuple(index)


def _apply(state: np.ndarray, gate, num_wires: int) -> None:
    if gate.kind == "gphase":
        state *= np.exp(1j * gate.angle)
        return
    view = state.reshape((2,) * num_wires)
    if gate.kind in ("h", "x", "rz"):
        axis = num_wires - 1 - gate.wires[0]
        lo = _slicer(num_wires, {axis: 0})
        hi = _slicer(num_wires, {axis: 1})
        if gate.kind == "rz":
            half = gate.angle / 2.0
            view[lo] *= np.exp(-1j * half)
            view[hi] *= np.exp(1j * half)
        elif gate.kind == "x":
            top = view[lo].copy()
            view[lo] = view[hi]
            view[hi] = top
        else:
            top = view[lo].copy()
            bottom = view[hi].copy()
            view[lo] = (top + bottom) * _SQRT1_2
            view[hi] = (top - bottom) * _SQRT1_2
        return
    # cx / mcx: swap the target pair wherever every control bit is set
    fixed = {num_wires - 1 - c: 1 for c in gate.controls}
    target_axis = num_wires - 1 - gate.target
    lo = _slicer(num_wires, {**fixed, target_axis: 0})
    hi = _slicer(num_wires, {**fixed, target_axis: 1})
    top = view[lo].copy()
    view[lo] = view[hi]
    view[hi] = top


def run(circuit: QubitCircuit, initial=None, trace: bool = False):
    """Apply the circuit's gates in order to a state vector.

    Starts from |0...0> unless ``initial`` is given (must be normalized).
    With ``trace=True`` returns (final_state, [state after each gate]).
    """
    w = circuit.num_wires
    if w > AMPLITUDE_WIRE_LIMIT:
        raise ValueError(f"state vector limited to {AMPLITUDE_WIRE_LIMIT} wires, got {w}")
    if initial is None:
        state = zero_state(w)
    else:
        state = np.array(initial, dtype=complex)
        if state.shape != (1 << w,):
            raise ValueError(f"initial state needs {1 << w} amplitudes")
        if abs(np.linalg.norm(state) - 1.0) > 1e-10:
            raise ValueError("initial state is not normalized")
    stages = []
    for gate in circuit.gates:
        _apply(state, gate, w)
        if trace:
            stages.append(state.copy())
    return (state, stages) if trace else state


@dataclass(frozen=True)
class MeasurementOutcome:
    """Two-outcome statistics of one neuron run; p1 is the neuron's output."""

    p0: float
    p1: float
    strategy: str


def build_neuron_circuit(
    theta, phi, algorithm: str = GRAY, strategy: str = ANCILLA
) -> QubitCircuit:
    """Assemble the neuron circuit for one (theta, phi) pair.

    Hadamard layer, merged diagonal for theta - phi, Hadamard layer, X
    layer; the ancilla strategy appends a multi-controlled NOT so that the
    flag wire fires exactly on the all-zeros overlap component.  The
    Gray-walk synthesis brings its own ancilla wire, which the flag reuses.
    """
    if algorithm not in (GRAY, HADAMARD):
        raise ValueError(f"unknown algorithm {algorithm!r}")
    if strategy not in (ANCILLA, MEASURE_ALL):
        raise ValueError(f"unknown strategy {strategy!r}")
    beta = merged_diagonal(theta, phi)
    n = len(beta).bit_length() - 1
    diagonal = synth_alg1(beta) if algorithm == GRAY else synth_alg2(beta)
    num_wires = n + 1 if (algorithm == GRAY or strategy == ANCILLA) else n
    circuit = QubitCircuit(num_wires, metadata=f"neuron-{algorithm}-{strategy}(n={n})")
    for wire in range(n):
        circuit.h(wire)
    circuit.extend(diagonal.gates)
    for wire in range(n):
        circuit.h(wire)
    for wire in range(n):
        circuit.x(wire)
    if strategy == ANCILLA:
        circuit.append(mcx(range(n), n))
    return circuit


def outcome_from_state(state: np.ndarray, n: int, strategy: str) -> MeasurementOutcome:
    """Extract the neuron's output probability from a final state.

    Ancilla strategy: probability of the flag wire (index n) reading 1.
    Measure-all: probability of the all-ones data outcome (the X layer maps
    the all-zeros overlap component there), marginal over any extra wire.
    """
    probs = np.abs(state) ** 2
    if strategy == ANCILLA:
        p1 = float(probs[1 << n :].sum())
    else:
        ones = (1 << n) - 1
        p1 = float(probs[ones::1 << n].sum())
    return MeasurementOutcome(1.0 - p1, p1, strategy)


def neuron_qubit(
    theta, phi, algorithm: str = GRAY, strategy: str = ANCILLA
) -> MeasurementOutcome:
    """Simulate the neuron circuit and return its measurement statistics."""
    circuit = build_neuron_circuit(theta, phi, algorithm, strategy)
    n = len(np.asarray(theta)).bit_length() - 1
    state = run(circuit)
    return outcome_from_state(state, n, strategy)


@dataclass(frozen=True)
class Histogram:
    """Shot counts for a two-outcome measurement, exact probabilities included."""

    labels: tuple[str, ...]
    probabilities: tuple[float, ...]
    counts: tuple[int, ...]
    shots: int
    seed: int

    def to_dict(self) -> dict:
        return {
            "labels": list(self.labels),
            "probabilities": list(self.probabilities),
            "counts": list(self.counts),
            "shots": self.shots,
            "seed": self.seed,
        }


def sample(outcome: MeasurementOutcome, shots: int, seed: int) -> Histogram:
    """Binomial draw of measurement shots with a fixed seed."""
    if shots < 1:
        raise ValueError("shots must be at least 1")
    rng = np.random.default_rng(seed)
    ones = int(rng.binomial(shots, min(max(outcome.p1, 0.0), 1.0)))
    return Histogram(
        labels=("0", "1"),
        probabilities=(outcome.p0, outcome.p1),
        counts=(shots - ones, ones),
        shots=shots,
        seed=seed,
    )
