"""Linear-optical backend: beam-splitter meshes, single-photon simulation,
and optical circuit costs.

A single photon over N spatial modes (qmodes) is a unit vector of N complex
amplitudes, so every passive element acts as an N x N unitary on that
vector and bosonic operators never need to be materialized.  A beam
splitter mixes one mode pair through [[cos eta, -e^{-i xi} sin eta],
[e^{i xi} sin eta, cos eta]] (xi = 0 throughout for real meshes); a
phase-shifter layer multiplies amplitude k by e^{i beta_k}.

Mesh synthesis pairs adjacent amplitudes into a binary tree of splitter
angles and wires the tree as a pyramid executed root-first: each parent's
odd child keeps the parent's mode while the even child takes the next
unused mode.  Angles that come out exactly pi/2 route nothing through the
new port, so no element is emitted and the skip is recorded; the resulting
input-index -> qmode permutation is part of the plan.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .circuits import CostMetrics

__all__ = [
    "BeamSplitter",
    "PhaseShifterLayer",
    "MeshPlan",
    "OpticalNeuronCircuit",
    "mesh_synthesize",
    "compose_unitary",
    "uniform_mesh",
    "uniform_md",
    "simulate_photon",
    "build_neuron_optical_circuit",
    "neuron_optical",
    "optical_cost_metrics",
    "mesh_to_dict",
    "mesh_from_dict",
]

_HALF_PI = math.pi / 2.0


@dataclass(frozen=True)
class BeamSplitter:
    """One splitter on an ordered mode pair; cos(eta) is the transmitted amplitude."""

    eta: float
    modes: tuple[int, int]
    xi: float = 0.0

    def __post_init__(self):
        if self.modes[0] == self.modes[1]:
            raise ValueError("beam splitter needs two distinct modes")

    def matrix2(self) -> np.ndarray:
        c, s = math.cos(self.eta), math.sin(self.eta)
        r = np.exp(1j * self.xi)
        return np.array([[c, -s / r], [s * r, c]], dtype=complex)


@dataclass(eq=False)
class PhaseShifterLayer:
    """One phase shifter per qmode, applied in parallel."""

    phases: np.ndarray

    def __post_init__(self):
        self.phases = np.asarray(self.phases, dtype=float)


@dataclass
class MeshPlan:
    """Pyramid of beam splitters preparing a target amplitude vector from mode 0.

    ``layers`` is in execution order (root layer first).  ``skipped``
    records (layer, node) positions whose angle hit pi/2 and emitted
    nothing.  ``mode_permutation[j]`` is the qmode on which input amplitude
    j ends up.
    """

    modes: int
    layers: list[list[BeamSplitter]] = field(default_factory=list)
    skipped: list[tuple[int, int]] = field(default_factory=list)
    mode_permutation: list[int] = field(default_factory=list)

    @property
    def num_layers(self) -> int:
        return len(self.layers)

    @property
    def num_elements(self) -> int:
        return sum(len(layer) for layer in self.layers)

    def elements(self):
        for layer in self.layers:
            yield from layer


def _tree_angles(amps: np.ndarray):
    """Bottom-up pairing: per-layer splitter angles and surviving pair norms."""
    values = [list(amps)]
    angles: list[list[float]] = []
    while len(values[-1]) > 1:
        level = list(values[-1])
        if len(level) % 2:
            level.append(0.0)
        merged, level_angles = [], []
        for t in range(len(level) // 2):
            even, odd = level[2 * t], level[2 * t + 1]
            norm = math.hypot(even, odd)
            level_angles.append(_HALF_PI if norm == 0.0 else math.acos(odd / norm))
            merged.append(norm)
        values.append(merged)
        angles.append(level_angles)
    return angles


def mesh_synthesize(c) -> MeshPlan:
    """Splitter pyramid whose action on the mode-0 photon realizes ``c``.

    ``c`` must be a unit-norm vector of nonnegative amplitudes.  The output
    amplitudes are a permutation of ``c`` (recorded in the plan); zero
    amplitudes stranded behind a skipped splitter receive the leftover
    modes so the permutation stays total.
    """
    amps = np.asarray(c, dtype=float)
    if amps.ndim != 1 or amps.size < 1:
        raise ValueError("amplitudes must be a nonempty one-dimensional sequence")
    if np.any(amps < 0):
        raise ValueError("amplitudes must be nonnegative")
    if abs(np.linalg.norm(amps) - 1.0) > 1e-10:
        raise ValueError("amplitudes must have unit norm")
    n_modes = len(amps)
    angles = _tree_angles(amps)
    depth = len(angles)

    # walk the tree root-first; slots = (mode, tree layer, node index)
    slots: list[tuple[int, int, int]] = [(0, depth, 0)]
    layers: list[list[BeamSplitter]] = []
    skipped: list[tuple[int, int]] = []
    next_mode = 1
    for stage in range(depth):
        level = depth - 1 - stage
        emitted: list[BeamSplitter] = []
        survivors: list[tuple[int, int, int]] = []
        branched: list[tuple[int, int, int]] = []
        for mode, _, node in slots:
            eta = angles[level][node]
            if eta == _HALF_PI:
                skipped.append((stage, node))
                survivors.append((mode, level, 2 * node))
            else:
                emitted.append(BeamSplitter(eta, (mode, next_mode)))
                survivors.append((mode, level, 2 * node + 1))
                branched.append((next_mode, level, 2 * node))
                next_mode += 1
        layers.append(emitted)
        slots = sorted(survivors + branched)

    permutation = [-1] * n_modes
    used = set()
    for mode, _, leaf in slots:
        if leaf < n_modes:
            permutation[leaf] = mode
            used.add(mode)
    spare = (m for m in range(n_modes) if m not in used)
    for j in range(n_modes):
        if permutation[j] < 0:
            permutation[j] = next(spare)
    return MeshPlan(n_modes, layers, skipped, permutation)


def compose_unitary(elements, modes: int | None = None) -> np.ndarray:
    """Mode unitary of an element sequence applied in execution order.

    Accepts a :class:`MeshPlan` or an iterable of BeamSplitter /
    PhaseShifterLayer; each element embeds as identity outside its block.
    """
    if isinstance(elements, MeshPlan):
        modes = elements.modes
        sequence = list(elements.elements())
    else:
        sequence = list(elements)
        if modes is None:
            raise ValueError("mode count required for a bare element sequence")
    u = np.eye(modes, dtype=complex)
    for element in sequence:
        if isinstance(element, BeamSplitter):
            i, j = element.modes
            if not (0 <= i < modes and 0 <= j < modes):
                raise ValueError(f"beam splitter modes {element.modes} out of range")
            step = np.eye(modes, dtype=complex)
            block = element.matrix2()
            step[i, i], step[i, j] = block[0, 0], block[0, 1]
            step[j, i], step[j, j] = block[1, 0], block[1, 1]
        elif isinstance(element, PhaseShifterLayer):
            if len(element.phases) != modes:
                raise ValueError("phase layer size must match the mode count")
            step = np.diag(np.exp(1j * element.phases))
        else:
            raise TypeError(f"unsupported optical element {type(element).__name__}")
        u = step @ u
    deviation = np.max(np.abs(u.conj().T @ u - np.eye(modes)))
    if deviation > 1e-10:
        raise RuntimeError(f"composed matrix drifted off unitary by {deviation:.2e}")
    return u


def uniform_mesh(n_modes: int) -> MeshPlan:
    """Mesh whose first column is 1/sqrt(N) everywhere (balanced fan-out)."""
    if n_modes < 2:
        raise ValueError("a multiport needs at least 2 modes")
    return mesh_synthesize(np.full(n_modes, 1.0 / math.sqrt(n_modes)))


def uniform_md(n_modes: int) -> np.ndarray:
    """Mode unitary of the balanced multiport; column 0 is real positive 1/sqrt(N)."""
    return compose_unitary(uniform_mesh(n_modes))


def simulate_photon(u: np.ndarray, amplitudes) -> np.ndarray:
    """Evolve single-photon amplitudes through a mode unitary."""
    state = np.asarray(amplitudes, dtype=complex)
    if u.shape != (len(state), len(state)):
        raise ValueError(f"dimension mismatch: matrix {u.shape}, state {state.shape}")
    return u @ state


@dataclass
class OpticalNeuronCircuit:
    """Balanced multiport, merged phase layer, conjugate multiport, detection.

    The phase layer is stored in qmode order, already routed through the
    mesh's mode permutation.
    """

    mesh: MeshPlan
    phase_layer: np.ndarray

    @property
    def modes(self) -> int:
        return self.mesh.modes

    @property
    def num_beam_splitters(self) -> int:
        return 2 * self.mesh.num_elements

    @property
    def num_phase_shifters(self) -> int:
        return self.modes


def _angle_pair(theta, phi) -> tuple[np.ndarray, np.ndarray]:
    t = np.asarray(theta, dtype=float)
    p = np.asarray(phi, dtype=float)
    if t.shape != p.shape:
        raise ValueError(f"dimension mismatch: {t.shape} vs {p.shape}")
    if t.ndim != 1 or len(t) < 2:
        raise ValueError("need at least 2 components")
    return t, p


def build_neuron_optical_circuit(theta, phi) -> OpticalNeuronCircuit:
    t, p = _angle_pair(theta, phi)
    mesh = uniform_mesh(len(t))
    phases = np.zeros(len(t))
    for j, delta in enumerate(t - p):
        phases[mesh.mode_permutation[j]] = delta
    return OpticalNeuronCircuit(mesh, phases)


def neuron_optical(theta, phi, trace: bool = False):
    """Single-photon probability at mode 0 after the full optical pipeline.

    Fan out from mode 0, imprint the merged phases, fan back in, detect.
    With ``trace=True`` also returns the four staged states.
    """
    circuit = build_neuron_optical_circuit(theta, phi)
    u = compose_unitary(circuit.mesh)
    g1 = np.zeros(circuit.modes, dtype=complex)
    g1[0] = 1.0
    g2 = simulate_photon(u, g1)
    g3 = np.exp(1j * circuit.phase_layer) * g2
    g4 = simulate_photon(u.conj().T, g3)
    probability = float(abs(g4[0]) ** 2)
    if trace:
        return probability, [g1, g2, g3, g4]
    return probability


def mode_probabilities(theta, phi) -> np.ndarray:
    """Per-mode single-photon probabilities at the detectors."""
    _, stages = neuron_optical(theta, phi, trace=True)
    return np.abs(stages[-1]) ** 2


def optical_cost_metrics(circuit: OpticalNeuronCircuit) -> CostMetrics:
    """Optical costs: splitter count, sequential layer depth, log2 width.

    Depth counts each mesh layer once, the merged phase layer once, and the
    detection layer once: 2 * (ceil(log2 N) + 1).  Width is log2 of the
    mode count (real-valued).  Phase shifters are reported separately on
    the circuit, not in the size.
    """
    n_modes = circuit.modes
    n_layers = max((n_modes - 1).bit_length(), 1)  # ceil(log2 N)
    return CostMetrics(
        size=circuit.num_beam_splitters,
        depth=2 * (n_layers + 1),
        width=math.log2(n_modes),
    )


def mesh_to_dict(plan: MeshPlan, phase_layer=None) -> dict:
    """JSON form: {"modes", "layers", "phase_layer", "permutation"}."""
    phases = np.zeros(plan.modes) if phase_layer is None else np.asarray(phase_layer, float)
    return {
        "modes": plan.modes,
        "layers": [
            [{"eta": bs.eta, "xi": bs.xi, "modes": list(bs.modes)} for bs in layer]
            for layer in plan.layers
        ],
        "phase_layer": [float(v) for v in phases],
        "permutation": list(plan.mode_permutation),
    }


def mesh_from_dict(data: dict) -> tuple[MeshPlan, np.ndarray]:
    layers = [
        [BeamSplitter(entry["eta"], tuple(entry["modes"]), entry.get("xi", 0.0)) for entry in layer]
        for layer in data["layers"]
    ]
    plan = MeshPlan(data["modes"], layers, [], list(data["permutation"]))
    return plan, np.asarray(data["phase_layer"], dtype=float)
