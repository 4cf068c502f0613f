"""Synthesis of diagonal phase operators diag(e^{i beta_k}) from {RZ, CNOT}.

Two constructions are provided.  The Gray-walk form (``synth_alg1``) uses
one ancilla wire: a CNOT walk steps the ancilla's parity along the
reflected Gray sequence while rotations on the ancilla accumulate the
phases; the closing wrap-around CNOT returns the ancilla to |0> exactly.
The Hadamard form (``synth_alg2``) needs no ancilla: every nonzero bit mask
q contributes a parity-phase term, realized as an RZ on the mask's most
significant wire conjugated by CNOTs from its other set wires, and the
constant term is a global phase.

Rotation parameters solve the linear relation beta = M alpha where M is the
Gray-indexed or plain sign matrix (``build_M``).  Both systems are inverted
by a fast Walsh-Hadamard transform; tests pin the fast path to a dense
solve.  Sign convention, frozen after calibration against ``unitary_of``:
entry alpha_t contributes RZ(-2 alpha_t / 2^n) on the ancilla in the Gray
walk, RZ(-2 alpha_q / 2^(n-1)) on mask q's target wire in the Hadamard
form, and a global phase of alpha_0 / 2^(n-1) for the constant term.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .circuits import Gate, QubitCircuit, cx, gphase, rz

__all__ = [
    "GRAY",
    "HADAMARD",
    "AngleSolution",
    "gray_code",
    "fwht",
    "build_M",
    "solve_alpha",
    "merged_diagonal",
    "synth_alg1",
    "synth_alg2",
    "cancel_adjacent_cnots",
]

GRAY = "gray"
HADAMARD = "hadamard"

#: build_M refuses larger registers (dense 2^n x 2^n matrix)
MATRIX_WIRE_LIMIT = 12


def gray_code(t: int) -> int:
    """Reflected Gray code of t: t XOR (t >> 1)."""
    if t < 0:
        raise ValueError("Gray code is defined for nonnegative integers")
    return t ^ (t >> 1)


def _diff_bit(a: int, b: int) -> int:
    """Position of the single bit in which a and b differ."""
    return (a ^ b).bit_length() - 1


def _power_of_two_len(beta) -> tuple[np.ndarray, int]:
    b = np.asarray(beta, dtype=float)
    if b.ndim != 1 or len(b) < 2 or len(b) & (len(b) - 1):
        raise ValueError(f"phase vector length must be a power of two >= 2, got {b.shape}")
    if not np.all(np.isfinite(b)):
        raise ValueError("phases must be finite")
    return b, len(b).bit_length() - 1


def fwht(values) -> np.ndarray:
    """Unnormalized fast Walsh-Hadamard transform (sign matrix (-1)^{s.t})."""
    a = np.array(values, dtype=float)
    half = 1
    while half < len(a):
        for start in range(0, len(a), 2 * half):
            top = a[start : start + half].copy()
            bottom = a[start + half : start + 2 * half].copy()
            a[start : start + half] = top + bottom
            a[start + half : start + 2 * half] = top - bottom
        half *= 2
    return a


def build_M(kind: str, n: int) -> np.ndarray:
    """Dense solve matrix: entries (-1)^(b_s . g_t)/2^n (gray) or
    (-1)^(b_s . b_t)/2^(n-1) (hadamard), with the dot a bitwise parity."""
    if kind not in (GRAY, HADAMARD):
        raise ValueError(f"unknown matrix kind {kind!r}")
    if not 1 <= n <= MATRIX_WIRE_LIMIT:
        raise ValueError(f"n must be in [1, {MATRIX_WIRE_LIMIT}], got {n}")
    dim = 1 << n
    cols = np.arange(dim)
    if kind == GRAY:
        cols = cols ^ (cols >> 1)
    masked = np.arange(dim)[:, None] & cols[None, :]
    parity = np.zeros_like(masked)
    while masked.any():
        parity ^= masked & 1
        masked >>= 1
    signs = 1.0 - 2.0 * parity
    return signs / (dim if kind == GRAY else dim / 2)


@dataclass(frozen=True)
class AngleSolution:
    """Rotation parameters alpha with the matrix kind they solve against."""

    alpha: np.ndarray
    matrix_id: str


def solve_alpha(beta, kind: str) -> AngleSolution:
    """Solve beta = M alpha by fast transform.

    The gray solution is the transform permuted by the Gray sequence; the
    hadamard solution is the transform halved.
    """
    if kind not in (GRAY, HADAMARD):
        raise ValueError(f"unknown matrix kind {kind!r}")
    b, _ = _power_of_two_len(beta)
    spectrum = fwht(b)
    if kind == HADAMARD:
        return AngleSolution(spectrum / 2.0, HADAMARD)
    order = np.arange(len(b))
    return AngleSolution(spectrum[order ^ (order >> 1)], GRAY)


def merged_diagonal(theta, phi) -> np.ndarray:
    """Per-entry phase difference theta - phi for the combined diagonal."""
    t = np.asarray(theta, dtype=float)
    p = np.asarray(phi, dtype=float)
    if t.shape != p.shape:
        raise ValueError(f"dimension mismatch: {t.shape} vs {p.shape}")
    beta, _ = _power_of_two_len(t - p)
    return beta


def synth_alg1(beta) -> QubitCircuit:
    """Gray-walk synthesis over n data wires plus an ancilla at index n.

    Emits 2^n rotations on the ancilla interleaved with 2^n CNOTs whose
    control sits at the bit where consecutive Gray codes differ; the final
    CNOT wraps the cycle so the ancilla parity (hence the ancilla itself)
    returns to zero.
    """
    b, n = _power_of_two_len(beta)
    dim = 1 << n
    alpha = solve_alpha(b, GRAY).alpha
    omega = -2.0 * alpha / dim
    ancilla = n
    circuit = QubitCircuit(n + 1, metadata=f"diag-gray(n={n})")
    for t in range(dim):
        circuit.append(rz(omega[t], ancilla))
        control = _diff_bit(gray_code(t), gray_code((t + 1) % dim))
        circuit.append(cx(control, ancilla))
    return circuit


def synth_alg2(beta, optimize: bool = True, mean_phase: bool = True) -> QubitCircuit:
    """Hadamard-form synthesis over n data wires, no ancilla.

    Each nonzero mask q becomes one rotation on its most significant set
    wire; with ``optimize`` the masks walk in reflected-Gray order inside
    each leading-wire group, so mirrored CNOTs cancel and the block needs
    exactly 2^n - 1 rotations and 2^n - 2 CNOTs, emitted in an order packed
    for low DAG depth.  Without ``optimize`` every mask is synthesized
    independently with its CNOT conjugation written out on both sides.
    ``mean_phase`` keeps the constant term as an explicit global-phase
    node; dropping it leaves the result correct up to a global phase.
    """
    b, n = _power_of_two_len(beta)
    gamma = solve_alpha(b, HADAMARD).alpha / (1 << (n - 1))
    circuit = QubitCircuit(n, metadata=f"diag-hadamard(n={n})")
    if mean_phase:
        circuit.append(gphase(gamma[0]))
    if optimize:
        for spec, mask in _schedule(n):
            if mask is not None:
                circuit.append(rz(-2.0 * gamma[mask], spec))
            else:
                circuit.append(cx(spec[0], spec[1]))
    else:
        for q in range(1, 1 << n):
            top = q.bit_length() - 1
            others = [bit for bit in range(top) if (q >> bit) & 1]
            for c in others:
                circuit.append(cx(c, top))
            circuit.append(rz(-2.0 * gamma[q], top))
            for c in reversed(others):
                circuit.append(cx(c, top))
    return circuit


def _group_gates(m: int):
    """Dirty segment of group m (everything after the group's plain rotation)."""
    seg = []
    for j in range(1, 1 << m):
        seg.append((( _diff_bit(gray_code(j - 1), gray_code(j)), m), None))
        seg.append((m, (1 << m) + gray_code(j)))
    if m >= 1:
        seg.append(((m - 1, m), None))
    return seg


def _gate_wires(gate) -> tuple[int, ...]:
    spec, mask = gate
    return (spec,) if mask is not None else spec


def _schedule(n: int):
    """Gate specs for the optimized construction, in depth-packed order.

    Yields (wire, mask) for rotations and ((control, target), None) for
    CNOTs.  Group m covers masks [2^m, 2^(m+1)) in reflected-Gray order:
    one differential CNOT per step plus a single cleanup CNOT (the
    accumulated walk parity gray(2^m - 1) has exactly one set bit).  The
    widest group's chain runs stall-free on wire n-1; smaller groups' dirty
    segments (CNOT-bracketed stretches during which their wire holds a walk
    parity) are slotted into windows free of reads by wider groups.  Cycle
    1 is left open for a preceding single-qubit layer.
    """
    if n == 1:
        return [(0, 1)]
    busy: dict[int, set[int]] = {w: set() for w in range(n)}
    reads: dict[int, set[int]] = {w: set() for w in range(n)}
    placed: list[tuple[int, int, tuple]] = []

    def occupy(cycle: int, gate) -> None:
        for w in _gate_wires(gate):
            busy[w].add(cycle)
        spec, mask = gate
        if mask is None:
            reads[spec[0]].add(cycle)
        placed.append((cycle, len(placed), gate))

    top = n - 1
    cycle = 2
    occupy(cycle, (top, 1 << top))
    for j in range(1, 1 << top):
        cycle += 1
        occupy(cycle, ((_diff_bit(gray_code(j - 1), gray_code(j)), top), None))
        cycle += 1
        occupy(cycle, (top, (1 << top) + gray_code(j)))
    cycle += 1
    occupy(cycle, ((top - 1, top), None))

    for m in range(n - 2, -1, -1):
        segment = _group_gates(m)
        window_cycles: list[int] = []
        if segment:
            window_cycles = _fit_segment(segment, sorted(reads[m]), busy)
            for c, gate in zip(window_cycles, segment):
                occupy(c, gate)
        seg_start = min(window_cycles, default=None)
        seg_end = max(window_cycles, default=None)
        t = 2
        while True:
            inside = seg_start is not None and seg_start <= t <= seg_end
            if t not in busy[m] and not inside:
                occupy(t, (m, 1 << m))
                break
            t += 1
    placed.sort(key=lambda item: (item[0], item[1]))
    return [gate for _, _, gate in placed]


def _fit_segment(segment, read_cycles, busy) -> list[int]:
    """Cycles for a dirty segment inside the first window clear of reads."""
    windows: list[tuple[int, int | None]] = []
    edges = [2] + [c + 1 for c in read_cycles]
    limits = [c - 1 for c in read_cycles] + [None]
    for lo, hi in zip(edges, limits):
        if hi is None or lo <= hi:
            windows.append((lo, hi))
    for lo, hi in windows:
        cycles = []
        taken: dict[int, set[int]] = {}
        t = lo
        feasible = True
        for gate in segment:
            wires = _gate_wires(gate)
            while True:
                if hi is not None and t > hi:
                    feasible = False
                    break
                if all(t not in busy[w] and t not in taken.get(w, ()) for w in wires):
                    break
                t += 1
            if not feasible:
                break
            cycles.append(t)
            for w in wires:
                taken.setdefault(w, set()).add(t)
            t += 1
        if feasible:
            return cycles
    raise RuntimeError("unbounded window always fits")  # pragma: no cover


def cancel_adjacent_cnots(circuit: QubitCircuit) -> QubitCircuit:
    """Peephole pass: drop adjacent identical CNOT pairs until none remain."""
    gates = list(circuit.gates)
    changed = True
    while changed:
        changed = False
        out: list[Gate] = []
        i = 0
        while i < len(gates):
            gate = gates[i]
            if (
                i + 1 < len(gates)
                and gate.kind == "cx"
                and gates[i + 1].kind == "cx"
                and gate.wires == gates[i + 1].wires
            ):
                i += 2
                changed = True
                continue
            out.append(gate)
            i += 1
        gates = out
    return QubitCircuit(circuit.num_wires, gates, metadata=circuit.metadata)
