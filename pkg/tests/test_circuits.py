"""Tests for the gate IR: dense unitaries, cost metrics, text round-trip."""
import math

import numpy as np
import pytest

from qneuron import Gate, QubitCircuit, cost_metrics, export_text, parse_text, unitary_of
from qneuron.circuits import cx, gphase, h, mcx, rz, x

PI = math.pi


def random_circuit(rng, num_wires, num_gates):
    kinds = ["h", "x", "rz", "gphase"]
    if num_wires >= 2:
        kinds.append("cx")
    if num_wires >= 3:
        kinds.append("mcx")
    c = QubitCircuit(num_wires)
    for _ in range(num_gates):
        kind = rng.choice(kinds)
        if kind in ("h", "x"):
            c.append(Gate(kind, (int(rng.integers(num_wires)),)))
        elif kind == "rz":
            c.rz(float(rng.uniform(-2 * PI, 2 * PI)), int(rng.integers(num_wires)))
        elif kind == "gphase":
            c.gphase(float(rng.uniform(-2 * PI, 2 * PI)))
        elif kind == "cx":
            a, b = rng.choice(num_wires, size=2, replace=False)
            c.cx(int(a), int(b))
        else:
            a, b, t = rng.choice(num_wires, size=3, replace=False)
            c.mcx((int(a), int(b)), int(t))
    return c


# --- unitary extraction ---

def test_empty_circuit_is_identity():
    assert np.allclose(unitary_of(QubitCircuit(1)), np.eye(2))


def test_single_hadamard():
    u = unitary_of(QubitCircuit(1).h(0))
    assert np.allclose(u, np.array([[1, 1], [1, -1]]) / math.sqrt(2))


def test_rz_matrix():
    omega = 0.7321
    u = unitary_of(QubitCircuit(1).rz(omega, 0))
    assert np.allclose(u, np.diag([np.exp(-1j * omega / 2), np.exp(1j * omega / 2)]))


def test_wire_zero_is_least_significant():
    # X on wire 0 of a 2-wire register swaps |00> and |01> (indices 0, 1)
    u = unitary_of(QubitCircuit(2).x(0))
    state = u @ np.array([1, 0, 0, 0], dtype=complex)
    assert np.allclose(state, [0, 1, 0, 0])


def test_cx_flips_target_when_control_set():
    u = unitary_of(QubitCircuit(2).cx(0, 1))
    basis = np.eye(4)
    assert np.allclose(u @ basis[1], basis[3])  # |01> -> |11>
    assert np.allclose(u @ basis[0], basis[0])


def test_mcx_requires_all_controls():
    u = unitary_of(QubitCircuit(3).mcx((0, 1), 2))
    basis = np.eye(8)
    assert np.allclose(u @ basis[3], basis[7])  # |011> -> |111>
    assert np.allclose(u @ basis[1], basis[1])


def test_global_phase_scales_everything():
    u = unitary_of(QubitCircuit(2).gphase(0.5))
    assert np.allclose(u, np.exp(0.5j) * np.eye(4))


def test_random_circuits_are_unitary():
    rng = np.random.default_rng(10)
    for _ in range(30):
        w = int(rng.integers(1, 7))
        u = unitary_of(random_circuit(rng, w, int(rng.integers(1, 25))))
        assert np.max(np.abs(u.conj().T @ u - np.eye(1 << w))) < 1e-10


def test_composition_order():
    rng = np.random.default_rng(11)
    for _ in range(20):
        w = int(rng.integers(1, 5))
        a = random_circuit(rng, w, int(rng.integers(1, 12)))
        b = random_circuit(rng, w, int(rng.integers(1, 12)))
        combined = QubitCircuit(w, list(a.gates) + list(b.gates))
        assert np.max(np.abs(unitary_of(combined) - unitary_of(b) @ unitary_of(a))) < 1e-12


def test_dense_limit_enforced():
    with pytest.raises(ValueError):
        unitary_of(QubitCircuit(13))


# --- cost metrics ---

def test_empty_costs():
    m = cost_metrics(QubitCircuit(3))
    assert (m.size, m.depth, m.width) == (0, 0, 3)


def test_depth_bounded_by_size_and_serial_case():
    rng = np.random.default_rng(12)
    for _ in range(20):
        w = int(rng.integers(1, 6))
        c = random_circuit(rng, w, int(rng.integers(1, 30)))
        m = cost_metrics(c)
        assert m.depth <= m.size
    # every gate on one wire: depth equals gate count
    c = QubitCircuit(1)
    for _ in range(9):
        c.h(0)
    m = cost_metrics(c)
    assert m.depth == m.size == 9


def test_global_phase_counting_modes():
    c = QubitCircuit(2).h(0).gphase(1.0).cx(0, 1)
    assert cost_metrics(c).size == 2
    assert cost_metrics(c, paper_count=True).size == 3
    # depth ignores the phase in both modes
    assert cost_metrics(c).depth == cost_metrics(c, paper_count=True).depth == 2


def test_mcx_counting_modes():
    c = QubitCircuit(3).h(0).mcx((0, 1), 2)
    assert cost_metrics(c).size == 2
    assert cost_metrics(c, paper_count=True).size == 1
    assert cost_metrics(c).depth == 2


# --- text format ---

def test_export_single_gates():
    assert export_text(QubitCircuit(1).h(0)).splitlines() == ["h q0"]
    assert export_text(QubitCircuit(2).x(1)).splitlines() == ["x q1"]
    assert export_text(QubitCircuit(3).cx(0, 2)).splitlines() == ["cx q0 q2"]
    assert export_text(QubitCircuit(3).mcx((0, 1), 2)).splitlines() == ["mcx q0,q1 q2"]


def test_export_rz_seventeen_significant_digits():
    line = export_text(QubitCircuit(3).rz(-PI / 4, 2)).splitlines()[0]
    assert line == "rz(-0.78539816339744828) q2"


def test_round_trip_random_circuits():
    rng = np.random.default_rng(13)
    for _ in range(50):
        w = int(rng.integers(1, 8))
        c = random_circuit(rng, w, int(rng.integers(0, 40)))
        parsed = parse_text(export_text(c), num_wires=w)
        assert parsed.gates == c.gates


def test_parse_infers_width():
    c = parse_text("h q0\ncx q1 q4\n")
    assert c.num_wires == 5


def test_parse_rejects_garbage():
    with pytest.raises(ValueError):
        parse_text("hadamard q0")
    with pytest.raises(ValueError):
        parse_text("rz() q0")


# --- gate validation ---

def test_gate_invariants():
    with pytest.raises(ValueError):
        cx(1, 1)
    with pytest.raises(ValueError):
        mcx((0, 1), 1)
    with pytest.raises(ValueError):
        rz(float("nan"), 0)
    with pytest.raises(ValueError):
        Gate("h", (0, 1))
    with pytest.raises(ValueError):
        QubitCircuit(1).cx(0, 1)
