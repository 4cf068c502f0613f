"""Gate-level circuit IR: construction, dense unitaries, cost metrics, and a
line-based text format.

Wire 0 is the least significant bit of a computational-basis index, so basis
state k assigns bit (k >> w) & 1 to wire w.  The gate list is execution
order: the first gate acts first, and the circuit unitary is the product of
the gate matrices applied right to left.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "Gate",
    "QubitCircuit",
    "CostMetrics",
    "h",
    "x",
    "rz",
    "cx",
    "mcx",
    "gphase",
    "unitary_of",
    "cost_metrics",
    "export_text",
    "parse_text",
    "DENSE_WIRE_LIMIT",
]

GATE_KINDS = ("h", "x", "rz", "cx", "mcx", "gphase")

#: dense-matrix extraction refuses wider circuits
DENSE_WIRE_LIMIT = 12

_SQRT1_2 = 1.0 / math.sqrt(2.0)
_H_MATRIX = np.array([[_SQRT1_2, _SQRT1_2], [_SQRT1_2, -_SQRT1_2]], dtype=complex)
_X_MATRIX = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)


@dataclass(frozen=True)
class Gate:
    """One circuit operation.

    ``wires`` holds (control..., target) for cx/mcx, a single wire for
    h/x/rz, and is empty for gphase.  ``angle`` is the rz rotation or the
    global-phase value, in radians.
    """

    kind: str
    wires: tuple[int, ...] = ()
    angle: float = 0.0

    def __post_init__(self):
        if self.kind not in GATE_KINDS:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        arity = {"h": 1, "x": 1, "rz": 1, "gphase": 0, "cx": 2}.get(self.kind)
        if arity is not None and len(self.wires) != arity:
            raise ValueError(f"{self.kind} takes {arity} wire(s), got {len(self.wires)}")
        if self.kind == "mcx" and len(self.wires) < 2:
            raise ValueError("mcx needs at least one control and a target")
        if len(set(self.wires)) != len(self.wires):
            raise ValueError("gate wires must be distinct")
        if any(w < 0 for w in self.wires):
            raise ValueError("wire indices must be nonnegative")
        if not math.isfinite(self.angle):
            raise ValueError("gate angle must be finite")

    @property
    def controls(self) -> tuple[int, ...]:
        return self.wires[:-1]

    @property
    def target(self) -> int:
        return self.wires[-1]


def h(wire: int) -> Gate:
    return Gate("h", (wire,))


def x(wire: int) -> Gate:
    return Gate("x", (wire,))


def rz(angle: float, wire: int) -> Gate:
    return Gate("rz", (wire,), float(angle))


def cx(control: int, target: int) -> Gate:
    return Gate("cx", (control, target))


def mcx(controls, target: int) -> Gate:
    return Gate("mcx", (*controls, target))


def gphase(angle: float) -> Gate:
    return Gate("gphase", (), float(angle))


@dataclass
class QubitCircuit:
    """Ordered gate list over ``num_wires`` wires; treat as frozen once built."""

    num_wires: int
    gates: list[Gate] = field(default_factory=list)
    metadata: str = field(default="", compare=False)

    def __post_init__(self):
        if self.num_wires < 1:
            raise ValueError("circuit needs at least one wire")
        for gate in self.gates:
            self._check(gate)

    def _check(self, gate: Gate) -> None:
        if any(w >= self.num_wires for w in gate.wires):
            raise ValueError(
                f"gate {gate.kind} touches wire {max(gate.wires)} "
                f"but the circuit has {self.num_wires} wires"
            )

    def append(self, gate: Gate) -> "QubitCircuit":
        self._check(gate)
        self.gates.append(gate)
        return self

    def extend(self, gates) -> "QubitCircuit":
        for gate in gates:
            self.append(gate)
        return self

    def h(self, wire: int) -> "QubitCircuit":
        return self.append(h(wire))

    def x(self, wire: int) -> "QubitCircuit":
        return self.append(x(wire))

    def rz(self, angle: float, wire: int) -> "QubitCircuit":
        return self.append(rz(angle, wire))

    def cx(self, control: int, target: int) -> "QubitCircuit":
        return self.append(cx(control, target))

    def mcx(self, controls, target: int) -> "QubitCircuit":
        return self.append(mcx(controls, target))

    def gphase(self, angle: float) -> "QubitCircuit":
        return self.append(gphase(angle))

    def __len__(self) -> int:
        return len(self.gates)


def _full_matrix(gate: Gate, num_wires: int) -> np.ndarray:
    dim = 1 << num_wires
    if gate.kind == "gphase":
        return np.exp(1j * gate.angle) * np.eye(dim, dtype=complex)
    if gate.kind in ("h", "x", "rz"):
        if gate.kind == "h":
            m = _H_MATRIX
        elif gate.kind == "x":
            m = _X_MATRIX
        else:
            half = gate.angle / 2.0
            m = np.diag([np.exp(-1j * half), np.exp(1j * half)])
        wire = gate.wires[0]
        hi = np.eye(1 << (num_wires - 1 - wire), dtype=complex)
        lo = np.eye(1 << wire, dtype=complex)
        return np.kron(hi, np.kron(m, lo))
    # cx / mcx: basis permutation flipping the target where all controls are set
    control_mask = 0
    for c in gate.controls:
        control_mask |= 1 << c
    target_bit = 1 << gate.target
    src = np.arange(dim)
    dst = np.where((src & control_mask) == control_mask, src ^ target_bit, src)
    u = np.zeros((dim, dim), dtype=complex)
    u[dst, src] = 1.0
    return u


def unitary_of(circuit: QubitCircuit) -> np.ndarray:
    """Dense unitary of the whole circuit (execution order, left to right)."""
    if circuit.num_wires > DENSE_WIRE_LIMIT:
        raise ValueError(
            f"dense unitary limited to {DENSE_WIRE_LIMIT} wires, got {circuit.num_wires}"
        )
    u = np.eye(1 << circuit.num_wires, dtype=complex)
    for gate in circuit.gates:
        u = _full_matrix(gate, circuit.num_wires) @ u
    return u


@dataclass(frozen=True)
class CostMetrics:
    """Gate count, DAG depth, and wire count of a circuit."""

    size: int
    depth: int
    width: int | float

    def to_dict(self) -> dict:
        return {"size": self.size, "depth": self.depth, "width": self.width}


def cost_metrics(circuit: QubitCircuit, paper_count: bool = False) -> CostMetrics:
    """Size, depth, and width of a circuit.

    Size counts every gate except the bookkeeping global phase; under
    ``paper_count`` the global phase counts as one rotation and
    multi-controlled gates are excluded instead.  Depth is the longest path
    when each gate occupies one time step on every wire it touches (a
    global phase touches none).  Width is the wire count.
    """
    size = 0
    for gate in circuit.gates:
        if gate.kind == "gphase":
            size += 1 if paper_count else 0
        elif gate.kind == "mcx":
            size += 0 if paper_count else 1
        else:
            size += 1
    free_at = [0] * circuit.num_wires
    for gate in circuit.gates:
        if not gate.wires:
            continue
        step = max(free_at[w] for w in gate.wires) + 1
        for w in gate.wires:
            free_at[w] = step
    depth = max(free_at, default=0)
    return CostMetrics(size, depth, circuit.num_wires)


# --- text format -----------------------------------------------------------
#
# One gate per line:  h q0 | x q1 | rz(<angle>) q2 | cx q0 q2 |
# mcx q0,q1 q2 | gphase(<angle>).  Angles print at 17 significant digits so
# the parse is bit-exact.

_LINE_PATTERNS = (
    ("h", re.compile(r"^h q(\d+)$")),
    ("x", re.compile(r"^x q(\d+)$")),
    ("rz", re.compile(r"^rz\(([^)]+)\) q(\d+)$")),
    ("cx", re.compile(r"^cx q(\d+) q(\d+)$")),
    ("mcx", re.compile(r"^mcx (q\d+(?:,q\d+)*) q(\d+)$")),
    ("gphase", re.compile(r"^gphase\(([^)]+)\)$")),
)


def export_text(circuit: QubitCircuit) -> str:
    """Render the circuit in the line format above (one gate per line)."""
    lines = []
    for gate in circuit.gates:
        if gate.kind in ("h", "x"):
            lines.append(f"{gate.kind} q{gate.wires[0]}")
        elif gate.kind == "rz":
            lines.append(f"rz({gate.angle:.17g}) q{gate.wires[0]}")
        elif gate.kind == "cx":
            lines.append(f"cx q{gate.wires[0]} q{gate.wires[1]}")
        elif gate.kind == "mcx":
            controls = ",".join(f"q{c}" for c in gate.controls)
            lines.append(f"mcx {controls} q{gate.target}")
        else:
            lines.append(f"gphase({gate.angle:.17g})")
    return "\n".join(lines) + ("\n" if lines else "")


def parse_text(text: str, num_wires: int | None = None) -> QubitCircuit:
    """Parse the text format back into a circuit.

    The wire count is inferred as one past the highest index unless given.
    Only the exact emitted subset is accepted.
    """
    gates: list[Gate] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        for kind, pattern in _LINE_PATTERNS:
            m = pattern.match(line)
            if not m:
                continue
            if kind in ("h", "x"):
                gates.append(Gate(kind, (int(m.group(1)),)))
            elif kind == "rz":
                gates.append(rz(float(m.group(1)), int(m.group(2))))
            elif kind == "cx":
                gates.append(cx(int(m.group(1)), int(m.group(2))))
            elif kind == "mcx":
                controls = tuple(int(tok[1:]) for tok in m.group(1).split(","))
                gates.append(mcx(controls, int(m.group(2))))
            else:
                gates.append(gphase(float(m.group(1))))
            break
        else:
            raise ValueError(f"line {lineno}: cannot parse {line!r}")
    if num_wires is None:
        num_wires = max((max(g.wires) for g in gates if g.wires), default=0) + 1
    return QubitCircuit(num_wires, gates, metadata="parsed")
