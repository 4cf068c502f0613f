"""End-to-end evaluation of one (input, weight) pair across the analytic
oracle and every circuit backend, with a serializable comparison report.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .circuits import CostMetrics, cost_metrics
from .diagonal import GRAY, HADAMARD
from .encoding import analytic_fidelity, pad_to_qubit_dim, qubit_dim
from .optical import build_neuron_optical_circuit, neuron_optical, optical_cost_metrics
from .simulator import ANCILLA, build_neuron_circuit, outcome_from_state, run

__all__ = ["BACKENDS", "BackendResult", "NeuronReport", "evaluate"]

BACKENDS = ("qubit-gray", "qubit-hadamard", "optical")


@dataclass(frozen=True)
class BackendResult:
    """One backend's output probability, circuit costs, and its own oracle value."""

    probability: float
    cost: CostMetrics
    reference: float

    @property
    def deviation(self) -> float:
        return abs(self.probability - self.reference)

    def to_dict(self) -> dict:
        return {
            "probability": self.probability,
            "cost": self.cost.to_dict(),
            "reference": self.reference,
        }

    @staticmethod
    def from_dict(data: dict) -> "BackendResult":
        cost = data["cost"]
        return BackendResult(
            data["probability"],
            CostMetrics(cost["size"], cost["depth"], cost["width"]),
            data["reference"],
        )


@dataclass
class NeuronReport:
    """Comparison of the analytic fidelity with every requested backend.

    The qubit backends consume zero-padded vectors when the dimension is
    not a power of two; their oracle is then the fidelity of the padded
    pair, reported alongside the unpadded value the optical backend meets.
    """

    theta: list[float]
    phi: list[float]
    dimension: int
    padded_dimension: int | None
    analytic: float
    analytic_padded: float | None
    results: dict[str, BackendResult]
    max_deviation: float

    def to_dict(self) -> dict:
        return {
            "theta": self.theta,
            "phi": self.phi,
            "dimension": self.dimension,
            "padded_dimension": self.padded_dimension,
            "analytic": self.analytic,
            "analytic_padded": self.analytic_padded,
            "results": {name: res.to_dict() for name, res in self.results.items()},
            "max_deviation": self.max_deviation,
        }

    @staticmethod
    def from_dict(data: dict) -> "NeuronReport":
        return NeuronReport(
            theta=list(data["theta"]),
            phi=list(data["phi"]),
            dimension=data["dimension"],
            padded_dimension=data["padded_dimension"],
            analytic=data["analytic"],
            analytic_padded=data["analytic_padded"],
            results={
                name: BackendResult.from_dict(res) for name, res in data["results"].items()
            },
            max_deviation=data["max_deviation"],
        )


def evaluate(
    theta,
    phi,
    backends=BACKENDS,
    strategy: str = ANCILLA,
    paper_count: bool = False,
) -> NeuronReport:
    """Run one (theta, phi) pair through the selected backends.

    Angles are radians.  Qubit backends receive both vectors padded with
    matched zero phases to the next power-of-two dimension (a padded slot
    agrees in both states, so it only rescales the overlap); the optical
    backend consumes the vectors as given.
    """
    t = np.asarray(theta, dtype=float)
    p = np.asarray(phi, dtype=float)
    if t.ndim != 1 or t.size == 0:
        raise ValueError("input vector must be a nonempty one-dimensional sequence")
    if t.shape != p.shape:
        raise ValueError(f"dimension mismatch: {t.shape} vs {p.shape}")
    if len(t) < 2:
        raise ValueError("need at least 2 components (one data qubit / two qmodes)")
    unknown = set(backends) - set(BACKENDS)
    if unknown:
        raise ValueError(f"unknown backends: {sorted(unknown)}")

    n_raw = len(t)
    padded = qubit_dim(n_raw) != n_raw
    analytic = analytic_fidelity(t, p)
    analytic_padded = None
    t_pad, p_pad = t, p
    if padded:
        t_pad, p_pad = pad_to_qubit_dim(t), pad_to_qubit_dim(p)
        analytic_padded = analytic_fidelity(t_pad, p_pad)

    results: dict[str, BackendResult] = {}
    for name in backends:
        if name == "optical":
            probability = neuron_optical(t, p)
            cost = optical_cost_metrics(build_neuron_optical_circuit(t, p))
            reference = analytic
        else:
            algorithm = GRAY if name == "qubit-gray" else HADAMARD
            circuit = build_neuron_circuit(t_pad, p_pad, algorithm, strategy)
            n = len(t_pad).bit_length() - 1
            probability = outcome_from_state(run(circuit), n, strategy).p1
            cost = cost_metrics(circuit, paper_count=paper_count)
            reference = analytic_padded if padded else analytic
        results[name] = BackendResult(probability, cost, reference)

    max_deviation = max((res.deviation for res in results.values()), default=0.0)
    return NeuronReport(
        theta=[float(v) for v in t],
        phi=[float(v) for v in p],
        dimension=n_raw,
        padded_dimension=len(t_pad) if padded else None,
        analytic=analytic,
        analytic_padded=analytic_padded,
        results=results,
        max_deviation=max_deviation,
    )
