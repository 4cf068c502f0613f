"""Phase-encoded quantum neuron toolkit.

Builds executable circuits for the phase-encoded neuron in two backends —
a qubit gate model and a linear-optical single-photon model — verifies both
against the analytic fidelity, and reports circuit-cost metrics.
"""

from .circuits import (
    CostMetrics,
    Gate,
    QubitCircuit,
    cost_metrics,
    export_text,
    parse_text,
    unitary_of,
)
from .diagonal import (
    GRAY,
    HADAMARD,
    AngleSolution,
    build_M,
    cancel_adjacent_cnots,
    fwht,
    gray_code,
    merged_diagonal,
    solve_alpha,
    synth_alg1,
    synth_alg2,
)
from .encoding import (
    RescaleResult,
    analytic_fidelity,
    fidelity_cosine_expansion,
    pad_to_qubit_dim,
    qubit_dim,
    rescale,
)
from .neuron import BACKENDS, BackendResult, NeuronReport, evaluate
from .optical import (
    BeamSplitter,
    MeshPlan,
    OpticalNeuronCircuit,
    PhaseShifterLayer,
    build_neuron_optical_circuit,
    compose_unitary,
    mesh_from_dict,
    mesh_synthesize,
    mesh_to_dict,
    neuron_optical,
    optical_cost_metrics,
    simulate_photon,
    uniform_md,
    uniform_mesh,
)
from .simulator import (
    ANCILLA,
    MEASURE_ALL,
    Histogram,
    MeasurementOutcome,
    build_neuron_circuit,
    neuron_qubit,
    run,
    sample,
    zero_state,
)

__version__ = "0.1.0"
