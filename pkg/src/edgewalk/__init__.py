"""Interferometric (edge-state) discrete-time quantum walks on graphs."""

__version__ = "0.1.0"

from .graph import (
    DirectedEdgeState,
    Graph,
    GraphError,
    LocalUnitary,
    PortPhase,
    beam_splitter_unitary,
    build_graph,
    cycle_graph,
    grover_unitary,
    path_graph,
    tritter_unitary,
    validate_unitary,
)
from .walk import (
    ContractViolation,
    Distribution,
    StepOperator,
    WalkState,
    apply_step,
    basis_state,
    build_step_operator,
    edge_probabilities,
    evolve,
    ring_step_operator,
    simulate_line,
    time_averaged_distribution,
    vertex_probabilities,
)

__all__ = [
    "ContractViolation", "DirectedEdgeState", "Distribution", "Graph", "GraphError",
    "LocalUnitary", "PortPhase", "StepOperator", "WalkState", "apply_step", "basis_state",
    "beam_splitter_unitary", "build_graph", "build_step_operator", "cycle_graph",
    "edge_probabilities", "evolve", "grover_unitary", "path_graph", "ring_step_operator",
    "simulate_line", "time_averaged_distribution", "tritter_unitary", "validate_unitary",
    "vertex_probabilities",
]
