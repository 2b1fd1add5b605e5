"""Global step operator plus state evolution and the derived distributions."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Mapping, Sequence

import numpy as np
import scipy.sparse as sp

from .graph import (
    UNITARY_TOL,
    Graph,
    GraphError,
    LocalUnitary,
    PortPhase,
    beam_splitter_unitary,
    cycle_graph,
    mirror_unitary,
    validate_unitary,
)


class ContractViolation(RuntimeError):
    """A numeric invariant (norm, unitarity, flux...) failed during a run."""

    def __init__(self, invariant: str, detail: str = ""):
        self.invariant = invariant
        super().__init__(f"{invariant} violated" + (f": {detail}" if detail else ""))


@dataclass(frozen=True, eq=False)
class WalkState:
    """Complex amplitudes over the directed edge states of ``graph``."""

    graph: Graph
    amplitudes: np.ndarray

    def __post_init__(self):
        a = np.array(self.amplitudes, dtype=complex)
        if a.shape != (self.graph.state_count,):
            raise ValueError(f"expected {self.graph.state_count} amplitudes, got shape {a.shape}")
        a.setflags(write=False)
        object.__setattr__(self, "amplitudes", a)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def amplitude(self, tail: int, head: int) -> complex:
        return complex(self.amplitudes[self.graph.index_of_state((tail, head))])


def basis_state(graph: Graph, tail: int, head: int) -> WalkState:
    a = np.zeros(graph.state_count, dtype=complex)
    a[graph.index_of_state((tail, head))] = 1.0
    return WalkState(graph, a)


def uniform_state(graph: Graph) -> WalkState:
    """Equal-weight superposition of every directed edge state."""
    n = graph.state_count
    return WalkState(graph, np.full(n, 1 / np.sqrt(n), dtype=complex))


def normalized_state(graph: Graph, amplitudes) -> WalkState:
    a = np.asarray(amplitudes, dtype=complex)
    return WalkState(graph, a / np.linalg.norm(a))


@dataclass(frozen=True, eq=False)
class StepOperator:
    """One step of the walk as a sparse ``2E x 2E`` matrix (column = source state)."""

    graph: Graph
    matrix: sp.csr_matrix

    def transitions(self, source: int) -> list[tuple[int, complex]]:
        """``(target index, amplitude)`` pairs reached from ``source`` in one step."""
        col = self.matrix[:, source].tocoo()
        return sorted((int(i), complex(v)) for i, v in zip(col.row, col.data))

    def to_dense(self) -> np.ndarray:
        return self.matrix.toarray()


@dataclass(frozen=True, eq=False)
class Distribution:
    """Probabilities with their labels (edges as ``(u, v)``, vertices as ints)."""

    probabilities: np.ndarray
    labels: tuple

    def __post_init__(self):
        if len(self.probabilities) != len(self.labels):
            raise ValueError("one label per probability is required")

    def as_dict(self) -> dict:
        return dict(zip(self.labels, self.probabilities.tolist()))

    def total(self) -> float:
        return float(np.sum(self.probabilities))


def build_step_operator(
    graph: Graph,
    unitaries: Mapping[int, LocalUnitary],
    phases: Sequence[PortPhase] = (),
) -> StepOperator:
    """Assemble the global one-step unitary.

    Amplitude ``(u -> v) => (v -> w)`` is ``e^{i phi_in} U_v[port(v,w), port(v,u)] e^{i phi_out}``.
    Degree-1 vertices missing from ``unitaries`` act as mirrors.
    """
    port_phase = np.zeros((graph.vertex_count, max(map(len, graph.ports), default=0)))
    for p in phases:
        if not 0 <= p.vertex < graph.vertex_count or p.port >= graph.degree(p.vertex):
            raise GraphError(f"phase shifter at invalid port {p}")
        port_phase[p.vertex, p.port] += p.phi

    rows, cols, vals = [], [], []
    for v in range(graph.vertex_count):
        d = graph.degree(v)
        u_v = unitaries.get(v)
        if u_v is None:
            if d != 1:
                raise GraphError(f"no local unitary for vertex {v} (degree {d})")
            u_v = mirror_unitary()
        m = u_v.matrix if isinstance(u_v, LocalUnitary) else np.asarray(u_v, dtype=complex)
        if m.shape != (d, d):
            raise GraphError(f"vertex {v} has degree {d} but its unitary is {m.shape[0]}x{m.shape[1]}")
        if not validate_unitary(m, UNITARY_TOL):
            raise GraphError(f"local unitary at vertex {v} is not unitary")
        ph = np.exp(1j * port_phase[v, :d])
        local = ph[:, None] * m * ph[None, :]
        for p_in, u in enumerate(graph.ports[v]):
            src = graph.index_of_state((u, v))
            for p_out, w in enumerate(graph.ports[v]):
                amp = local[p_out, p_in]
                if amp != 0:
                    rows.append(graph.index_of_state((v, w)))
                    cols.append(src)
                    vals.append(amp)
    n = graph.state_count
    mat = sp.csr_matrix((vals, (rows, cols)), shape=(n, n), dtype=complex)
    return StepOperator(graph, mat)


def apply_step(op: StepOperator, s: WalkState) -> WalkState:
    if s.amplitudes.shape[0] != op.matrix.shape[1]:
        raise ValueError("state and operator dimensions differ")
    return WalkState(s.graph, op.matrix @ s.amplitudes)


def iter_states(op: StepOperator, s: WalkState, n: int) -> Iterator[tuple[int, np.ndarray]]:
    """Yield ``(step, amplitudes)`` for steps ``0..n`` without materializing states."""
    if s.amplitudes.shape[0] != op.matrix.shape[1]:
        raise ValueError("state and operator dimensions differ")
    a = s.amplitudes.copy()
    yield 0, a
    for k in range(1, n + 1):
        a = op.matrix @ a
        yield k, a


def evolve(op: StepOperator, s: WalkState, n: int) -> WalkState:
    if n < 0:
        raise ValueError("number of steps must be nonnegative")
    a = s.amplitudes
    for _, a in iter_states(op, s, n):
        pass
    return WalkState(s.graph, a)


def _edge_probs(a: np.ndarray) -> np.ndarray:
    sq = np.abs(a) ** 2
    return sq[0::2] + sq[1::2]


def edge_probabilities(s: WalkState) -> Distribution:
    return Distribution(_edge_probs(s.amplitudes), s.graph.edges)


def vertex_probabilities(s: WalkState) -> Distribution:
    """Probability of each vertex, summing states that point into it."""
    g = s.graph
    heads = np.array([g.edges[i // 2][1 - i % 2] for i in range(g.state_count)], dtype=int)
    p = np.bincount(heads, weights=np.abs(s.amplitudes) ** 2, minlength=g.vertex_count)
    return Distribution(p, tuple(range(g.vertex_count)))


def time_averaged_distribution(op: StepOperator, s: WalkState, m: int) -> Distribution:
    """Mean edge distribution over steps ``0..m-1`` (Kahan-compensated running sum)."""
    if m < 1:
        raise ValueError("m must be at least 1")
    total = np.zeros(len(s.graph.edges))
    comp = np.zeros_like(total)
    for k, a in iter_states(op, s, m - 1):
        y = _edge_probs(a) - comp
        t = total + y
        comp = (t - total) - y
        total = t
    return Distribution(total / m, s.graph.edges)


# -- rings and the embedded infinite line ----------------------------------


def ring_unitaries(graph: Graph, t: complex, r: complex) -> dict[int, LocalUnitary]:
    bs = beam_splitter_unitary(t, r)
    return {v: bs for v in range(graph.vertex_count)}


def even_edge_phases(n: int, phi: float) -> list[PortPhase]:
    """Shifters on every edge ``{j, j+1}`` with even ``j``, placed just before vertex ``j+1``.

    Only meaningful for even ``n``, so that parity is well defined around the ring.
    """
    if n % 2:
        raise GraphError("alternating phase shifters need an even ring")
    return [PortPhase(v, 0, phi) for v in range(1, n, 2)]


def ring_step_operator(
    n: int, t: complex, r: complex, phi: float = 0.0, alternating: bool = False
) -> StepOperator:
    g = cycle_graph(n)
    phases = even_edge_phases(n, phi) if alternating and phi != 0 else []
    return build_step_operator(g, ring_unitaries(g, t, r), phases)


def line_ring_size(steps: int) -> int:
    """Smallest even ring on which ``steps`` steps from ``|0,1>`` never wrap."""
    n = 2 * steps + 4
    return n + (n % 2)


def line_coordinate(a: int, n: int) -> int:
    """Map ring vertex ``a`` to the line coordinate in ``[-n/2, n/2)``."""
    return a if a < n // 2 else a - n


def line_edge_distribution(p_edges: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Reorder ring edge probabilities by line coordinate: ``(j, p(j, j+1))``."""
    n = len(p_edges)
    j = np.array([line_coordinate(a, n) for a in range(n)])
    order = np.argsort(j, kind="stable")
    return j[order], np.asarray(p_edges)[order]


def simulate_line(
    t: complex,
    r: complex,
    steps: int,
    phi: float = 0.0,
    n: int | None = None,
    record: Sequence[int] | None = None,
) -> dict[int, tuple[np.ndarray, np.ndarray]]:
    """Run the line walk from ``|0,1>`` and return edge distributions.

    The line is embedded in a ring large enough to avoid wrap-around.  ``phi``
    installs shifters on every second edge.  Returns ``{step: (j, p)}`` for
    each step in ``record`` (default: only the final step).
    """
    n = n or line_ring_size(steps)
    if n < 2 * steps + 4:
        raise ValueError(f"ring of {n} vertices is too small for {steps} steps")
    op = ring_step_operator(n, t, r, phi, alternating=phi != 0)
    wanted = set(record) if record is not None else {steps}
    out = {}
    for k, a in iter_states(op, basis_state(op.graph, 0, 1), steps):
        if k in wanted:
            out[k] = line_edge_distribution(_edge_probs(a))
    return out
