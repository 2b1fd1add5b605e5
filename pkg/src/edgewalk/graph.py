"""Graphs of directed edge states joined by vertex multiports, with optional port phases."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

#: Tolerance applied to every unitarity precondition in the package.
UNITARY_TOL = 1e-10


class GraphError(ValueError):
    """Raised for malformed graphs or invalid vertex data."""


@dataclass(frozen=True)
class DirectedEdgeState:
    """A particle on edge ``{tail, head}`` travelling from ``tail`` to ``head``."""

    tail: int
    head: int

    def reversed(self) -> "DirectedEdgeState":
        return DirectedEdgeState(self.head, self.tail)


@dataclass(frozen=True, eq=False)
class Graph:
    """Simple undirected graph whose basis states are the ``2E`` directed edges.

    Edge ``e = (u, v)`` owns state indices ``2e`` (``u -> v``) and ``2e + 1``
    (``v -> u``).  ``ports[v]`` lists the neighbours of ``v``; the position of a
    neighbour in that list is its port number at ``v``.
    """

    vertex_count: int
    edges: tuple[tuple[int, int], ...]
    ports: tuple[tuple[int, ...], ...]
    _edge_lookup: dict = field(repr=False, compare=False)

    @property
    def state_count(self) -> int:
        return 2 * len(self.edges)

    def degree(self, v: int) -> int:
        return len(self.ports[v])

    def port(self, v: int, neighbour: int) -> int:
        """Port number at ``v`` of the edge leading to ``neighbour``."""
        try:
            return self.ports[v].index(neighbour)
        except ValueError:
            raise GraphError(f"{neighbour} is not adjacent to {v}") from None

    def index_of_state(self, s: DirectedEdgeState | tuple[int, int]) -> int:
        tail, head = (s.tail, s.head) if isinstance(s, DirectedEdgeState) else s
        key = (tail, head) if tail < head else (head, tail)
        try:
            e = self._edge_lookup[key]
        except KeyError:
            raise GraphError(f"({tail}, {head}) is not an edge") from None
        return 2 * e + (0 if self.edges[e][0] == tail else 1)

    def state_of_index(self, i: int) -> DirectedEdgeState:
        if not 0 <= i < self.state_count:
            raise IndexError(i)
        u, v = self.edges[i // 2]
        return DirectedEdgeState(u, v) if i % 2 == 0 else DirectedEdgeState(v, u)

    def states(self) -> list[DirectedEdgeState]:
        return [self.state_of_index(i) for i in range(self.state_count)]

    def is_ring(self) -> bool:
        """True for graphs laid out exactly as :func:`cycle_graph` builds them."""
        n = self.vertex_count
        if n < 3 or len(self.edges) != n:
            return False
        return all(
            self.edges[j] == (j, (j + 1) % n) and self.ports[j] == ((j - 1) % n, (j + 1) % n)
            for j in range(n)
        )


def _make_graph(
    vertex_count: int,
    edges: Sequence[tuple[int, int]],
    ports: Sequence[Sequence[int]] | None = None,
) -> Graph:
    lookup: dict[tuple[int, int], int] = {}
    clean = []
    for e, (u, v) in enumerate(edges):
        u, v = int(u), int(v)
        if u == v:
            raise GraphError(f"self-loop at vertex {u}")
        if not (0 <= u < vertex_count and 0 <= v < vertex_count):
            raise GraphError(f"edge ({u}, {v}) references a vertex outside 0..{vertex_count - 1}")
        key = (min(u, v), max(u, v))
        if key in lookup:
            raise GraphError(f"duplicate edge {key}")
        lookup[key] = e
        clean.append((u, v))

    neighbours: list[list[int]] = [[] for _ in range(vertex_count)]
    for u, v in clean:
        neighbours[u].append(v)
        neighbours[v].append(u)

    if ports is None:
        port_lists = tuple(tuple(sorted(nb)) for nb in neighbours)
    else:
        port_lists = tuple(tuple(int(w) for w in p) for p in ports)
        if len(port_lists) != vertex_count:
            raise GraphError("one port list per vertex is required")
        for v, (given, actual) in enumerate(zip(port_lists, neighbours)):
            if sorted(given) != sorted(actual):
                raise GraphError(f"ports of vertex {v} do not match its incident edges")
    return Graph(vertex_count, tuple(clean), port_lists, lookup)


def build_graph(edges: Iterable[tuple[int, int]]) -> Graph:
    """Build a graph from an edge list; vertices are ``0..max id``.

    Ports are ordered by ascending neighbour id.  Every vertex id below the
    largest one must appear in some edge.
    """
    edges = [tuple(e) for e in edges]
    if not edges:
        raise GraphError("at least one edge is required")
    vertex_count = 1 + max(max(e) for e in edges)
    if min(min(e) for e in edges) < 0:
        raise GraphError("vertex ids must be nonnegative")
    used = {v for e in edges for v in e}
    missing = sorted(set(range(vertex_count)) - used)
    if missing:
        raise GraphError(f"dangling vertex ids without edges: {missing}")
    return _make_graph(vertex_count, edges)


def cycle_graph(n: int) -> Graph:
    """Ring ``0 - 1 - ... - (n-1) - 0``.

    Edge ``j`` joins ``j`` and ``j+1 (mod n)``, so ``c_{j,j+1}`` sits at state
    index ``2j`` and ``c_{j+1,j}`` at ``2j + 1``.  Port 0 of every vertex faces
    ``j-1`` and port 1 faces ``j+1``.
    """
    if n < 3:
        raise GraphError(f"a cycle needs at least 3 vertices, got {n}")
    edges = [(j, (j + 1) % n) for j in range(n)]
    ports = [((j - 1) % n, (j + 1) % n) for j in range(n)]
    return _make_graph(n, edges, ports)


def path_graph(n: int) -> Graph:
    """Open chain ``0 - 1 - ... - (n-1)``; interior port 0 faces ``j-1``."""
    if n < 2:
        raise GraphError(f"a path needs at least 2 vertices, got {n}")
    return _make_graph(n, [(j, j + 1) for j in range(n - 1)])


@dataclass(frozen=True, eq=False)
class LocalUnitary:
    """Vertex multiport: ``matrix[out_port, in_port]``."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise GraphError(f"local unitary must be square, got shape {m.shape}")
        if not validate_unitary(m, UNITARY_TOL):
            raise GraphError("local matrix is not unitary within 1e-10")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class PortPhase:
    """Phase shifter on port ``port`` of ``vertex``.

    The phase ``exp(i*phi)`` is applied each time amplitude passes through the
    port, entering or leaving the vertex.
    """

    vertex: int
    port: int
    phi: float

    def __post_init__(self):
        if not math.isfinite(self.phi):
            raise GraphError("phase must be finite")
        if self.port < 0:
            raise GraphError("port must be nonnegative")


def validate_unitary(m, tol: float = 1e-12) -> bool:
    """Return True iff ``max |(M^dagger M - I)_ab| <= tol``."""
    m = np.asarray(m.matrix if isinstance(m, LocalUnitary) else m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise GraphError("validate_unitary needs a square matrix")
    dev = m.conj().T @ m - np.eye(m.shape[0])
    return bool(np.max(np.abs(dev)) <= tol) if dev.size else True


def beam_splitter_unitary(t: complex, r: complex) -> LocalUnitary:
    """Two-port beam splitter.

    Input port 0 (arriving from ``j-1``) goes to ``r`` on port 0 and ``t`` on
    port 1; input port 1 goes to ``t*`` on port 0 and ``-r*`` on port 1.
    """
    t, r = complex(t), complex(r)
    if abs(abs(t) ** 2 + abs(r) ** 2 - 1) > UNITARY_TOL:
        raise GraphError(f"|t|^2 + |r|^2 must be 1, got {abs(t) ** 2 + abs(r) ** 2!r}")
    return LocalUnitary(np.array([[r, t.conjugate()], [t, -r.conjugate()]]))


def tritter_unitary() -> LocalUnitary:
    """Symmetric three-port; port 0 is the labelled edge."""
    z = cmath.exp(2j * math.pi / 3)
    zc = z.conjugate()
    cols = np.array([[1, 1, 1], [zc, 1, z], [zc, z, 1]], dtype=complex)
    return LocalUnitary(cols.T / math.sqrt(3))


def grover_unitary(n: int, t: complex, r: complex) -> LocalUnitary:
    """Label-free ``n``-port: reflect with ``r``, transmit to each other port with ``t``."""
    if n < 2:
        raise GraphError("grover_unitary needs n >= 2")
    t, r = complex(t), complex(r)
    norm = (n - 1) * abs(t) ** 2 + abs(r) ** 2 - 1
    ortho = (n - 2) * abs(t) ** 2 + 2 * (r.conjugate() * t).real
    if abs(norm) > UNITARY_TOL or abs(ortho) > UNITARY_TOL:
        raise GraphError(
            f"(n-1)|t|^2+|r|^2=1 and (n-2)|t|^2+r*t+t*r=0 violated: residuals {norm:.3g}, {ortho:.3g}"
        )
    m = np.full((n, n), t, dtype=complex)
    np.fill_diagonal(m, r)
    return LocalUnitary(m)


def grover_real_parameters(n: int) -> tuple[float, float]:
    """Real solution ``(t, r) = (2/n, -(n-2)/n)`` of the Grover vertex conditions."""
    return 2.0 / n, -(n - 2) / n


def mirror_unitary() -> LocalUnitary:
    """Default 1x1 vertex for degree-1 endpoints: a perfect mirror (``-1``)."""
    return LocalUnitary(np.array([[-1.0 + 0j]]))
