"""Probability current on line/ring walks and 1D scattering by transfer matrices."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .graph import UNITARY_TOL, GraphError, PortPhase, beam_splitter_unitary, cycle_graph
from .walk import StepOperator, WalkState, _edge_probs, build_step_operator


@dataclass(frozen=True)
class VertexScatterer:
    """Beam splitter ``(t, r)`` with a phase shifter ``phi`` just left of the vertex."""

    t: complex
    r: complex
    phi: float = 0.0

    def __post_init__(self):
        if abs(abs(self.t) ** 2 + abs(self.r) ** 2 - 1) > UNITARY_TOL:
            raise GraphError("|t|^2 + |r|^2 must equal 1")

    def current_matrix(self) -> np.ndarray:
        t, r = complex(self.t), complex(self.r)
        e = cmath.exp(1j * self.phi)
        return np.array(
            [[abs(t) ** 2, t * r * e], [(t * r * e).conjugate(), -abs(t) ** 2]]
        )


def chain_step_operator(scatterers: Sequence[VertexScatterer]) -> StepOperator:
    """Ring whose vertex ``k`` carries ``scatterers[k]``."""
    g = cycle_graph(len(scatterers))
    unitaries = {k: beam_splitter_unitary(sc.t, sc.r) for k, sc in enumerate(scatterers)}
    phases = [PortPhase(k, 0, sc.phi) for k, sc in enumerate(scatterers) if sc.phi != 0]
    return build_step_operator(g, unitaries, phases)


def _inbound(s: WalkState, k: int) -> np.ndarray:
    g = s.graph
    if g.degree(k) != 2:
        raise GraphError(f"current is defined at degree-2 vertices; vertex {k} has degree {g.degree(k)}")
    left, right = g.ports[k]
    return np.array([s.amplitude(right, k), s.amplitude(left, k)])


def _current(v: np.ndarray, m: np.ndarray) -> complex:
    return complex(v.conj() @ m @ v)


def probability_current(s: WalkState, k: int, sc: VertexScatterer) -> float:
    """``J_k`` built from the inbound amplitudes ``(c_{k+1,k}, c_{k-1,k})``."""
    j = _current(_inbound(s, k), sc.current_matrix())
    return j.real


def currents(s: WalkState, scatterers: Sequence[VertexScatterer]) -> np.ndarray:
    """Currents at every ring vertex (vectorized; ring layout required)."""
    if not s.graph.is_ring() or len(scatterers) != s.graph.vertex_count:
        raise GraphError("currents() needs a ring with one scatterer per vertex")
    a = s.amplitudes
    from_left = np.roll(a[0::2], 1)  # c_{k-1,k}
    from_right = a[1::2]  # c_{k+1,k}
    t = np.array([complex(sc.t) for sc in scatterers])
    r = np.array([complex(sc.r) for sc in scatterers])
    ph = np.exp(1j * np.array([sc.phi for sc in scatterers]))
    off = t * r * ph * np.conj(from_right) * from_left
    return np.abs(t) ** 2 * (np.abs(from_right) ** 2 - np.abs(from_left) ** 2) + 2 * off.real


def continuity_check(op: StepOperator, s: WalkState, scatterers: Sequence[VertexScatterer]) -> float:
    """``max_k |Delta P_{k,k+1} - (J_{k+1} - J_k)|`` over one step."""
    before = _edge_probs(s.amplitudes)
    after = _edge_probs(op.matrix @ s.amplitudes)
    j = currents(s, scatterers)
    return float(np.max(np.abs((after - before) - (np.roll(j, -1) - j))))


@dataclass(frozen=True)
class ScatteringResult:
    """Left-incident scattering at ``lambda = e^{-i theta}``, incoming amplitude 1.

    ``rho`` is ``c_{0,-1}`` and ``tau_amp`` the right-moving amplitude on the
    first edge past the barrier.
    """

    theta: float
    rho: complex
    tau_amp: complex
    R: float
    T: float

    @property
    def residual(self) -> float:
        return abs(self.R + self.T - 1)


def vertex_transfer(sc: VertexScatterer, lam: complex) -> np.ndarray:
    """Map ``(c_{k-1,k}, c_{k,k-1})`` to ``(c_{k,k+1}, c_{k+1,k})`` for an eigenstate."""
    t, r = complex(sc.t), complex(sc.r)
    e = cmath.exp(1j * sc.phi)
    tc = t.conjugate()
    return np.array(
        [
            [e / (tc * lam), -r.conjugate() / (e * tc)],
            [-r * e / tc, lam / (e * tc)],
        ]
    )


def _product(barrier: Sequence[VertexScatterer], lam: complex) -> tuple[np.ndarray, float]:
    """Ordered transfer product, renormalized each step; returns ``(matrix, log scale)``."""
    m = np.eye(2, dtype=complex)
    log_scale = 0.0
    for sc in barrier:
        m = vertex_transfer(sc, lam) @ m
        n = np.max(np.abs(m))
        m /= n
        log_scale += math.log(n)
    return m, log_scale


def scattering_coefficients(barrier: Sequence[VertexScatterer], theta: float) -> ScatteringResult:
    """Reflection and transmission of a finite barrier embedded in free leads."""
    if not barrier:
        raise ValueError("barrier must contain at least one vertex")
    lam = cmath.exp(-1j * theta)
    opaque = next((i for i, sc in enumerate(barrier) if abs(sc.t) < 1e-15), None)
    if opaque is not None:
        # Everything past a mirror is dark; the chain before it ends in a known reflection.
        mirror = barrier[opaque]
        back = complex(mirror.r) * cmath.exp(2j * mirror.phi) / lam
        m, _ = _product(barrier[:opaque], lam)
        rho = (back * m[0, 0] - m[1, 0]) / (m[1, 1] - back * m[0, 1])
        return ScatteringResult(theta, complex(rho), 0j, 1.0, 0.0)
    m, log_scale = _product(barrier, lam)
    rho = -m[1, 0] / m[1, 1]
    # tau = det(M) / M11; each vertex contributes det = t / t*, so no cancellation
    det_phase = np.prod([complex(sc.t) / complex(sc.t).conjugate() for sc in barrier])
    tau_amp = det_phase / m[1, 1] * math.exp(-log_scale)
    return ScatteringResult(theta, complex(rho), complex(tau_amp), abs(rho) ** 2, abs(tau_amp) ** 2)


def scattering_sweep(barrier: Sequence[VertexScatterer], points: int = 256) -> list[ScatteringResult]:
    thetas = 2 * math.pi * np.arange(points) / points
    return [scattering_coefficients(barrier, float(th)) for th in thetas]


def resonances(results: Sequence[ScatteringResult], threshold: float = 0.99) -> list[float]:
    """Momenta where ``T`` has a local maximum at or above ``threshold`` (periodic sweep)."""
    T = np.array([res.T for res in results])
    peaks = (T >= np.roll(T, 1)) & (T >= np.roll(T, -1)) & (T >= threshold)
    return [results[i].theta for i in np.flatnonzero(peaks)]
