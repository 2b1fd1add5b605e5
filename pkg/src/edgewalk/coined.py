"""Coined walk on the ring and its intertwiner with the edge walk.

Coin basis order is ``(R, L)``.  The map ``E`` sends ``|j-1, j>`` to
``|j> (x) |R>`` and ``|j+1, j>`` to ``|j> (x) |L>``; with the coin
``G|R> = t|R> + r|L>``, ``G|L> = -r*|R> + t*|L>`` one has ``V E = E U``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import UNITARY_TOL, cycle_graph, validate_unitary
from .walk import WalkState, apply_step, basis_state, ring_step_operator

R, L = 0, 1


@dataclass(frozen=True, eq=False)
class CoinedState:
    """Amplitudes of shape ``(N, 2)``: ``amplitudes[j, c]`` for vertex ``j``, coin ``c``."""

    amplitudes: np.ndarray

    def __post_init__(self):
        a = np.array(self.amplitudes, dtype=complex)
        if a.ndim != 2 or a.shape[1] != 2:
            raise ValueError(f"coined amplitudes must have shape (N, 2), got {a.shape}")
        a.setflags(write=False)
        object.__setattr__(self, "amplitudes", a)

    @property
    def n(self) -> int:
        return self.amplitudes.shape[0]

    def vertex_probabilities(self) -> np.ndarray:
        return np.sum(np.abs(self.amplitudes) ** 2, axis=1)


def coin_operator(t: complex, r: complex) -> np.ndarray:
    t, r = complex(t), complex(r)
    g = np.array([[t, -r.conjugate()], [r, t.conjugate()]])
    if not validate_unitary(g, UNITARY_TOL):
        raise ValueError("coin is not unitary")
    return g


def coined_step(s: CoinedState, coin: np.ndarray, n: int | None = None) -> CoinedState:
    """Coin flip on every vertex, then shift ``R`` movers right and ``L`` movers left."""
    coin = np.asarray(coin, dtype=complex)
    if n is not None and n != s.n:
        raise ValueError(f"state lives on {s.n} vertices, not {n}")
    if coin.shape != (2, 2):
        raise ValueError("coin must be 2x2")
    flipped = s.amplitudes @ coin.T
    out = np.empty_like(flipped)
    out[:, R] = np.roll(flipped[:, R], 1)
    out[:, L] = np.roll(flipped[:, L], -1)
    return CoinedState(out)


def _require_ring(s: WalkState):
    if not s.graph.is_ring():
        raise ValueError("the coined correspondence is defined only on ring graphs")


def edge_to_coined(s: WalkState) -> CoinedState:
    _require_ring(s)
    a = s.amplitudes
    out = np.empty((s.graph.vertex_count, 2), dtype=complex)
    out[:, R] = np.roll(a[0::2], 1)  # c_{j-1,j} at index 2(j-1)
    out[:, L] = a[1::2]  # c_{j+1,j} at index 2j+1
    return CoinedState(out)


def coined_to_edge(c: CoinedState) -> WalkState:
    g = cycle_graph(c.n)
    a = np.empty(2 * c.n, dtype=complex)
    a[0::2] = np.roll(c.amplitudes[:, R], -1)
    a[1::2] = c.amplitudes[:, L]
    return WalkState(g, a)


def verify_intertwining(n: int, t: complex, r: complex, coin: np.ndarray | None = None) -> float:
    """Largest ``|| V E e - E U e ||`` over edge basis states ``e``.

    ``coin`` overrides the coin built from ``(t, r)`` (for negative controls).
    """
    op = ring_step_operator(n, t, r)
    g = coin_operator(t, r) if coin is None else np.asarray(coin, dtype=complex)
    worst = 0.0
    for i in range(op.graph.state_count):
        e = op.graph.state_of_index(i)
        s = basis_state(op.graph, e.tail, e.head)
        lhs = coined_step(edge_to_coined(s), g).amplitudes
        rhs = edge_to_coined(apply_step(op, s)).amplitudes
        worst = max(worst, float(np.linalg.norm(lhs - rhs)))
    return worst
