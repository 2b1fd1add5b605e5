"""Closed-form and per-sector spectra of translation-invariant ring walks.

The uniform ring commutes with translation by one edge, so each momentum
sector ``theta_k = 2 pi k / N`` reduces to a 2x2 problem with eigenvalues
``|t| cos(theta_k - eta) +/- i sqrt(1 - |t|^2 cos^2(theta_k - eta))``.  With
phase shifters on every second edge only translation by two edges survives,
leaving a 4x4 problem per sector.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .graph import UNITARY_TOL, GraphError
from .walk import StepOperator, WalkState, _edge_probs


@dataclass(frozen=True, eq=False)
class SpectrumEntry:
    """One eigenpair in momentum sector ``k``.

    ``coeffs`` is ``(a_plus, a_minus)`` for the uniform ring and
    ``(a_plus, b_minus, a_minus, b_plus)`` for the alternating-phase ring.
    ``state`` is the full normalized eigenvector over the ``2N`` edge states.
    """

    k: int
    theta: float
    branch: str
    eigenvalue: complex
    coeffs: tuple
    state: np.ndarray
    degenerate: bool = False


def eta_of(t: complex) -> float:
    """Phase of ``t`` on the branch ``(-pi, pi]``."""
    if t == 0:
        raise ValueError("t must be nonzero")
    return cmath.phase(t)


def _check_tr(t: complex, r: complex):
    if abs(abs(t) ** 2 + abs(r) ** 2 - 1) > UNITARY_TOL:
        raise GraphError("|t|^2 + |r|^2 must equal 1")
    if r == 0:
        raise GraphError("r = 0 is free propagation; use free_spectrum instead")


def sector_matrix(theta: float, t: complex, r: complex) -> np.ndarray:
    """2x2 action of the step on ``(a_plus, a_minus)`` in sector ``theta``."""
    return np.array(
        [
            [t * cmath.exp(-1j * theta), -r.conjugate()],
            [r, t.conjugate() * cmath.exp(1j * theta)],
        ]
    )


def cycle_eigenvalues(theta, t: complex):
    """``(lambda_plus, lambda_minus)`` for momentum ``theta`` (array-friendly)."""
    c = abs(t) * np.cos(np.asarray(theta) - eta_of(t))
    s = np.sqrt(np.maximum(1 - c * c, 0.0))
    return c + 1j * s, c - 1j * s


def momentum_states(n: int, k: int) -> tuple[np.ndarray, np.ndarray]:
    """Right- and left-mover plane waves ``|u_{k+}>``, ``|u_{k-}>`` on ring layout."""
    theta = 2 * math.pi * k / n
    w = np.exp(1j * theta * np.arange(n)) / math.sqrt(n)
    plus = np.zeros(2 * n, dtype=complex)
    minus = np.zeros(2 * n, dtype=complex)
    plus[0::2] = w
    minus[1::2] = w
    return plus, minus


def cycle_eigensystem(n: int, t: complex, r: complex) -> list[SpectrumEntry]:
    """All ``2N`` analytic eigenpairs of the uniform ring, ordered by ``k`` then branch."""
    t, r = complex(t), complex(r)
    _check_tr(t, r)
    eta = eta_of(t)
    entries = []
    for k in range(n):
        theta = 2 * math.pi * k / n
        c_k = math.sqrt(max(1 - abs(t) ** 2 * math.cos(theta - eta) ** 2, 0.0))
        s_k = abs(t) * math.sin(theta - eta)
        lam_p = abs(t) * math.cos(theta - eta) + 1j * c_k
        lam_m = abs(t) * math.cos(theta - eta) - 1j * c_k
        degenerate = c_k < UNITARY_TOL
        u_plus, u_minus = momentum_states(n, k)
        den_p = math.sqrt(2 * c_k * (c_k + s_k))
        den_m = math.sqrt(2 * c_k * (c_k - s_k))
        for branch, lam, ap, am in (
            ("+", lam_p, r.conjugate() / den_p, -1j * (s_k + c_k) / den_p),
            ("-", lam_m, r.conjugate() / den_m, 1j * (c_k - s_k) / den_m),
        ):
            entries.append(
                SpectrumEntry(k, theta, branch, lam, (ap, am), ap * u_plus + am * u_minus, degenerate)
            )
    return entries


def free_spectrum(n: int, t: complex = 1.0) -> list[SpectrumEntry]:
    """Plane-wave eigenpairs of the reflectionless ring (``|t| = 1``)."""
    t = complex(t)
    if abs(abs(t) - 1) > UNITARY_TOL:
        raise GraphError("free propagation requires |t| = 1")
    entries = []
    for k in range(n):
        theta = 2 * math.pi * k / n
        u_plus, u_minus = momentum_states(n, k)
        entries.append(SpectrumEntry(k, theta, "+", t * cmath.exp(-1j * theta), (1, 0), u_plus))
        entries.append(
            SpectrumEntry(k, theta, "-", t.conjugate() * cmath.exp(1j * theta), (0, 1), u_minus)
        )
    return entries


def eigen_residual(op: StepOperator, entry: SpectrumEntry) -> float:
    """``|| U psi - lambda psi ||_2``."""
    psi = entry.state
    if psi.shape[0] != op.matrix.shape[0]:
        raise ValueError("entry and operator dimensions differ")
    return float(np.linalg.norm(op.matrix @ psi - entry.eigenvalue * psi))


# -- alternating phase shifters ---------------------------------------------


def phase_shifted_matrix(theta: float, t: complex, r: complex, phi: float) -> np.ndarray:
    """4x4 action on ``(a_plus, b_minus, a_minus, b_plus)`` in sector ``theta``."""
    t, r = complex(t), complex(r)
    tc, rc = t.conjugate(), r.conjugate()
    e = cmath.exp
    return np.array(
        [
            [0, 0, -rc, t * e(-1j * theta)],
            [0, 0, tc * e(1j * theta), r],
            [r * e(2j * phi), tc * e(1j * (theta + phi)), 0, 0],
            [t * e(1j * (phi - theta)), -rc, 0, 0],
        ]
    )


def quartic_coefficient(theta: float, t: complex, r: complex, phi: float) -> complex:
    """Middle coefficient ``B`` of ``lambda^4 + B lambda^2 + e^{2i phi} = 0``."""
    t, r = complex(t), complex(r)
    return abs(r) ** 2 * (1 + cmath.exp(2j * phi)) - cmath.exp(1j * phi) * (
        t.conjugate() ** 2 * cmath.exp(2j * theta) + t**2 * cmath.exp(-2j * theta)
    )


def quartic_residual(lam: complex, theta: float, t: complex, r: complex, phi: float) -> float:
    b = quartic_coefficient(theta, t, r, phi)
    return abs(lam**4 + b * lam**2 + cmath.exp(2j * phi))


def lambda_squared_half_pi(theta: float, t: complex) -> tuple[complex, complex]:
    """Closed-form ``lambda^2`` roots ``(+, -)`` when ``phi = pi/2``."""
    c = math.cos(2 * theta - 2 * eta_of(t))
    tt = abs(t) ** 2
    root = math.sqrt(max(1 - tt**2 * c**2, 0.0))
    return 1j * tt * c + root, 1j * tt * c - root


def phase_shifted_sector(theta: float, t: complex, r: complex, phi: float):
    """Numeric eigenpairs of the 4x4 sector problem.

    Returns ``(eigenvalues, vectors, branches, degenerate)``; column ``i`` of
    ``vectors`` is normalized.  ``branches[i]`` names the root of the quadratic
    in ``lambda^2`` (principal square root for ``+``) that ``lambda_i^2`` sits
    on.  ``degenerate[i]`` marks eigenvalues shared with another eigenvector of
    the sector, whose numeric vectors are then an arbitrary basis.
    """
    m = phase_shifted_matrix(theta, t, r, phi)
    vals, vecs = np.linalg.eig(m)
    order = np.argsort(np.angle(vals), kind="stable")
    vals, vecs = vals[order], vecs[:, order]
    vecs = vecs / np.linalg.norm(vecs, axis=0)
    b = quartic_coefficient(theta, t, r, phi)
    disc = cmath.sqrt(b * b - 4 * cmath.exp(2j * phi))
    plus, minus = (-b + disc) / 2, (-b - disc) / 2
    branches = ["+" if abs(lam**2 - plus) <= abs(lam**2 - minus) else "-" for lam in vals]
    gaps = np.abs(vals[:, None] - vals[None, :]) + np.eye(4)
    degenerate = list(np.min(gaps, axis=1) < 1e-9)
    return vals, vecs, branches, degenerate


def _alternating_basis(n: int, theta: float) -> np.ndarray:
    """Columns ``(u+^e, u-^o, u-^e, u+^o)`` matching the 4x4 coefficient order."""
    j = np.arange(n)
    w = np.exp(1j * theta * j) * math.sqrt(2 / n)
    even, odd = j % 2 == 0, j % 2 == 1
    basis = np.zeros((2 * n, 4), dtype=complex)
    basis[2 * j[even], 0] = w[even]  # a_plus: |j,j+1>, j even
    basis[2 * j[odd] + 1, 1] = w[odd]  # b_minus: |j+1,j>, j odd
    basis[2 * j[even] + 1, 2] = w[even]  # a_minus: |j+1,j>, j even
    basis[2 * j[odd], 3] = w[odd]  # b_plus: |j,j+1>, j odd
    return basis


def phase_shifted_eigensystem(n: int, t: complex, r: complex, phi: float) -> list[SpectrumEntry]:
    """Eigenpairs of the ring with shifters on every edge whose left end is even.

    Sectors ``k = 0..N/2-1`` of the two-site translation give ``2N`` entries in
    total; sectors ``k`` and ``k + N/2`` coincide.
    """
    t, r = complex(t), complex(r)
    if n % 2:
        raise GraphError("alternating phase shifters need an even ring")
    _check_tr(t, r)
    entries = []
    for k in range(n // 2):
        theta = 2 * math.pi * k / n
        vals, vecs, branches, degenerate = phase_shifted_sector(theta, t, r, phi)
        basis = _alternating_basis(n, theta)
        for i in range(4):
            coeffs = tuple(complex(c) for c in vecs[:, i])
            entries.append(
                SpectrumEntry(
                    k, theta, branches[i], complex(vals[i]), coeffs, basis @ vecs[:, i],
                    bool(degenerate[i]),
                )
            )
    return entries


def even_odd_ratio(entry: SpectrumEntry) -> float:
    """Probability on even edges over probability on odd edges."""
    if len(entry.coeffs) != 4:
        raise ValueError("even/odd ratio needs an alternating-phase entry")
    a_p, b_m, a_m, b_p = entry.coeffs
    odd = abs(b_p) ** 2 + abs(b_m) ** 2
    if odd == 0:
        raise ZeroDivisionError("no probability on odd edges")
    return (abs(a_p) ** 2 + abs(a_m) ** 2) / odd


def uniform_limit_condition(n: int, t: complex) -> bool:
    """True iff ``N eta / pi`` is not an integer, i.e. the ring spectrum is simple."""
    x = n * eta_of(complex(t)) / math.pi
    return abs(x - round(x)) > 1e-9


def state_edge_probabilities(entry: SpectrumEntry) -> np.ndarray:
    return _edge_probs(entry.state)


def as_walk_state(op: StepOperator, entry: SpectrumEntry) -> WalkState:
    return WalkState(op.graph, entry.state)
