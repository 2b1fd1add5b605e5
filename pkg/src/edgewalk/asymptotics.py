"""Long-time asymptotics of the line walk started in ``|0,1>``.

Phases are ``omega_+(theta) = arccos(|t| cos(theta - eta))`` and
``omega_- = -omega_+``.  Stationary points of ``j theta + tau omega_+(theta)``
give an ``O(1/tau)`` edge probability inside the ballistic front
``|j| < |t| tau`` and super-polynomial decay outside it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np


@dataclass(frozen=True)
class AsymptoticParams:
    t_mag: float
    r_mag: float
    eta: float = 0.0

    def __post_init__(self):
        if not 0 < self.t_mag < 1:
            raise ValueError("asymptotics need 0 < |t| < 1")
        if abs(self.t_mag**2 + self.r_mag**2 - 1) > 1e-10:
            raise ValueError("|t|^2 + |r|^2 must equal 1")

    @classmethod
    def from_amplitudes(cls, t: complex, r: complex) -> "AsymptoticParams":
        t = complex(t)
        return cls(abs(t), abs(complex(r)), math.atan2(t.imag, t.real))

    @property
    def mu(self) -> float:
        return math.atan(self.r_mag / self.t_mag)

    def gamma(self, alpha: float) -> float:
        """Angle in ``[0, pi/2]`` with ``sin^2 = alpha^2 |r|^2 / (|t|^2 (1 - alpha^2))``."""
        s2 = alpha**2 * self.r_mag**2 / (self.t_mag**2 * (1 - alpha**2))
        return math.asin(math.sqrt(min(s2, 1.0)))

    def nu(self, alpha: float) -> float:
        return math.atan2(self.r_mag, math.sqrt(max(self.t_mag**2 - alpha**2, 0.0)))


def c_of(theta, p: AsymptoticParams):
    return np.sqrt(1 - p.t_mag**2 * np.cos(np.asarray(theta) - p.eta) ** 2)


def s_of(theta, p: AsymptoticParams):
    return p.t_mag * np.sin(np.asarray(theta) - p.eta)


def omega_plus(theta, p: AsymptoticParams):
    return np.arccos(p.t_mag * np.cos(np.asarray(theta) - p.eta))


def omega_minus(theta, p: AsymptoticParams):
    return -omega_plus(theta, p)


def omega_plus_prime(theta, p: AsymptoticParams):
    return s_of(theta, p) / c_of(theta, p)


def omega_plus_second(theta, p: AsymptoticParams):
    x = np.asarray(theta) - p.eta
    return p.t_mag * p.r_mag**2 * np.cos(x) / c_of(theta, p) ** 3


def stationary_points(alpha: float, p: AsymptoticParams) -> list[float]:
    """Solutions in ``[0, 2 pi)`` of ``omega_+'(theta) = -alpha``."""
    if alpha < 0:
        raise ValueError("alpha must be nonnegative")
    if alpha > p.t_mag:
        return []
    g = p.gamma(alpha)
    pts = {(p.eta + g + math.pi) % (2 * math.pi), (p.eta + 2 * math.pi - g) % (2 * math.pi)}
    return sorted(pts)


def asymptotic_p_fixed_j(j: int, tau: int, p: AsymptoticParams) -> float:
    """Edge probability ``p(j, j+1; tau)`` for fixed ``j`` and large ``tau``."""
    if tau < 1:
        raise ValueError("tau must be at least 1")
    sign = (-1) ** ((j + tau) % 2)
    phase = tau * p.mu + math.pi / 4
    braces = (1 + sign) * math.cos(phase) ** 2 + (1 - sign) * math.sin(phase) ** 2
    return p.r_mag / (math.pi * tau * p.t_mag) * braces


class ScaledAsymptotic(NamedTuple):
    p: float
    super_polynomial_decay: bool


def scaled_envelope(alpha: float, tau: int, p: AsymptoticParams) -> float:
    """Non-oscillating prefactor of the ``j = alpha tau`` asymptotic."""
    if alpha >= p.t_mag:
        return 0.0
    return p.r_mag / (math.pi * tau * math.sqrt(p.t_mag**2 - alpha**2) * (1 - alpha))


def asymptotic_p_scaled(alpha: float, tau: int, p: AsymptoticParams) -> ScaledAsymptotic:
    """Edge probability at ``j = alpha tau``; zero with a decay flag beyond the front."""
    if alpha < 0:
        raise ValueError("alpha must be nonnegative")
    if tau < 1:
        raise ValueError("tau must be at least 1")
    if alpha >= p.t_mag:
        return ScaledAsymptotic(0.0, True)
    sign = (-1) ** (tau % 2)
    g, nu = p.gamma(alpha), p.nu(alpha)
    osc = (1 + alpha * sign * math.cos(math.pi * alpha * tau)) * (
        1 + sign * math.sin(2 * tau * (alpha * g - nu) - math.pi * alpha * tau)
    )
    return ScaledAsymptotic(scaled_envelope(alpha, tau, p) * osc, False)


def front_margin(tau: int, epsilon: float = 0.01) -> int:
    """Buffer beyond ``|t| tau``: ``10 + tau^(1/3)``, widened for ``epsilon < 0.01``."""
    widen = max(1.0, math.log10(1 / epsilon) / 2)
    return math.ceil((10 + tau ** (1 / 3)) * widen)


def ballistic_front(t_mag: float, tau: int, epsilon: float = 0.01) -> int:
    """Edge coordinate ``j*`` beyond which less than ``epsilon`` probability remains."""
    if tau < 1 or not 0 < epsilon < 1:
        raise ValueError("need tau >= 1 and 0 < epsilon < 1")
    if abs(t_mag - 1) < 1e-12:
        return tau
    return min(math.ceil(t_mag * tau) + front_margin(tau, epsilon), tau)
