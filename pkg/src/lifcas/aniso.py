"""Free energy and entropy of two z-polarizable particles.

For particles polarizable only along z, placed so that the z-component of
the separation unit vector is 1/sqrt(3), the orientation-dependent term of
the retarded dipole interaction drops out and the free energy reduces to

    F = -(k_B T / r^6) * sum_n ( (2/3) tau_n^2 )^2 exp(-2 tau_n) alpha_z(i zeta_n)^2,

with tau_n = 2*pi*r*k_B*T*|n|/(hbar*c).  The n = 0 term vanishes
identically, so F -> 0 in the classical limit: the entropy contribution of
the interaction is (mainly) negative yet goes to zero at T = 0.

The polarizability follows a single-oscillator form
alpha_z(i zeta) = alpha0/(1 + zeta^2/omega0^2); omega0 = inf recovers a
static polarizability.  alpha0 is a polarizability volume in m^3.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._differentiate import central_derivative
from .constants import CODATA, PhysicalConstants
from .thermo import default_entropy_step

__all__ = ["ORIENTATION_Z_COMPONENT", "AnisoPairConfig", "tau", "pair_free_energy", "pair_entropy"]

#: Fixed orientation of the pair: z-component of the separation unit vector.
ORIENTATION_Z_COMPONENT = 1.0 / math.sqrt(3.0)

_BLOCK = 1 << 16
_TERM_CAP = 50_000_000


@dataclass(frozen=True)
class AnisoPairConfig:
    """Separation r (m), static polarizability alpha0 (m^3), oscillator
    frequency omega0 (rad/s, may be inf)."""

    r: float
    alpha0: float
    omega0: float = math.inf

    def __post_init__(self):
        if self.r <= 0:
            raise ValueError(f"separation must be positive, got {self.r}")
        if self.alpha0 <= 0:
            raise ValueError(f"polarizability must be positive, got {self.alpha0}")
        if not self.omega0 > 0:
            raise ValueError(f"oscillator frequency must be positive, got {self.omega0}")


def tau(n, r, T, constants: PhysicalConstants = CODATA):
    """Dimensionless retardation variable 2*pi*r*k_B*T*|n|/(hbar*c)."""
    if r <= 0 or T <= 0:
        raise ValueError("separation and temperature must be positive")
    return 2.0 * math.pi * r * constants.k_B * T * abs(n) / (constants.hbar * constants.c)


def _tail_bound(x, g, alpha0):
    # alpha <= alpha0, so sum_{n>N} tau^4 e^{-2 tau} alpha^2 <= alpha0^2/g * int_x^inf t^4 e^{-2t} dt
    poly = 1.0 + 2.0 * x + 2.0 * x * x + 4.0 * x**3 / 3.0 + 2.0 * x**4 / 3.0
    return alpha0 * alpha0 / g * 0.75 * math.exp(-2.0 * x) * poly


def pair_free_energy(cfg: AnisoPairConfig, T, tol=1.0e-12,
                     constants: PhysicalConstants = CODATA):
    """Interaction free energy in J at temperature ``T`` (always <= 0).

    The sum is folded onto n >= 1 with weight 2 (the n = 0 term carries a
    tau^4 factor and vanishes identically) and truncated once the
    exponential tail bound falls below ``tol`` of the partial sum.
    """
    if T <= 0:
        raise ValueError("temperature must be positive")
    g = tau(1, cfg.r, T, constants)
    zeta_per_tau = constants.c / cfg.r  # zeta_n = tau_n * c/r
    total = 0.0
    n0 = 1
    while True:
        n = np.arange(n0, n0 + _BLOCK, dtype=float)
        t = g * n
        alpha = cfg.alpha0 / (1.0 + (t * zeta_per_tau / cfg.omega0) ** 2) \
            if math.isfinite(cfg.omega0) else cfg.alpha0
        terms = t**4 * np.exp(-2.0 * t) * alpha * alpha
        total += float(terms.sum())
        x_last = float(t[-1])
        if x_last > 3.0:
            bound = _tail_bound(x_last, g, cfg.alpha0)
            if bound <= tol * total or total == 0.0:
                break
        n0 += _BLOCK
        if n0 > _TERM_CAP:
            raise RuntimeError(
                f"pair free-energy sum needs more than {_TERM_CAP} terms "
                f"(tau spacing {g:.3e}); temperature too low for this separation"
            )
    prefac = constants.k_B * T / cfg.r**6 * (4.0 / 9.0)
    value = -prefac * 2.0 * total
    return 0.0 if value == 0.0 else value


def pair_entropy(cfg: AnisoPairConfig, T, step=None, tol=1.0e-12,
                 constants: PhysicalConstants = CODATA):
    """Entropy contribution S = -dF/dT in J/K by refined central differences."""
    if T <= 0:
        raise ValueError("temperature must be positive")
    h = default_entropy_step(T) if step is None else step
    if T - h <= 0:
        raise ValueError(f"step {h} too large for T = {T}")
    est = central_derivative(lambda t: pair_free_energy(cfg, t, tol=tol, constants=constants), T, h)
    return -est.value
