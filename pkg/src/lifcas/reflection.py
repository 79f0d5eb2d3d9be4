"""Single-interface reflection coefficients for the TM and TE polarizations.

The textbook variables s = sqrt(eps - 1 + p^2), p = q*c/zeta are numerically
unusable at small zeta, where p overflows.  All evaluation here therefore
uses the zeta-rescaled forms

    t = zeta*s*a/c = sqrt(z^2*(eps - 1) + y^2),      z = zeta*a/c, y = q*a,

    Delta_TM = (eps - 1) * (y^2*(eps + 1) - z^2) / (eps*y + t)^2
    Delta_TE = z^2*(eps - 1) / (t + y)^2

which are algebraically identical to (eps*p - s)/(eps*p + s) and
(s - p)/(s + p) but stay finite and cancellation-free for every m >= 1.
The m = 0 limits are analytic per model and never touch eps(0).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .constants import CODATA, PhysicalConstants, dimensionless_gamma, matsubara_frequency
from .dispersion import (
    ConstantDielectric,
    DispersionModel,
    IdealMetal,
    ModifiedIdealMetal,
    Tabulated,
    eps_at,
    tabulated_eps,
    zero_mode_class,
)

__all__ = [
    "LifshitzPoint",
    "ReflectionPair",
    "deltas_at",
    "zero_mode_deltas",
    "zero_mode_tm_limit",
    "mim_coefficients",
    "surface_impedance_te",
    "delta_te_from_impedance",
]


@dataclass(frozen=True)
class LifshitzPoint:
    """One evaluation point of the Lifshitz integrand.

    ``y = q*a`` is the dimensionless transverse variable; the integration
    region y >= m*gamma is exactly the region of real transverse momentum.
    """

    m: int
    y: float
    a: float
    T: float

    def __post_init__(self):
        if self.m < 0:
            raise ValueError("Matsubara index must be non-negative")
        if self.a <= 0 or self.T <= 0:
            raise ValueError("gap and temperature must be positive")
        if self.y < self.m * self.gamma * (1.0 - 1.0e-12):
            raise ValueError(
                f"y = {self.y} below m*gamma = {self.m * self.gamma}: "
                "transverse momentum would be imaginary"
            )

    @property
    def gamma(self):
        return dimensionless_gamma(self.a, self.T)

    @property
    def zeta_m(self):
        return matsubara_frequency(self.m, self.T)

    @property
    def q(self):
        """Magnitude of the full wave vector, 1/m."""
        return self.y / self.a

    @property
    def p(self):
        """Lifshitz variable q*c/zeta_m; undefined at m = 0."""
        if self.m == 0:
            raise ValueError("p is undefined at the zero mode")
        return self.y / (self.m * self.gamma)

    @property
    def k_perp(self):
        """Transverse momentum, 1/m."""
        z = self.m * self.gamma
        return math.sqrt(max(self.y * self.y - z * z, 0.0)) / self.a


@dataclass(frozen=True)
class ReflectionPair:
    """TM and TE single-interface coefficients, each in [0, 1]."""

    delta_tm: float
    delta_te: float

    def __post_init__(self):
        eps = 1.0e-12
        if not (-eps <= self.delta_te <= self.delta_tm + eps <= 1.0 + 2 * eps):
            raise ValueError(
                f"reflection coefficients out of order: TM={self.delta_tm}, TE={self.delta_te}"
            )


def _deltas_scaled(z, y, eps):
    """Rescaled-form coefficients at dimensionless (z, y) for permittivity eps."""
    em1 = eps - 1.0
    c = z * z * em1
    t = math.sqrt(c + y * y)
    dte = c / ((t + y) * (t + y))
    den = eps * y + t
    dtm = em1 * (y * y * (eps + 1.0) - z * z) / (den * den)
    return dtm, dte


def deltas_at(pt: LifshitzPoint, model: DispersionModel,
              constants: PhysicalConstants = CODATA) -> ReflectionPair:
    """Reflection coefficients at a finite Matsubara index (m >= 1)."""
    if pt.m == 0:
        raise ValueError("the zero mode is computed by zero_mode_deltas, not deltas_at")
    if isinstance(model, (IdealMetal, ModifiedIdealMetal)):
        return ReflectionPair(1.0, 1.0)
    z = pt.m * pt.gamma
    eps = eps_at(model, pt.zeta_m, T=pt.T, constants=constants)
    dtm, dte = _deltas_scaled(z, pt.y, eps)
    return ReflectionPair(dtm, dte)


def zero_mode_tm_limit(model: DispersionModel) -> float:
    """Constant zeta -> 0 limit of the TM coefficient for ``model``."""
    if isinstance(model, ConstantDielectric):
        return (model.eps0 - 1.0) / (model.eps0 + 1.0)
    if isinstance(model, Tabulated) and not model.table.metallic:
        eps0 = tabulated_eps(model.table.zeta_grid[0], model.table)
        return (eps0 - 1.0) / (eps0 + 1.0)
    # metallic limit: Drude, plasma, ideal, MIM, metallic tables
    return 1.0


def zero_mode_deltas(q, model: DispersionModel,
                     constants: PhysicalConstants = CODATA) -> ReflectionPair:
    """Analytic zeta -> 0 limits of the coefficients at wave number ``q`` (1/m)."""
    if q <= 0:
        raise ValueError(f"wave number must be positive, got {q}")
    zm = zero_mode_class(model, constants=constants)
    if zm.kind == "vanishes":
        dte = 0.0
    elif zm.kind == "finite":
        lt = zm.limit_rad2ps2 / (constants.c * constants.c)  # 1/m^2
        root = math.sqrt(lt + q * q)
        dte = lt / ((root + q) * (root + q))
    else:  # ideal
        dte = 1.0
    return ReflectionPair(zero_mode_tm_limit(model), dte)


def mim_coefficients(m):
    """Mode coefficients (A_m, B_m) of the modified ideal metal."""
    if m < 0:
        raise ValueError("Matsubara index must be non-negative")
    return (1.0, 0.0) if m == 0 else (1.0, 1.0)


def surface_impedance_te(zeta, k_perp, model: DispersionModel,
                         T=None, constants: PhysicalConstants = CODATA):
    """TE surface impedance Z = -zeta/sqrt(zeta^2*eps + c^2*k_perp^2).

    Normalized so that Z = -1/s, making 1 + Z*p = (s - p)/s; the vanishing
    of 1 + Z*p at zeta = 0 is then exactly the statement that the TE zero
    mode is absent.  Perfect reflectors have Z = 0 (s -> infinity).
    """
    if zeta <= 0:
        raise ValueError(f"zeta must be positive, got {zeta}")
    if isinstance(model, (IdealMetal, ModifiedIdealMetal)):
        return 0.0
    eps = eps_at(model, zeta, T=T, constants=constants)
    ck = constants.c * k_perp
    return -zeta / math.sqrt(zeta * zeta * eps + ck * ck)


def delta_te_from_impedance(Z, p):
    """TE reflection coefficient (1 + Z*p)/(1 - Z*p) from the impedance."""
    zp = Z * p
    return (1.0 + zp) / (1.0 - zp)
