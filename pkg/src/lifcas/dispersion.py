"""Dielectric permittivity models evaluated on the imaginary frequency axis.

Every model answers two questions: the value of eps(i*zeta) at a positive
imaginary frequency zeta (rad/s), and how its TE reflection behaves in the
static limit.  The latter is classified through the limit

    L = lim_{zeta -> 0} zeta^2 * (eps(i*zeta) - 1)

which is 0 for any model with finite zero-frequency conductivity or a
finite static permittivity (the TE zero mode then vanishes), omega_p^2 for
the dissipationless plasma form, and infinite for an ideal metal.  The
zero mode is never obtained by plugging zeta = 0 into a permittivity.
"""

from __future__ import annotations

import functools
import math
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Union

import numpy as np
from scipy.integrate import quad

from .constants import CODATA, PhysicalConstants

__all__ = [
    "DrudeParams",
    "MaterialTable",
    "Drude",
    "Plasma",
    "ConstantDielectric",
    "IdealMetal",
    "ModifiedIdealMetal",
    "Tabulated",
    "DispersionModel",
    "ZeroModeBehavior",
    "drude_model",
    "drude_eps",
    "bloch_gruneisen_nu",
    "tabulated_eps",
    "eps_at",
    "zero_mode_class",
]

#: Default Debye temperature (K) and resistivity coefficient (eV) for gold.
GOLD_DEBYE_THETA_K = 175.0
GOLD_BG_COEFF_EV = 0.0847


@dataclass(frozen=True)
class DrudeParams:
    """Drude dispersion parameters, frequencies in eV.

    With ``temperature_dependent_nu`` enabled the relaxation frequency is
    evaluated from the Bloch-Grueneisen formula at the run temperature and
    ``nu_impurity_ev`` is added as an elastic-scattering floor; otherwise
    ``nu_ev`` is used at every temperature.
    """

    omega_p_ev: float
    nu_ev: float
    temperature_dependent_nu: bool = False
    debye_theta_k: float = GOLD_DEBYE_THETA_K
    bg_coeff_ev: float = GOLD_BG_COEFF_EV
    nu_impurity_ev: float = 0.0

    def __post_init__(self):
        if self.omega_p_ev <= 0:
            raise ValueError(f"plasma frequency must be positive, got {self.omega_p_ev}")
        if self.nu_ev < 0:
            raise ValueError(f"relaxation frequency must be non-negative, got {self.nu_ev}")
        if self.nu_impurity_ev < 0:
            raise ValueError("impurity relaxation floor must be non-negative")
        if self.temperature_dependent_nu:
            if self.debye_theta_k <= 0:
                raise ValueError("Debye temperature must be positive")
            if self.bg_coeff_ev <= 0:
                raise ValueError("Bloch-Grueneisen coefficient must be positive")

    def effective_nu_ev(self, T=None):
        """Relaxation frequency in eV at temperature ``T`` (K)."""
        if not self.temperature_dependent_nu:
            return self.nu_ev
        if T is None:
            raise ValueError("temperature required when temperature_dependent_nu is set")
        return bloch_gruneisen_nu(T, self.debye_theta_k, self.bg_coeff_ev) + self.nu_impurity_ev


@dataclass(frozen=True)
class MaterialTable:
    """Tabulated eps(i*zeta) on a strictly increasing frequency grid.

    ``metallic`` controls the TM zero-mode limit (1 for a metal, the
    dielectric limit built from the lowest grid point otherwise); it is
    not derivable from a finite table.
    """

    zeta_grid: np.ndarray
    eps_values: np.ndarray
    label: str = ""
    metallic: bool = True

    def __post_init__(self):
        zeta = np.asarray(self.zeta_grid, dtype=float)
        eps = np.asarray(self.eps_values, dtype=float)
        if zeta.ndim != 1 or zeta.size < 2:
            raise ValueError("frequency grid needs at least two points")
        if eps.shape != zeta.shape:
            raise ValueError("grid and permittivity arrays must have equal length")
        if not np.all(np.diff(zeta) > 0):
            raise ValueError(f"frequency grid of {self.label!r} must be strictly increasing")
        if zeta[0] <= 0:
            raise ValueError("frequency grid must be positive")
        if np.any(eps < 1.0):
            bad = float(eps.min())
            raise ValueError(
                f"table {self.label!r} has eps = {bad} < 1; imaginary-axis "
                "permittivity of a passive medium cannot drop below 1"
            )
        zeta = zeta.copy()
        eps = eps.copy()
        zeta.setflags(write=False)
        eps.setflags(write=False)
        object.__setattr__(self, "zeta_grid", zeta)
        object.__setattr__(self, "eps_values", eps)
        if zeta[0] > 1.0e11 or zeta[-1] < 1.0e18:
            warnings.warn(
                f"table {self.label!r} spans [{zeta[0]:.3g}, {zeta[-1]:.3g}] rad/s, "
                "narrower than the recommended [1e11, 1e18]",
                stacklevel=3,
            )

    def check_monotone(self, strict=True):
        """Verify eps is non-increasing in zeta; raise or warn per ``strict``."""
        if np.all(np.diff(self.eps_values) <= 0):
            return True
        msg = f"table {self.label!r}: eps(i*zeta) is not monotonically non-increasing"
        if strict:
            raise ValueError(msg)
        warnings.warn(msg, stacklevel=2)
        return False

    @classmethod
    def from_csv(cls, path, label=None, metallic=True, require_monotone=True):
        """Load a two-column ``zeta_radps,eps`` CSV (header required, # comments)."""
        path = Path(path)
        rows = []
        header_seen = False
        with path.open() as fh:
            for lineno, raw in enumerate(fh, start=1):
                line = raw.strip()
                if not line or line.startswith("#"):
                    continue
                if not header_seen:
                    cols = [c.strip().lower() for c in line.split(",")]
                    if cols[:2] != ["zeta_radps", "eps"]:
                        raise ValueError(
                            f"{path}:{lineno}: expected header 'zeta_radps,eps', got {line!r}"
                        )
                    header_seen = True
                    continue
                parts = line.split(",")
                if len(parts) < 2:
                    raise ValueError(f"{path}:{lineno}: malformed row {line!r}")
                try:
                    rows.append((float(parts[0]), float(parts[1])))
                except ValueError as exc:
                    raise ValueError(f"{path}:{lineno}: non-numeric row {line!r}") from exc
        if not header_seen:
            raise ValueError(f"{path}: missing 'zeta_radps,eps' header line")
        if len(rows) < 2:
            raise ValueError(f"{path}: table needs at least two data rows")
        data = np.array(rows)
        table = cls(data[:, 0], data[:, 1], label=label or path.stem, metallic=metallic)
        table.check_monotone(strict=require_monotone)
        return table

    def to_csv(self, path):
        path = Path(path)
        with path.open("w") as fh:
            fh.write("zeta_radps,eps\n")
            for z, e in zip(self.zeta_grid, self.eps_values):
                fh.write(f"{z:.10e},{e:.10e}\n")


@dataclass(frozen=True)
class Drude:
    """Drude metal.  Construct through :func:`drude_model` so that a zero
    relaxation frequency is re-tagged as :class:`Plasma` and the zero-mode
    classification cannot lie."""

    params: DrudeParams

    def __post_init__(self):
        if self.params.nu_ev == 0 and not self.params.temperature_dependent_nu:
            raise ValueError(
                "nu = 0 is the plasma model; build through drude_model(), "
                "which re-tags the degenerate case"
            )


@dataclass(frozen=True)
class Plasma:
    """Dissipationless plasma form eps = 1 + omega_p^2/zeta^2."""

    omega_p_ev: float

    def __post_init__(self):
        if self.omega_p_ev <= 0:
            raise ValueError(f"plasma frequency must be positive, got {self.omega_p_ev}")


@dataclass(frozen=True)
class ConstantDielectric:
    """Frequency-independent permittivity.  ``eps0 = 1`` is vacuum."""

    eps0: float

    def __post_init__(self):
        if self.eps0 < 1.0:
            raise ValueError(f"static permittivity must be >= 1, got {self.eps0}")


@dataclass(frozen=True)
class IdealMetal:
    """Perfect reflector for every mode, including the TE zero mode."""


@dataclass(frozen=True)
class ModifiedIdealMetal:
    """Perfect reflector except for a vanishing TE zero mode (A0=1, B0=0)."""


@dataclass(frozen=True)
class Tabulated:
    """Measured permittivity table with an out-of-grid extrapolation policy.

    With ``extrapolate`` enabled, queries below the grid follow a Drude-like
    1/zeta tail anchored at the lowest grid point and queries above it
    return eps = 1; otherwise out-of-grid queries raise.
    """

    table: MaterialTable
    extrapolate: bool = False


DispersionModel = Union[Drude, Plasma, ConstantDielectric, IdealMetal, ModifiedIdealMetal, Tabulated]


def drude_model(omega_p_ev, nu_ev, **kwargs) -> DispersionModel:
    """Build a Drude model, re-tagging the degenerate nu = 0 case as Plasma."""
    params = DrudeParams(omega_p_ev, nu_ev, **kwargs)
    if params.nu_ev == 0 and not params.temperature_dependent_nu:
        return Plasma(omega_p_ev)
    return Drude(params)


def drude_eps(zeta, params: DrudeParams, T=None, constants: PhysicalConstants = CODATA):
    """Drude permittivity 1 + omega_p^2/(zeta*(zeta+nu)) at imaginary frequency.

    Parameters
    ----------
    zeta : float or ndarray
        Imaginary frequency in rad/s, strictly positive (the zero mode is
        handled analytically, never by direct evaluation).
    params : DrudeParams
    T : float, optional
        Temperature in K; only used when ``temperature_dependent_nu`` is set.
    """
    zeta = np.asarray(zeta, dtype=float)
    if np.any(zeta <= 0):
        raise ValueError("zeta must be positive; the zero mode has its own limit")
    wp = params.omega_p_ev * constants.ev_to_radps
    nu = params.effective_nu_ev(T) * constants.ev_to_radps
    out = 1.0 + wp * wp / (zeta * (zeta + nu))
    return out if out.ndim else float(out)


@functools.lru_cache(maxsize=256)
def _bg_integral(upper):
    # integrand x^5 e^x/(e^x-1)^2 in the overflow-safe form x^5 e^-x/(1-e^-x)^2,
    # with the x^3 limiting form below 1e-4 to avoid 0/0
    def f(x):
        if x < 1.0e-4:
            return x**3 * (1.0 - x * x / 12.0)
        em = math.expm1(-x)
        return x**5 * math.exp(-x) / (em * em)

    pieces = [0.0]
    for cut in (1.0, 10.0, 50.0):
        if upper > cut:
            pieces.append(cut)
    pieces.append(upper)
    total = 0.0
    for lo, hi in zip(pieces[:-1], pieces[1:]):
        val, _ = quad(f, lo, hi, epsrel=1.0e-10, epsabs=0.0, limit=200)
        total += val
    return total


def bloch_gruneisen_nu(T, theta, coeff_ev):
    """Temperature-dependent relaxation frequency in eV.

    Evaluates coeff * (T/theta)^5 * integral_0^{theta/T} x^5 e^x/(e^x-1)^2 dx
    to a relative accuracy of 1e-8 or better.
    """
    if T <= 0:
        raise ValueError(f"temperature must be positive, got {T}")
    if theta <= 0:
        raise ValueError(f"Debye temperature must be positive, got {theta}")
    return coeff_ev * (T / theta) ** 5 * _bg_integral(theta / T)


def tabulated_eps(zeta, table: MaterialTable, extrapolate=False):
    """Log-log interpolation of eps - 1 between the bracketing grid points.

    Interpolating eps - 1 rather than eps preserves the power-law approach
    to unity at high frequency.  Out-of-grid queries raise unless
    ``extrapolate`` requests the 1/zeta tail below and eps = 1 above.
    """
    zeta_arr = np.asarray(zeta, dtype=float)
    scalar = zeta_arr.ndim == 0
    zeta_arr = np.atleast_1d(zeta_arr)
    if np.any(zeta_arr <= 0):
        raise ValueError("zeta must be positive")
    lo, hi = table.zeta_grid[0], table.zeta_grid[-1]
    below = zeta_arr < lo
    above = zeta_arr > hi
    if not extrapolate and (below.any() or above.any()):
        bad = zeta_arr[below | above][0]
        raise ValueError(
            f"zeta = {bad:.6g} rad/s outside table {table.label!r} range "
            f"[{lo:.6g}, {hi:.6g}] and no extrapolation policy is enabled"
        )
    # floor keeps log finite if a table row has eps exactly 1
    em1 = np.maximum(table.eps_values - 1.0, 1.0e-300)
    logz = np.log(np.clip(zeta_arr, lo, hi))
    out = 1.0 + np.exp(np.interp(logz, np.log(table.zeta_grid), np.log(em1)))
    if below.any():
        out[below] = 1.0 + em1[0] * lo / zeta_arr[below]
    if above.any():
        out[above] = 1.0
    return float(out[0]) if scalar else out


def eps_at(model: DispersionModel, zeta, T=None, constants: PhysicalConstants = CODATA):
    """Evaluate eps(i*zeta) for any finite-permittivity model (rad/s input)."""
    if isinstance(model, Drude):
        return drude_eps(zeta, model.params, T=T, constants=constants)
    if isinstance(model, Plasma):
        zeta = np.asarray(zeta, dtype=float)
        if np.any(zeta <= 0):
            raise ValueError("zeta must be positive; the zero mode has its own limit")
        wp = model.omega_p_ev * constants.ev_to_radps
        # same operation order as the nu = 0 Drude form, so the two agree exactly
        out = 1.0 + wp * wp / (zeta * zeta)
        return out if out.ndim else float(out)
    if isinstance(model, ConstantDielectric):
        zeta = np.asarray(zeta, dtype=float)
        if np.any(zeta <= 0):
            raise ValueError("zeta must be positive; the zero mode has its own limit")
        out = np.full_like(zeta, model.eps0)
        return out if out.ndim else float(out)
    if isinstance(model, Tabulated):
        return tabulated_eps(zeta, model.table, extrapolate=model.extrapolate)
    if isinstance(model, (IdealMetal, ModifiedIdealMetal)):
        raise TypeError(f"{type(model).__name__} bypasses the permittivity entirely")
    raise TypeError(f"not a dispersion model: {model!r}")


@dataclass(frozen=True)
class ZeroModeBehavior:
    """Static-limit TE classification: ``kind`` is one of 'vanishes',
    'finite' (with the limit L in rad^2/s^2) or 'ideal'."""

    kind: str
    limit_rad2ps2: float = 0.0


def zero_mode_class(model: DispersionModel, constants: PhysicalConstants = CODATA) -> ZeroModeBehavior:
    """Classify lim zeta^2*(eps-1) as zeta -> 0, deciding the TE zero mode."""
    if isinstance(model, (Drude, ConstantDielectric, Tabulated)):
        return ZeroModeBehavior("vanishes")
    if isinstance(model, Plasma):
        wp = model.omega_p_ev * constants.ev_to_radps
        return ZeroModeBehavior("finite", wp * wp)
    if isinstance(model, IdealMetal):
        return ZeroModeBehavior("ideal", math.inf)
    if isinstance(model, ModifiedIdealMetal):
        # vanishing TE zero mode by definition of the model
        return ZeroModeBehavior("vanishes")
    raise TypeError(f"not a dispersion model: {model!r}")
