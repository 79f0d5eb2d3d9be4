"""Thermodynamic post-processing of the force engine.

Force differences between temperatures, the entropy per unit area from
numerical differentiation of the free energy, the high-temperature
plasma/Drude comparison, and the constant-permittivity non-monotonicity
scan.  Entropy runs tighten the engine tolerance to 1e-10 so that the
differencing noise stays below the signal.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ._differentiate import central_derivative
from .constants import CODATA, PhysicalConstants
from .dispersion import ConstantDielectric, DispersionModel, Drude, DrudeParams, Plasma
from .engine import ThermalGeometry, free_energy_area, sphere_plate_force

__all__ = [
    "SweepSpec",
    "EntropyCurve",
    "NonmonotonicResult",
    "force_difference",
    "entropy_area",
    "entropy_curve",
    "classical_limit_ratio",
    "nonmonotonic_check",
    "evaluate_sweep",
]

#: Engine tolerance used for entropy differentiation.
ENTROPY_ENGINE_TOL = 1.0e-10


@dataclass(frozen=True)
class SweepSpec:
    """Grid over one variable ('gap' or 'temperature') with the rest fixed."""

    variable: str
    grid: np.ndarray
    a: Optional[float] = None
    T: Optional[float] = None
    R: Optional[float] = None

    def __post_init__(self):
        if self.variable not in ("gap", "temperature"):
            raise ValueError(f"unknown sweep variable {self.variable!r}")
        grid = np.asarray(self.grid, dtype=float)
        if grid.size == 0:
            raise ValueError("sweep grid is empty")
        if grid.size > 1 and not np.all(np.diff(grid) > 0):
            raise ValueError("sweep grid must be strictly increasing")
        grid = grid.copy()
        grid.setflags(write=False)
        object.__setattr__(self, "grid", grid)
        if self.variable == "gap" and self.T is None:
            raise ValueError("gap sweep needs a fixed temperature")
        if self.variable == "temperature" and self.a is None:
            raise ValueError("temperature sweep needs a fixed gap")

    def geometries(self):
        for x in self.grid:
            if self.variable == "gap":
                yield ThermalGeometry(float(x), self.T, self.R)
            else:
                yield ThermalGeometry(self.a, float(x), self.R)


def evaluate_sweep(spec: SweepSpec, mat1: DispersionModel, mat2: DispersionModel,
                   tol=1.0e-8, constants: PhysicalConstants = CODATA):
    """Engine results over the sweep grid, in grid order."""
    results = []
    for geom in spec.geometries():
        if geom.R is not None:
            results.append(sphere_plate_force(geom, mat1, mat2, tol=tol, constants=constants))
        else:
            results.append(free_energy_area(geom, mat1, mat2, tol=tol, constants=constants))
    return results


def force_difference(a, R, mat1: DispersionModel, mat2: DispersionModel,
                     T_low, T_high, tol=1.0e-8, constants: PhysicalConstants = CODATA):
    """|F(T_low)| - |F(T_high)| between sphere and plate, in N."""
    if not 0 < T_low <= T_high:
        raise ValueError("need 0 < T_low <= T_high")
    f_low = sphere_plate_force(ThermalGeometry(a, T_low, R), mat1, mat2, tol=tol,
                               constants=constants)
    if T_low == T_high:
        return 0.0
    f_high = sphere_plate_force(ThermalGeometry(a, T_high, R), mat1, mat2, tol=tol,
                                constants=constants)
    return abs(f_low.value) - abs(f_high.value)


def default_entropy_step(T):
    """Differencing step max(0.05*T, 0.05 K), clipped to keep T - h positive."""
    return min(max(0.05 * T, 0.05), 0.5 * T)


def _entropy_estimate(f_area, T, step):
    est = central_derivative(f_area, T, step)
    return est


def entropy_area(a, mat1: DispersionModel, mat2: DispersionModel, T, step=None,
                 tol=ENTROPY_ENGINE_TOL, constants: PhysicalConstants = CODATA):
    """Entropy per unit area S = -dF/dT in J/(K m^2) at temperature ``T``."""
    if T <= 0:
        raise ValueError("temperature must be positive")
    h = default_entropy_step(T) if step is None else step
    if T - h <= 0:
        raise ValueError(f"step {h} too large for T = {T}")

    def f_area(t):
        return free_energy_area(ThermalGeometry(a, t), mat1, mat2, tol=tol,
                                constants=constants).value

    est = _entropy_estimate(f_area, T, h)
    s = -est.value
    if est.noise_limited and est.error > 0.05 * abs(s):
        warnings.warn(
            f"entropy at T={T} K is noise-limited: error {est.error:.3e} on |S|={abs(s):.3e}",
            stacklevel=2,
        )
    return s


@dataclass(frozen=True)
class EntropyCurve:
    """Entropy per area over a temperature grid with differentiation diagnostics."""

    temperatures: np.ndarray
    entropy: np.ndarray
    steps: np.ndarray
    errors: np.ndarray
    noise_flags: np.ndarray

    def __post_init__(self):
        for arr in (self.temperatures, self.entropy, self.steps, self.errors, self.noise_flags):
            arr.setflags(write=False)


def entropy_curve(a, mat1: DispersionModel, mat2: DispersionModel, temperatures,
                  tol=ENTROPY_ENGINE_TOL, constants: PhysicalConstants = CODATA) -> EntropyCurve:
    temps = np.asarray(temperatures, dtype=float)
    s = np.empty_like(temps)
    steps = np.empty_like(temps)
    errors = np.empty_like(temps)
    flags = np.zeros(temps.shape, dtype=bool)

    def f_area(t):
        return free_energy_area(ThermalGeometry(a, t), mat1, mat2, tol=tol,
                                constants=constants).value

    for i, T in enumerate(temps):
        est = _entropy_estimate(f_area, T, default_entropy_step(T))
        s[i] = -est.value
        steps[i] = est.step
        errors[i] = est.error
        flags[i] = est.noise_limited and est.error > 0.05 * abs(est.value)
    return EntropyCurve(temps, s, steps, errors, flags)


def classical_limit_ratio(a, T, drude: DrudeParams, tol=1.0e-8,
                          constants: PhysicalConstants = CODATA):
    """Plasma-to-Drude free-energy ratio at (a, T); tends to 2 at high aT.

    The plasma model keeps a TE zero mode that the dissipative metal loses,
    so once the m = 0 term dominates and the zero-mode reflection is
    ideal-like (omega_p*a/c >> 1) the free energy doubles.
    """
    plasma = Plasma(drude.omega_p_ev)
    metal = Drude(drude)
    geom = ThermalGeometry(a, T)
    f_plasma = free_energy_area(geom, plasma, plasma, tol=tol, constants=constants).value
    f_drude = free_energy_area(geom, metal, metal, tol=tol, constants=constants).value
    return f_plasma / f_drude


@dataclass(frozen=True)
class NonmonotonicResult:
    monotone: bool
    interval: Optional[tuple] = None


def nonmonotonic_check(eps0, a, T_grid, tol=1.0e-8,
                       constants: PhysicalConstants = CODATA) -> NonmonotonicResult:
    """Scan |F(T)| for constant-permittivity plates for a decreasing interval.

    Decreases smaller than a few engine tolerances are treated as noise.
    """
    if eps0 <= 1.0:
        raise ValueError("constant permittivity must exceed 1")
    temps = np.asarray(T_grid, dtype=float)
    if temps.size < 3 or not np.all(np.diff(temps) > 0):
        raise ValueError("need a strictly increasing grid of at least 3 temperatures")
    model = ConstantDielectric(eps0)
    mags = np.array([
        abs(free_energy_area(ThermalGeometry(a, float(T)), model, model, tol=tol,
                             constants=constants).value)
        for T in temps
    ])
    rel_drop = np.diff(mags) / np.maximum(mags[:-1], 1.0e-300)
    decreasing = rel_drop < -10.0 * tol
    if not decreasing.any():
        return NonmonotonicResult(True)
    idx = np.nonzero(decreasing)[0]
    first, last = idx[0], idx[-1]
    return NonmonotonicResult(False, (float(temps[first]), float(temps[last + 1])))
