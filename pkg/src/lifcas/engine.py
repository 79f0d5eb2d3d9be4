"""Free energy per unit area for parallel plates and the sphere-plate force.

The free energy per area is the primed Matsubara sum

    F(a) = k_B*T/(2*pi*a^2) * [ I_0/2 + sum_{m>=1} I_m ],

    I_m = integral_{m*gamma}^inf y dy [ ln(1 - r_TM e^{-2y}) + ln(1 - r_TE e^{-2y}) ],

with r the product of the two single-interface coefficients, and the
sphere-plate force follows from the proximity force theorem as
2*pi*R*F(a).  Terms are evaluated by the selected kernel backend in
ascending blocks, accumulated with compensated summation, and the sum is
truncated once a geometric-tail extrapolation over the last decade of
terms drops below the requested relative tolerance.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.special import zeta as _riemann_zeta

from . import backend
from ._gknodes import (
    MIN_WIDTH,
    RETIRE_FRACTION,
    TINY,
    WG7,
    WK15,
    XK15,
    integration_extent,
)
from .constants import CODATA, PhysicalConstants, dimensionless_gamma
from .dispersion import DispersionModel, IdealMetal, ModifiedIdealMetal, eps_at, zero_mode_class
from .reflection import zero_mode_deltas, deltas_at, LifshitzPoint, zero_mode_tm_limit

__all__ = [
    "ThermalGeometry",
    "ForceResult",
    "ProximityValidityWarning",
    "SummationError",
    "QuadratureError",
    "matsubara_integrand",
    "matsubara_term",
    "free_energy_area",
    "sphere_plate_force",
    "mim_m0_force",
    "zero_T_free_energy_area",
]

APERY = float(_riemann_zeta(3.0))

#: m summation hard cap guarding pathological inputs.
DEFAULT_TERM_CAP = 1_000_000

_BLOCK_SIZES = (16, 16, 32, 64, 128, 256, 512, 1024, 2048)


class ProximityValidityWarning(UserWarning):
    """a/R has grown beyond the few-percent regime of the proximity theorem."""


class SummationError(RuntimeError):
    """The Matsubara sum failed to truncate within the configured term cap."""


class QuadratureError(RuntimeError):
    """An inner integral did not reach its requested accuracy."""


@dataclass(frozen=True)
class ThermalGeometry:
    """Gap ``a`` (m), temperature ``T`` (K) and optional sphere radius ``R`` (m)."""

    a: float
    T: float
    R: Optional[float] = None

    def __post_init__(self):
        if self.a <= 0:
            raise ValueError(f"gap must be positive, got {self.a}")
        if self.T <= 0:
            raise ValueError(f"temperature must be positive, got {self.T}")
        if self.R is not None:
            if self.R <= 0:
                raise ValueError(f"sphere radius must be positive, got {self.R}")
            if self.a / self.R >= 0.05:
                warnings.warn(
                    f"a/R = {self.a / self.R:.3g}: the proximity force theorem "
                    "degrades once the gap exceeds a few percent of the radius",
                    ProximityValidityWarning,
                    stacklevel=3,
                )

    @property
    def gamma(self):
        return dimensionless_gamma(self.a, self.T)


@dataclass(frozen=True)
class ForceResult:
    """Value with convergence diagnostics.

    ``per_mode_breakdown`` has one row (m, TM part, TE part) per Matsubara
    index, in the same units as ``value``; the rows sum to ``value``.
    """

    value: float
    terms_used: int
    tail_estimate: float
    per_mode_breakdown: np.ndarray

    def __post_init__(self):
        self.per_mode_breakdown.setflags(write=False)


def _eps_block(model, zeta, T, constants):
    """(perfect_flag, eps array) for a kernel call at frequencies ``zeta``."""
    if isinstance(model, (IdealMetal, ModifiedIdealMetal)):
        return 1, np.ones_like(zeta)
    eps = np.asarray(eps_at(model, zeta, T=T, constants=constants), dtype=float)
    return 0, eps


_TE_KIND_CODE = {"vanishes": 0, "finite": 1, "ideal": 2}


def _zero_mode_args(model, a, constants):
    """Kernel arguments (dtm, te_kind, dimensionless TE limit) for m = 0."""
    zm = zero_mode_class(model, constants=constants)
    kind = _TE_KIND_CODE[zm.kind]
    lt = 0.0
    if kind == 1:
        lt = zm.limit_rad2ps2 * (a / constants.c) ** 2
    return zero_mode_tm_limit(model), kind, lt


def matsubara_integrand(y, m, geom: ThermalGeometry, mat1: DispersionModel,
                        mat2: DispersionModel, constants: PhysicalConstants = CODATA):
    """Reference integrand y*[ln(1-r_TM e^{-2y}) + ln(1-r_TE e^{-2y})].

    Built directly on the reflection module; the kernel backends implement
    the same expression in compiled form.  Accepts scalar or array ``y``.
    """
    y_arr = np.atleast_1d(np.asarray(y, dtype=float))
    out = np.empty_like(y_arr)
    for i, yi in enumerate(y_arr):
        if m == 0:
            pair1 = zero_mode_deltas(yi / geom.a, mat1, constants=constants)
            pair2 = zero_mode_deltas(yi / geom.a, mat2, constants=constants)
        else:
            pt = LifshitzPoint(m, yi, geom.a, geom.T)
            pair1 = deltas_at(pt, mat1, constants=constants)
            pair2 = deltas_at(pt, mat2, constants=constants)
        damp = math.exp(-2.0 * yi)
        out[i] = yi * (
            math.log1p(-pair1.delta_tm * pair2.delta_tm * damp)
            + math.log1p(-pair1.delta_te * pair2.delta_te * damp)
        )
    return float(out[0]) if np.ndim(y) == 0 else out


def _term_parts(m, geom, mat1, mat2, quad_tol, constants, floor=0.0):
    ker = backend.kernels()
    W = integration_extent(quad_tol)
    if m == 0:
        dtm1, tek1, lt1 = _zero_mode_args(mat1, geom.a, constants)
        dtm2, tek2, lt2 = _zero_mode_args(mat2, geom.a, constants)
        return ker.zero_mode_term(dtm1, dtm2, tek1, lt1, tek2, lt2, quad_tol, W, floor)
    zs = np.array([m * geom.gamma])
    zeta = zs * constants.c / geom.a
    p1, e1 = _eps_block(mat1, zeta, geom.T, constants)
    p2, e2 = _eps_block(mat2, zeta, geom.T, constants)
    tm, te, err = ker.finite_m_batch(zs, e1, e2, p1, p2, quad_tol, W, floor)
    return tm[0], te[0], err[0]


def matsubara_term(m, geom: ThermalGeometry, mat1: DispersionModel, mat2: DispersionModel,
                   quad_tol=1.0e-10, constants: PhysicalConstants = CODATA):
    """Single inner integral I_m (dimensionless; m = 0 carries full weight here)."""
    if m < 0:
        raise ValueError("Matsubara index must be non-negative")
    tm, te, err = _term_parts(m, geom, mat1, mat2, quad_tol, constants)
    val = tm + te
    if err > 50.0 * quad_tol * abs(val) and err > 1.0e-280:
        raise QuadratureError(
            f"inner quadrature for m={m} reached error {err:.3e} on |I|={abs(val):.3e}"
        )
    return val


def _tail_estimate(terms, M):
    """Geometric extrapolation of the remainder from the last decade of terms."""
    t_last = abs(terms[M])
    if t_last == 0.0:
        return 0.0
    m_ref = max(1, int(0.9 * M))
    if m_ref >= M:
        return math.inf
    t_ref = abs(terms[m_ref])
    if t_ref <= t_last:
        return math.inf
    rho = (t_last / t_ref) ** (1.0 / (M - m_ref))
    if rho >= 1.0:
        return math.inf
    return t_last * rho / (1.0 - rho)


def free_energy_area(geom: ThermalGeometry, mat1: DispersionModel, mat2: DispersionModel,
                     tol=1.0e-8, max_terms=DEFAULT_TERM_CAP, min_terms=0,
                     constants: PhysicalConstants = CODATA) -> ForceResult:
    """Surface free energy per unit area of the parallel-plate system, J/m^2.

    Parameters
    ----------
    geom : ThermalGeometry
        Gap and temperature (the radius, if present, is ignored here).
    mat1, mat2 : DispersionModel
        The two half-space materials; they may differ.
    tol : float
        Relative truncation tolerance of the Matsubara sum.
    max_terms, min_terms : int
        Hard cap and forced minimum for the number of m >= 1 terms.
    """
    quad_tol = max(0.05 * tol, 1.0e-13)
    ker = backend.kernels()
    W = integration_extent(quad_tol)
    gamma = geom.gamma

    dtm1, tek1, lt1 = _zero_mode_args(mat1, geom.a, constants)
    dtm2, tek2, lt2 = _zero_mode_args(mat2, geom.a, constants)
    t0_tm, t0_te, t0_err = ker.zero_mode_term(dtm1, dtm2, tek1, lt1, tek2, lt2, quad_tol, W)

    tm_terms = [t0_tm]
    te_terms = [t0_te]
    totals = [0.5 * (t0_tm + t0_te)]
    err_sum = 0.5 * t0_err

    # compensated (Kahan) accumulation in ascending m order
    acc = totals[0]
    comp = 0.0

    perfect1 = isinstance(mat1, (IdealMetal, ModifiedIdealMetal))
    perfect2 = isinstance(mat2, (IdealMetal, ModifiedIdealMetal))

    tail = math.inf
    m_next = 1
    block_idx = 0
    converged = False
    while not converged:
        if m_next > max_terms:
            raise SummationError(
                f"Matsubara sum not converged after {max_terms} terms "
                f"(tail estimate {tail:.3e} vs tolerance {tol:.1e} on |S|={abs(acc):.3e})"
            )
        size = _BLOCK_SIZES[min(block_idx, len(_BLOCK_SIZES) - 1)]
        block_idx += 1
        count = min(size, max_terms - m_next + 1)
        ms = np.arange(m_next, m_next + count)
        zs = ms * gamma
        zeta = ms * (2.0 * math.pi * constants.k_B * geom.T / constants.hbar)
        if perfect1:
            e1 = np.ones(count)
        else:
            e1 = np.asarray(eps_at(mat1, zeta, T=geom.T, constants=constants), dtype=float)
        if perfect2:
            e2 = np.ones(count)
        else:
            e2 = np.asarray(eps_at(mat2, zeta, T=geom.T, constants=constants), dtype=float)
        floor = tol * abs(acc)
        tms, tes, errs = ker.finite_m_batch(zs, e1, e2, int(perfect1), int(perfect2),
                                            quad_tol, W, floor)
        for i in range(count):
            t = tms[i] + tes[i]
            tm_terms.append(tms[i])
            te_terms.append(tes[i])
            totals.append(t)
            yk = t - comp
            tk = acc + yk
            comp = (tk - acc) - yk
            acc = tk
        err_sum += float(np.sum(errs))
        m_next += count
        M = m_next - 1
        if M >= max(8, min_terms):
            tail = _tail_estimate(totals, M)
            if tail <= tol * abs(acc) or (tail == 0.0 and acc == 0.0):
                converged = True

    prefac = constants.k_B * geom.T / (2.0 * math.pi * geom.a * geom.a)
    value = prefac * acc
    if err_sum * prefac > 0.5 * tol * abs(value) and abs(value) > 0:
        warnings.warn(
            f"accumulated quadrature error {err_sum * prefac:.3e} is a sizable "
            f"fraction of the truncation budget for |F|={abs(value):.3e}",
            stacklevel=2,
        )
    n_terms = len(totals)
    breakdown = np.empty((n_terms, 3))
    breakdown[:, 0] = np.arange(n_terms)
    breakdown[:, 1] = np.asarray(tm_terms) * prefac
    breakdown[:, 2] = np.asarray(te_terms) * prefac
    breakdown[0, 1:] *= 0.5
    return ForceResult(
        value=value,
        terms_used=n_terms,
        tail_estimate=-prefac * tail,
        per_mode_breakdown=breakdown,
    )


def sphere_plate_force(geom: ThermalGeometry, mat1: DispersionModel, mat2: DispersionModel,
                       tol=1.0e-8, max_terms=DEFAULT_TERM_CAP, min_terms=0,
                       constants: PhysicalConstants = CODATA) -> ForceResult:
    """Sphere-plate force 2*pi*R*F(a) in N (negative = attractive)."""
    if geom.R is None:
        raise ValueError("sphere_plate_force needs a geometry with a sphere radius")
    per_area = free_energy_area(geom, mat1, mat2, tol=tol, max_terms=max_terms,
                                min_terms=min_terms, constants=constants)
    scale = 2.0 * math.pi * geom.R
    return ForceResult(
        value=scale * per_area.value,
        terms_used=per_area.terms_used,
        tail_estimate=scale * per_area.tail_estimate,
        per_mode_breakdown=per_area.per_mode_breakdown * np.array([1.0, scale, scale]),
    )


def mim_m0_force(geom: ThermalGeometry, constants: PhysicalConstants = CODATA):
    """Closed-form zero-mode force -zeta(3)/8 * R*k_B*T/a^2 of the modified ideal metal."""
    if geom.R is None:
        raise ValueError("mim_m0_force needs a geometry with a sphere radius")
    return -APERY / 8.0 * geom.R * constants.k_B * geom.T / (geom.a * geom.a)


_ZT_SEED = np.array([0.0, 1.0e-6, 1.0e-4, 1.0e-2, 0.1, 0.5, 1.0, 2.0, 3.0, 4.0, 6.0, 8.0,
                     12.0, 16.0, 20.0])
_ZT_ZMAX = 20.0
_ZT_ROUNDS = 48
_ZT_CAP = 4096


def zero_T_free_energy_area(a, mat1: DispersionModel, mat2: DispersionModel,
                            tol=1.0e-8, constants: PhysicalConstants = CODATA):
    """T -> 0 limit of the free energy per area: the continuum frequency integral.

    Replaces the Matsubara sum by hbar*c/(4*pi^2*a^3) * integral_0^inf I(z) dz
    with z the gap-scaled imaginary frequency; the outer integral is done
    by the same adaptive Gauss-Kronrod refinement on a log-seeded grid.
    Serves as the independent oracle for low-temperature sums.
    """
    if a <= 0:
        raise ValueError(f"gap must be positive, got {a}")
    ker = backend.kernels()
    inner_tol = max(0.02 * tol, 1.0e-13)
    W_inner = integration_extent(inner_tol)
    perfect1 = isinstance(mat1, (IdealMetal, ModifiedIdealMetal))
    perfect2 = isinstance(mat2, (IdealMetal, ModifiedIdealMetal))

    def inner_values(z_nodes):
        zeta = z_nodes * constants.c / a
        if perfect1:
            e1 = np.ones_like(z_nodes)
        else:
            e1 = np.asarray(eps_at(mat1, zeta, constants=constants), dtype=float)
        if perfect2:
            e2 = np.ones_like(z_nodes)
        else:
            e2 = np.asarray(eps_at(mat2, zeta, constants=constants), dtype=float)
        tm, te, err = ker.finite_m_batch(z_nodes, e1, e2, int(perfect1), int(perfect2),
                                         inner_tol, W_inner)
        return tm + te, err

    def eval_panels(lo, hi):
        half = 0.5 * (hi - lo)
        nodes = (0.5 * (hi + lo))[:, None] + half[:, None] * XK15
        flat = nodes.ravel()
        iv, ierr = inner_values(flat)
        iv = iv.reshape(nodes.shape)
        ierr = ierr.reshape(nodes.shape)
        v = half * (iv * WK15).sum(axis=1)
        g = half * (iv * WG7).sum(axis=1)
        err = np.abs(v - g) + half * (ierr * WK15).sum(axis=1)
        return v, err

    lo = _ZT_SEED[:-1].copy()
    hi = _ZT_SEED[1:].copy()
    val, err = eval_panels(lo, hi)
    retired = 0.0
    retired_err = 0.0
    for _ in range(_ZT_ROUNDS):
        if lo.size == 0:
            break
        mag = max(abs(retired + float(val.sum())), TINY)
        width = hi - lo
        budget = RETIRE_FRACTION * tol * mag * width / _ZT_ZMAX
        retire = (err <= budget) | (width <= MIN_WIDTH)
        if lo.size > _ZT_CAP:
            retire = np.ones_like(retire)
        retired += float(val[retire].sum())
        retired_err += float(err[retire].sum())
        split = ~retire
        if not split.any():
            lo = lo[:0]
            break
        slo, shi = lo[split], hi[split]
        mid = 0.5 * (slo + shi)
        n = slo.size
        lo = np.empty(2 * n)
        hi = np.empty(2 * n)
        lo[0::2], hi[0::2] = slo, mid
        lo[1::2], hi[1::2] = mid, shi
        val, err = eval_panels(lo, hi)
    if lo.size:
        retired += float(val.sum())
        retired_err += float(err.sum())
    value = constants.hbar * constants.c / (4.0 * math.pi**2 * a**3) * retired
    err_scaled = constants.hbar * constants.c / (4.0 * math.pi**2 * a**3) * retired_err
    if err_scaled > 10.0 * tol * abs(value) and err_scaled > 1.0e-280:
        raise QuadratureError(
            f"frequency integral reached error {err_scaled:.3e} on |F|={abs(value):.3e}"
        )
    return value
