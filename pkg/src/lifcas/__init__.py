"""Finite-temperature Casimir forces from the Lifshitz formula.

Sphere-plate forces via the proximity force theorem, parallel-plate free
energies, realistic metallic dispersion on the imaginary frequency axis,
and thermodynamic diagnostics (entropy, Nernst-limit behaviour, the
anisotropic polarizable pair).
"""

from importlib import resources as _resources

from .constants import (
    CODATA,
    EXACT,
    PhysicalConstants,
    dimensionless_gamma,
    ev_to_angular_frequency,
    matsubara_frequency,
)
from .dispersion import (
    ConstantDielectric,
    DispersionModel,
    Drude,
    DrudeParams,
    IdealMetal,
    MaterialTable,
    ModifiedIdealMetal,
    Plasma,
    Tabulated,
    ZeroModeBehavior,
    bloch_gruneisen_nu,
    drude_eps,
    drude_model,
    eps_at,
    tabulated_eps,
    zero_mode_class,
)
from .reflection import (
    LifshitzPoint,
    ReflectionPair,
    delta_te_from_impedance,
    deltas_at,
    mim_coefficients,
    surface_impedance_te,
    zero_mode_deltas,
)
from .engine import (
    ForceResult,
    ProximityValidityWarning,
    QuadratureError,
    SummationError,
    ThermalGeometry,
    free_energy_area,
    matsubara_integrand,
    matsubara_term,
    mim_m0_force,
    sphere_plate_force,
    zero_T_free_energy_area,
)
from .thermo import (
    EntropyCurve,
    NonmonotonicResult,
    SweepSpec,
    classical_limit_ratio,
    entropy_area,
    entropy_curve,
    evaluate_sweep,
    force_difference,
    nonmonotonic_check,
)
from .aniso import AnisoPairConfig, pair_entropy, pair_free_energy, tau
from . import backend

__version__ = "0.1.0"


def data_path(name):
    """Filesystem path of a material file shipped with the package."""
    return _resources.files(__name__).joinpath("data", name)
