"""Command-line front end: material parsing, runs, CSV output.

Subcommands: ``force`` (single sphere-plate point), ``sweep`` (gap or
temperature grid), ``diff`` (force difference between two temperatures),
``entropy`` (plate-plate entropy per area over a temperature grid),
``aniso`` (anisotropic pair free energy/entropy) and ``epsilon``
(permittivity dump for model inspection).

Materials are given either as a path to a ``key = value`` config file or
as an inline ``"model=... key=value ..."`` string.  Lengths accept nm, um,
mm, m suffixes; temperatures accept a trailing K.  Output is CSV with a
header row naming columns and units, floats printed with 10 significant
digits; rows are flushed as they complete.  Exit codes: 0 success,
1 configuration error, 2 numerical failure.

``LIFCAS_NUMBA=0`` selects the pure-numpy kernels; ``LIFCAS_THREADS``
requests a numba thread count (clamped to what the runtime allows).
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from . import backend
from .aniso import AnisoPairConfig, pair_entropy, pair_free_energy
from .constants import CODATA
from .dispersion import (
    ConstantDielectric,
    DispersionModel,
    IdealMetal,
    MaterialTable,
    ModifiedIdealMetal,
    Plasma,
    Tabulated,
    drude_model,
    eps_at,
)
from .engine import (
    QuadratureError,
    SummationError,
    ThermalGeometry,
    free_energy_area,
    sphere_plate_force,
)
from .thermo import entropy_curve

__all__ = ["RunConfig", "ConfigError", "parse_material", "parse_length", "parse_temperature", "main"]


class ConfigError(ValueError):
    """Invalid command line, config file or unit string."""


_LENGTH_SUFFIXES = (("nm", 1.0e-9), ("um", 1.0e-6), ("µm", 1.0e-6), ("mm", 1.0e-3), ("m", 1.0))


def parse_length(text):
    """Length in metres from strings like '200nm', '0.2um', '2e-7m'."""
    s = str(text).strip()
    for suffix, scale in _LENGTH_SUFFIXES:
        if s.endswith(suffix):
            try:
                value = float(s[: -len(suffix)])
            except ValueError:
                raise ConfigError(f"cannot parse length {text!r}") from None
            break
    else:
        raise ConfigError(f"length {text!r} needs a unit suffix (nm/um/mm/m)")
    if value <= 0:
        raise ConfigError(f"length must be positive, got {text!r}")
    return value * scale


def parse_temperature(text):
    """Temperature in kelvin from '300K' or '300'."""
    s = str(text).strip()
    if s.endswith("K"):
        s = s[:-1]
    try:
        value = float(s)
    except ValueError:
        raise ConfigError(f"cannot parse temperature {text!r}") from None
    if value <= 0:
        raise ConfigError(f"temperature must be positive, got {text!r}")
    return value


def _parse_bool(text, key):
    s = str(text).strip().lower()
    if s in ("1", "true", "yes", "on"):
        return True
    if s in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"cannot parse boolean {key}={text!r}")


def _material_pairs(spec):
    """key/value pairs from a config file path or an inline spec string."""
    path = Path(spec)
    if path.is_file():
        lines = path.read_text().splitlines()
        base = path.parent
    elif "=" in spec:
        lines = spec.split()
        base = Path.cwd()
    else:
        raise ConfigError(f"material spec {spec!r} is neither an existing file nor inline key=value")
    pairs = {}
    for raw in lines:
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"malformed material line {line!r} (expected key = value)")
        key, _, value = line.partition("=")
        key = key.strip().lower()
        value = value.strip()
        if key in pairs:
            raise ConfigError(f"duplicate material key {key!r}")
        pairs[key] = value
    return pairs, base


def _take_float(pairs, key, required=False):
    if key not in pairs:
        if required:
            raise ConfigError(f"material spec is missing required key {key!r}")
        return None
    try:
        return float(pairs.pop(key))
    except ValueError:
        raise ConfigError(f"non-numeric value for material key {key!r}") from None


def parse_material(spec) -> DispersionModel:
    """Build a dispersion model from a file path or inline spec.

    Recognized models: drude (omega_p_ev, nu_ev, optional temperature
    dependence keys), plasma (omega_p_ev), constant (eps0), ideal, mim,
    tabulated (table=CSV path, metallic, extrapolate, require_monotone).
    """
    pairs, base = _material_pairs(str(spec))
    model = pairs.pop("model", None)
    if model is None:
        raise ConfigError("material spec has no 'model' key")
    model = model.lower()
    try:
        if model == "drude":
            kwargs = {}
            if "temperature_dependent_nu" in pairs:
                kwargs["temperature_dependent_nu"] = _parse_bool(
                    pairs.pop("temperature_dependent_nu"), "temperature_dependent_nu"
                )
            for key, name in (("debye_theta_k", "debye_theta_k"),
                              ("bg_coeff_ev", "bg_coeff_ev"),
                              ("nu_impurity_ev", "nu_impurity_ev")):
                val = _take_float(pairs, key)
                if val is not None:
                    kwargs[name] = val
            out = drude_model(_take_float(pairs, "omega_p_ev", required=True),
                              _take_float(pairs, "nu_ev", required=True), **kwargs)
        elif model == "plasma":
            out = Plasma(_take_float(pairs, "omega_p_ev", required=True))
        elif model == "constant":
            out = ConstantDielectric(_take_float(pairs, "eps0", required=True))
        elif model == "ideal":
            out = IdealMetal()
        elif model == "mim":
            out = ModifiedIdealMetal()
        elif model == "tabulated":
            table_ref = pairs.pop("table", None)
            if table_ref is None:
                raise ConfigError("tabulated material needs a 'table' CSV path")
            table_path = Path(table_ref)
            if not table_path.is_absolute():
                table_path = base / table_path
            metallic = _parse_bool(pairs.pop("metallic", "true"), "metallic")
            extrapolate = _parse_bool(pairs.pop("extrapolate", "false"), "extrapolate")
            require_monotone = _parse_bool(pairs.pop("require_monotone", "true"), "require_monotone")
            table = MaterialTable.from_csv(table_path, metallic=metallic,
                                           require_monotone=require_monotone)
            out = Tabulated(table, extrapolate=extrapolate)
        else:
            raise ConfigError(f"unknown material model {model!r}")
    except (ValueError, OSError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc)) from exc
    if pairs:
        raise ConfigError(f"unknown material keys: {sorted(pairs)}")
    return out


@dataclass
class RunConfig:
    """Validated, unit-converted inputs of one CLI run."""

    command: str
    tol: float = 1.0e-8
    out: Optional[Path] = None
    max_terms: int = 1_000_000
    material_sphere: Optional[DispersionModel] = None
    material_plate: Optional[DispersionModel] = None
    gap: Optional[float] = None
    radius: Optional[float] = None
    temperature: Optional[float] = None
    t_low: Optional[float] = None
    t_high: Optional[float] = None
    variable: Optional[str] = None
    start: Optional[float] = None
    stop: Optional[float] = None
    points: int = 0
    log: bool = False
    separation: Optional[float] = None
    alpha0: Optional[float] = None
    omega0_radps: float = math.inf
    zeta_min: float = 1.0e11
    zeta_max: float = 1.0e18


def _fmt(x):
    return f"{x:.10e}"


class _Writer:
    def __init__(self, out: Optional[Path]):
        self._own = out is not None
        self._fh = open(out, "w") if out is not None else sys.stdout

    def row(self, values):
        cells = []
        for v in values:
            if isinstance(v, str):
                cells.append(v)
            elif isinstance(v, (bool, np.bool_)):
                cells.append("1" if v else "0")
            elif isinstance(v, (int, np.integer)):
                cells.append(str(int(v)))
            else:
                cells.append(_fmt(float(v)))
        self._fh.write(",".join(cells) + "\n")
        self._fh.flush()

    def close(self):
        if self._own:
            self._fh.close()


def _grid(cfg: RunConfig):
    if cfg.points < 1:
        raise ConfigError("need at least one grid point")
    if cfg.points == 1:
        return np.array([cfg.start])
    if cfg.log:
        if cfg.start <= 0:
            raise ConfigError("log grid needs positive endpoints")
        return np.geomspace(cfg.start, cfg.stop, cfg.points)
    return np.linspace(cfg.start, cfg.stop, cfg.points)


def run_force(cfg: RunConfig):
    geom = ThermalGeometry(cfg.gap, cfg.temperature, cfg.radius)
    per_area = free_energy_area(geom, cfg.material_sphere, cfg.material_plate, tol=cfg.tol,
                                max_terms=cfg.max_terms)
    scale = 2.0 * math.pi * cfg.radius
    force = scale * per_area.value
    w = _Writer(cfg.out)
    try:
        w.row(["gap_m", "radius_m", "temperature_K", "force_N", "abs_force_pN",
               "free_energy_per_area_J_per_m2", "terms_used", "tail_estimate_N"])
        w.row([cfg.gap, cfg.radius, cfg.temperature, force, abs(force) * 1.0e12,
               per_area.value, per_area.terms_used, scale * per_area.tail_estimate])
    finally:
        w.close()
    return 0


def run_sweep(cfg: RunConfig):
    grid = _grid(cfg)
    w = _Writer(cfg.out)
    try:
        if cfg.radius is not None:
            w.row(["gap_m", "radius_m", "temperature_K", "force_N", "abs_force_pN",
                   "terms_used", "tail_estimate_N"])
        else:
            w.row(["gap_m", "temperature_K", "free_energy_per_area_J_per_m2",
                   "terms_used", "tail_estimate_J_per_m2"])
        for x in grid:
            a = float(x) if cfg.variable == "gap" else cfg.gap
            T = float(x) if cfg.variable == "temperature" else cfg.temperature
            geom = ThermalGeometry(a, T, cfg.radius)
            if cfg.radius is not None:
                res = sphere_plate_force(geom, cfg.material_sphere, cfg.material_plate,
                                         tol=cfg.tol, max_terms=cfg.max_terms)
                w.row([a, cfg.radius, T, res.value, abs(res.value) * 1.0e12,
                       res.terms_used, res.tail_estimate])
            else:
                res = free_energy_area(geom, cfg.material_sphere, cfg.material_plate,
                                       tol=cfg.tol, max_terms=cfg.max_terms)
                w.row([a, T, res.value, res.terms_used, res.tail_estimate])
    finally:
        w.close()
    return 0


def run_diff(cfg: RunConfig):
    geom_low = ThermalGeometry(cfg.gap, cfg.t_low, cfg.radius)
    geom_high = ThermalGeometry(cfg.gap, cfg.t_high, cfg.radius)
    f_low = sphere_plate_force(geom_low, cfg.material_sphere, cfg.material_plate,
                               tol=cfg.tol, max_terms=cfg.max_terms)
    f_high = sphere_plate_force(geom_high, cfg.material_sphere, cfg.material_plate,
                                tol=cfg.tol, max_terms=cfg.max_terms)
    delta = abs(f_low.value) - abs(f_high.value)
    w = _Writer(cfg.out)
    try:
        w.row(["gap_m", "radius_m", "t_low_K", "t_high_K", "force_low_N", "force_high_N",
               "delta_force_N", "delta_force_pN"])
        w.row([cfg.gap, cfg.radius, cfg.t_low, cfg.t_high, f_low.value, f_high.value,
               delta, delta * 1.0e12])
    finally:
        w.close()
    return 0


def run_entropy(cfg: RunConfig):
    grid = _grid(cfg)
    curve = entropy_curve(cfg.gap, cfg.material_sphere, cfg.material_plate, grid)
    w = _Writer(cfg.out)
    try:
        w.row(["gap_m", "temperature_K", "entropy_J_per_K_m2", "diff_error_J_per_K_m2",
               "step_K", "noise_limited"])
        for i, T in enumerate(curve.temperatures):
            w.row([cfg.gap, T, curve.entropy[i], curve.errors[i], curve.steps[i],
                   bool(curve.noise_flags[i])])
    finally:
        w.close()
    return 0


def run_aniso(cfg: RunConfig):
    pair = AnisoPairConfig(cfg.separation, cfg.alpha0, cfg.omega0_radps)
    grid = _grid(cfg)
    w = _Writer(cfg.out)
    try:
        w.row(["separation_m", "alpha0_m3", "omega0_radps", "temperature_K",
               "free_energy_J", "entropy_J_per_K"])
        for T in grid:
            f = pair_free_energy(pair, float(T))
            s = pair_entropy(pair, float(T))
            w.row([pair.r, pair.alpha0, pair.omega0, T, f, s])
    finally:
        w.close()
    return 0


def run_epsilon(cfg: RunConfig):
    model = cfg.material_sphere
    if isinstance(model, (IdealMetal, ModifiedIdealMetal)):
        raise ConfigError(f"{type(model).__name__} has no permittivity to dump")
    if not 0 < cfg.zeta_min < cfg.zeta_max:
        raise ConfigError("need 0 < zeta-min < zeta-max")
    grid = np.geomspace(cfg.zeta_min, cfg.zeta_max, cfg.points)
    eps = np.asarray(eps_at(model, grid, T=cfg.temperature))
    w = _Writer(cfg.out)
    try:
        w.row(["zeta_radps", "eps"])
        for z, e in zip(grid, eps):
            w.row([z, e])
    finally:
        w.close()
    return 0


def _add_common(p, sphere_plate=True):
    p.add_argument("--tol", type=float, default=1.0e-8, help="relative engine tolerance")
    p.add_argument("--out", type=Path, default=None, help="output CSV path (default stdout)")
    p.add_argument("--max-terms", type=int, default=1_000_000,
                   help="hard cap on the Matsubara summation")
    if sphere_plate:
        p.add_argument("--material-sphere", required=True, help="material config file or inline spec")
        p.add_argument("--material-plate", required=True, help="material config file or inline spec")


def _build_parser():
    ap = argparse.ArgumentParser(prog="lifcas",
                                 description="Finite-temperature Casimir forces (Lifshitz formula)")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("force", help="sphere-plate force at one point")
    _add_common(p)
    p.add_argument("--gap", required=True, help="surface separation, e.g. 200nm")
    p.add_argument("--radius", required=True, help="sphere radius, e.g. 296um")
    p.add_argument("--temperature", required=True, help="temperature, e.g. 300K")

    p = sub.add_parser("sweep", help="force or free energy over a grid")
    _add_common(p)
    p.add_argument("--variable", required=True, choices=("gap", "temperature"))
    p.add_argument("--from", dest="start", required=True, help="grid start (with unit)")
    p.add_argument("--to", dest="stop", required=True, help="grid end (with unit)")
    p.add_argument("--points", type=int, required=True)
    p.add_argument("--log", action="store_true", help="logarithmic grid")
    p.add_argument("--gap", help="fixed gap for temperature sweeps")
    p.add_argument("--radius", help="sphere radius; omit for plate-plate free energy")
    p.add_argument("--temperature", help="fixed temperature for gap sweeps")

    p = sub.add_parser("diff", help="force difference between two temperatures")
    _add_common(p)
    p.add_argument("--gap", required=True)
    p.add_argument("--radius", required=True)
    p.add_argument("--t1", required=True, help="lower temperature")
    p.add_argument("--t2", required=True, help="higher temperature")

    p = sub.add_parser("entropy", help="plate-plate entropy per area over a temperature grid")
    _add_common(p, sphere_plate=False)
    p.add_argument("--material-1", required=True, dest="material_sphere",
                   help="first plate material")
    p.add_argument("--material-2", required=True, dest="material_plate",
                   help="second plate material")
    p.add_argument("--gap", required=True)
    p.add_argument("--from", dest="start", required=True)
    p.add_argument("--to", dest="stop", required=True)
    p.add_argument("--points", type=int, required=True)
    p.add_argument("--log", action="store_true")

    p = sub.add_parser("aniso", help="anisotropic pair free energy and entropy")
    p.add_argument("--tol", type=float, default=1.0e-8)
    p.add_argument("--out", type=Path, default=None)
    p.add_argument("--separation", required=True, help="particle separation, e.g. 1um")
    p.add_argument("--alpha0", type=float, required=True, help="polarizability volume, m^3")
    p.add_argument("--omega0-ev", type=float, default=None,
                   help="oscillator frequency in eV (default: static polarizability)")
    p.add_argument("--from", dest="start", required=True)
    p.add_argument("--to", dest="stop", required=True)
    p.add_argument("--points", type=int, required=True)
    p.add_argument("--log", action="store_true")

    p = sub.add_parser("epsilon", help="dump eps(i*zeta) of a material over a frequency grid")
    p.add_argument("--tol", type=float, default=1.0e-8)
    p.add_argument("--out", type=Path, default=None)
    p.add_argument("--material", required=True, dest="material_sphere")
    p.add_argument("--zeta-min", type=float, default=1.0e11)
    p.add_argument("--zeta-max", type=float, default=1.0e18)
    p.add_argument("--points", type=int, default=141)
    p.add_argument("--temperature", default=None,
                   help="temperature for temperature-dependent relaxation")
    return ap


def _config_from_args(args) -> RunConfig:
    cfg = RunConfig(command=args.command, tol=args.tol, out=args.out,
                    max_terms=getattr(args, "max_terms", 1_000_000))
    if getattr(args, "material_sphere", None) is not None:
        cfg.material_sphere = parse_material(args.material_sphere)
    if getattr(args, "material_plate", None) is not None:
        cfg.material_plate = parse_material(args.material_plate)

    if args.command == "force":
        cfg.gap = parse_length(args.gap)
        cfg.radius = parse_length(args.radius)
        cfg.temperature = parse_temperature(args.temperature)
    elif args.command == "sweep":
        cfg.variable = args.variable
        cfg.points = args.points
        cfg.log = args.log
        if args.radius is not None:
            cfg.radius = parse_length(args.radius)
        if args.variable == "gap":
            if args.temperature is None:
                raise ConfigError("gap sweep needs --temperature")
            cfg.temperature = parse_temperature(args.temperature)
            cfg.start = parse_length(args.start)
            cfg.stop = parse_length(args.stop)
        else:
            if args.gap is None:
                raise ConfigError("temperature sweep needs --gap")
            cfg.gap = parse_length(args.gap)
            cfg.start = parse_temperature(args.start)
            cfg.stop = parse_temperature(args.stop)
    elif args.command == "diff":
        cfg.gap = parse_length(args.gap)
        cfg.radius = parse_length(args.radius)
        cfg.t_low = parse_temperature(args.t1)
        cfg.t_high = parse_temperature(args.t2)
        if cfg.t_low > cfg.t_high:
            raise ConfigError("--t1 must not exceed --t2")
    elif args.command == "entropy":
        cfg.gap = parse_length(args.gap)
        cfg.points = args.points
        cfg.log = args.log
        cfg.start = parse_temperature(args.start)
        cfg.stop = parse_temperature(args.stop)
    elif args.command == "aniso":
        cfg.separation = parse_length(args.separation)
        cfg.alpha0 = args.alpha0
        if args.omega0_ev is not None:
            cfg.omega0_radps = args.omega0_ev * CODATA.ev_to_radps
        cfg.points = args.points
        cfg.log = args.log
        cfg.start = parse_temperature(args.start)
        cfg.stop = parse_temperature(args.stop)
    elif args.command == "epsilon":
        cfg.zeta_min = args.zeta_min
        cfg.zeta_max = args.zeta_max
        cfg.points = args.points
        if args.temperature is not None:
            cfg.temperature = parse_temperature(args.temperature)
    if cfg.start is not None and cfg.stop is not None and cfg.points > 1 and cfg.start >= cfg.stop:
        raise ConfigError("--from must be below --to")
    return cfg


_HANDLERS = {
    "force": run_force,
    "sweep": run_sweep,
    "diff": run_diff,
    "entropy": run_entropy,
    "aniso": run_aniso,
    "epsilon": run_epsilon,
}


def main(argv=None):
    threads = os.environ.get("LIFCAS_THREADS")
    if threads:
        try:
            backend.set_num_threads(int(threads))
        except ValueError:
            print(f"lifcas: ignoring non-integer LIFCAS_THREADS={threads!r}", file=sys.stderr)
    args = _build_parser().parse_args(argv)
    try:
        cfg = _config_from_args(args)
        return _HANDLERS[args.command](cfg)
    except (ConfigError, ValueError, OSError) as exc:
        print(f"lifcas: configuration error: {exc}", file=sys.stderr)
        return 1
    except (SummationError, QuadratureError) as exc:
        print(f"lifcas: numerical failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
