"""Acceptance suite: the quantitative exit criteria of the build.

Each test prints one PASS/FAIL line with the measured numbers so the run
log doubles as a results table.  Tolerances: force values carry a 5% band
(the Drude form stands in for the measured permittivity tables the
benchmark numbers were produced from); everything else is as tight as the
underlying closed forms and cross-checks allow.
"""

import math

import numpy as np
from scipy.special import zeta

from lifcas import backend
from lifcas.constants import CODATA, dimensionless_gamma
from lifcas.dispersion import (
    ConstantDielectric,
    DrudeParams,
    IdealMetal,
    ModifiedIdealMetal,
    Plasma,
    drude_model,
)
from lifcas.aniso import AnisoPairConfig, pair_entropy, pair_free_energy, tau
from lifcas.engine import (
    ThermalGeometry,
    free_energy_area,
    matsubara_term,
    mim_m0_force,
    sphere_plate_force,
    zero_T_free_energy_area,
)
from lifcas.reflection import (
    LifshitzPoint,
    delta_te_from_impedance,
    deltas_at,
    surface_impedance_te,
)
from lifcas.thermo import classical_limit_ratio, entropy_curve

GOLD = drude_model(9.0, 0.035)
COPPER = drude_model(10.8, 0.0263)
RADIUS = 296e-6
APERY = float(zeta(3.0))

_force_cache = {}


def force_pn(a, T, mat1=GOLD, mat2=GOLD, tol=1e-8):
    key = (a, T, id(mat1), id(mat2), tol)
    if key not in _force_cache:
        geom = ThermalGeometry(a, T, RADIUS)
        _force_cache[key] = sphere_plate_force(geom, mat1, mat2, tol=tol)
    res = _force_cache[key]
    return abs(res.value) * 1e12, res


def report(tag, ok, detail):
    print(f"\nACCEPTANCE {tag} {'PASS' if ok else 'FAIL'}: {detail}")
    assert ok, f"{tag}: {detail}"


def test_c01_gold_force_at_room_temperature():
    value, _ = force_pn(200e-9, 300.0)
    ok = abs(value - 67.22) / 67.22 < 0.05
    report("C01", ok, f"|F|(200nm, 300K) = {value:.3f} pN vs 67.22 pN +-5%")


def test_c02_temperature_pairs_and_reductions():
    checks = []
    vals = {}
    for a, t300, t1 in ((400e-9, 9.38, 10.19), (1e-6, 0.59, 0.73)):
        f300, _ = force_pn(a, 300.0)
        f1, _ = force_pn(a, 1.0)
        vals[a] = (f300, f1)
        checks.append(abs(f300 - t300) / t300 < 0.05)
        checks.append(abs(f1 - t1) / t1 < 0.05)
    red400 = 100.0 * (1.0 - vals[400e-9][0] / vals[400e-9][1])
    red1um = 100.0 * (1.0 - vals[1e-6][0] / vals[1e-6][1])
    checks.append(abs(red400 - 7.9) < 1.5)
    checks.append(abs(red1um - 19.0) < 1.5)
    ok = all(checks)
    report(
        "C02", ok,
        f"400nm: {vals[400e-9][0]:.3f}/{vals[400e-9][1]:.3f} pN (9.38/10.19), "
        f"1um: {vals[1e-6][0]:.4f}/{vals[1e-6][1]:.4f} pN (0.59/0.73), "
        f"reductions {red400:.1f}%/{red1um:.1f}% vs 7.9%/19%",
    )


def test_c03_force_differences():
    f300, _ = force_pn(200e-9, 300.0)
    f1, _ = force_pn(200e-9, 1.0)
    df200 = f1 - f300
    f300u, _ = force_pn(1e-6, 300.0)
    f1u, _ = force_pn(1e-6, 1.0)
    df1um = f1u - f300u
    positive = []
    for a in np.linspace(150e-9, 1e-6, 7):
        lo, _ = force_pn(float(a), 1.0)
        hi, _ = force_pn(float(a), 300.0)
        positive.append(lo - hi > 0.0)
    ok = abs(df200 - 2.54) < 0.3 and abs(df1um - 0.14) < 0.05 and all(positive)
    report(
        "C03", ok,
        f"dF(200nm) = {df200:.3f} pN vs 2.54+-0.3, dF(1um) = {df1um:.3f} pN vs 0.14+-0.05, "
        f"dF > 0 at all {len(positive)} gaps in [150nm, 1um]",
    )


def test_c04_gold_copper_cross_material():
    fc300, _ = force_pn(200e-9, 300.0, GOLD, COPPER)
    fc1, _ = force_pn(200e-9, 1.0, GOLD, COPPER)
    fc_um, _ = force_pn(1e-6, 300.0, GOLD, COPPER)
    fau_um, _ = force_pn(1e-6, 300.0)
    two_dec = abs(fc_um - fau_um) < 0.005
    ok = (abs(fc300 - 67.19) / 67.19 < 0.05 and abs(fc1 - 69.75) / 69.75 < 0.05 and two_dec)
    report(
        "C04", ok,
        f"Au-Cu 200nm: {fc300:.3f}/{fc1:.3f} pN vs 67.19/69.75 +-5%; "
        f"1um: {fc_um:.4f} vs Au-Au {fau_um:.4f} pN (two decimals: {two_dec})",
    )


def test_c05_matsubara_term_counts():
    counts = {}
    for a, target in ((50e-9, 34000), (200e-9, 11000), (1e-6, 2700)):
        _, res = force_pn(a, 1.0)
        counts[a] = (res.terms_used, target)
    ok = all(t / 2 <= n <= 2 * t for n, t in counts.values())
    detail = ", ".join(
        f"a={a * 1e9:.0f}nm: {n} terms (target ~{t})" for a, (n, t) in counts.items()
    )
    report("C05", ok, detail)


def test_c06_mim_closed_forms():
    geom = ThermalGeometry(200e-9, 300.0, RADIUS)
    mim = ModifiedIdealMetal()
    beta = 1.0 / (CODATA.k_B * geom.T)
    # quadrature of the half-weighted m=0 term against -zeta(3)/(16 pi a^2 beta)
    quad_m0 = 0.5 * matsubara_term(0, geom, mim, mim, quad_tol=1e-12) * (
        CODATA.k_B * geom.T / (2.0 * math.pi * geom.a**2)
    )
    closed_m0 = -APERY / (16.0 * math.pi * geom.a**2 * beta)
    rel = abs(quad_m0 - closed_m0) / abs(closed_m0)
    force = mim_m0_force(geom)
    force_ok = abs(force - (-4.605441785080834e-12)) / 4.605441785080834e-12 < 5e-4
    ok = rel < 1e-10 and force_ok
    report(
        "C06", ok,
        f"m=0 quadrature vs closed form rel = {rel:.2e} (<1e-10); "
        f"mim_m0_force = {force * 1e12:.4f} pN vs -4.605 pN",
    )


def test_c07_impedance_equivalence():
    from lifcas.dispersion import MaterialTable, Tabulated, drude_eps

    grid = np.geomspace(1e11, 1e18, 80)
    table = Tabulated(MaterialTable(grid, drude_eps(grid, DrudeParams(9.0, 0.035)),
                                    label="tab-gold"))
    models = [GOLD, Plasma(9.0), ConstantDielectric(4.0), ConstantDielectric(100.0),
              IdealMetal(), ModifiedIdealMetal(), table]
    rng = np.random.default_rng(2024)
    worst = 0.0
    for _ in range(10000):
        model = models[rng.integers(len(models))]
        a = 10 ** rng.uniform(-8.0, -5.5)
        T = 10 ** rng.uniform(-0.5, 3.0)
        m = int(rng.integers(1, 1500))
        z = m * dimensionless_gamma(a, T)
        if isinstance(model, Tabulated):
            zeta_m = z * CODATA.c / a
            if not grid[0] <= zeta_m <= grid[-1]:
                continue
        pt = LifshitzPoint(m, z * (1.0 + 10 ** rng.uniform(-6, 1.5)), a, T)
        d_perm = deltas_at(pt, model).delta_te
        Z = surface_impedance_te(pt.zeta_m, pt.k_perp, model)
        worst = max(worst, abs(delta_te_from_impedance(Z, pt.p) - d_perm))
    ok = worst < 1e-12
    report("C07", ok, f"worst |TE(impedance) - TE(permittivity)| = {worst:.2e} over 1e4 samples")


def test_c08_nernst_property():
    temps = np.array([0.2, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 40.0, 60.0, 80.0,
                      100.0, 150.0, 200.0, 250.0, 300.0])
    curve = entropy_curve(1e-6, GOLD, GOLD, temps)
    peak = float(np.max(np.abs(curve.entropy)))
    s02 = float(curve.entropy[0])
    ratio = abs(s02) / peak
    has_negative = bool(np.any(curve.entropy < 0.0))
    ok = ratio < 0.1 and has_negative
    report(
        "C08", ok,
        f"|S(0.2K)|/max|S| = {ratio:.3f} (<0.1 required), "
        f"negative interval exists: {has_negative}; "
        f"S(0.2K) = {s02:.3e}, peak |S| = {peak:.3e} J/(K m^2)",
    )


def test_c09_plasma_drude_classical_ratio():
    wp_radps = 9.0 * CODATA.ev_to_radps
    a = 1e3 * CODATA.c / wp_radps
    T = 50.0 / dimensionless_gamma(a, 1.0)
    ratio = classical_limit_ratio(a, T, DrudeParams(9.0, 0.035))
    ok = abs(ratio - 2.0) / 2.0 < 0.05
    report("C09", ok, f"plasma/Drude free-energy ratio = {ratio:.4f} vs 2 +-5%")


def test_c10_zero_temperature_oracle():
    rels = {}
    for a in (200e-9, 1e-6):
        cont = zero_T_free_energy_area(a, GOLD, GOLD, tol=1e-9)
        summed = free_energy_area(ThermalGeometry(a, 1.0), GOLD, GOLD, tol=1e-9).value
        rels[a] = abs(cont - summed) / abs(summed)
    a = 1e-6
    ideal = zero_T_free_energy_area(a, IdealMetal(), IdealMetal(), tol=1e-9)
    closed = -math.pi**2 * CODATA.hbar * CODATA.c / (720.0 * a**3)
    ideal_rel = abs(ideal - closed) / abs(closed)
    ok = all(r < 2e-3 for r in rels.values()) and ideal_rel < 1e-6
    report(
        "C10", ok,
        f"T=1K vs continuum: {rels[200e-9]:.2e} (200nm), {rels[1e-6]:.2e} (1um) [<2e-3]; "
        f"ideal-metal closed form rel = {ideal_rel:.2e} [<1e-6]",
    )


def test_c11_anisotropic_pair():
    cfg = AnisoPairConfig(1e-6, 1e-27)
    f_cold = pair_free_energy(cfg, 0.1)
    closed = -CODATA.hbar * CODATA.c * cfg.alpha0**2 / (3.0 * math.pi * cfg.r**7)
    closed_rel = abs(f_cold - closed) / abs(closed)
    T_hot = 21.0 / dimensionless_gamma(cfg.r, 1.0)
    assert tau(1, cfg.r, T_hot) > 20.0
    vanish_ratio = abs(pair_free_energy(cfg, T_hot)) / abs(f_cold)
    s_neg = pair_entropy(cfg, 1200.0) < 0.0 and pair_entropy(cfg, 1800.0) < 0.0
    s_zero = abs(pair_entropy(cfg, 0.5)) < 1e-6 * abs(pair_entropy(cfg, 1200.0))
    ok = closed_rel < 5e-3 and vanish_ratio < 1e-6 and s_neg and s_zero
    report(
        "C11", ok,
        f"static T->0 closed form rel = {closed_rel:.2e} [<5e-3]; "
        f"|F(tau1>20)|/|F(0.1K)| = {vanish_ratio:.2e} [<1e-6]; "
        f"S<0 interval: {s_neg}; S(T->0)->0: {s_zero}",
    )


def test_c12_property_suite():
    # reflection ordering
    rng = np.random.default_rng(99)
    ordering = True
    for _ in range(2000):
        model = (GOLD, Plasma(9.0), ConstantDielectric(20.0))[rng.integers(3)]
        a = 10 ** rng.uniform(-7.5, -6.0)
        T = 10 ** rng.uniform(0.0, 2.5)
        m = int(rng.integers(1, 400))
        z = m * dimensionless_gamma(a, T)
        pair = deltas_at(LifshitzPoint(m, z * (1 + 10 ** rng.uniform(-4, 1.3)), a, T), model)
        ordering &= 0.0 <= pair.delta_te <= pair.delta_tm <= 1.0
    # every Matsubara term non-positive
    res = free_energy_area(ThermalGeometry(4e-7, 200.0), GOLD, GOLD)
    terms_ok = bool(np.all(res.per_mode_breakdown[:, 1:] <= 0.0))
    # vacuum yields exactly zero
    vac = ConstantDielectric(1.0)
    vacuum_ok = free_energy_area(ThermalGeometry(2e-7, 300.0), vac, vac).value == 0.0
    # deterministic across thread-count requests
    geom = ThermalGeometry(3e-7, 50.0)
    backend.set_num_threads(8)
    f1 = free_energy_area(geom, GOLD, GOLD).value
    backend.set_num_threads(1)
    f2 = free_energy_area(geom, GOLD, GOLD).value
    deterministic = f1 == f2
    ok = ordering and terms_ok and vacuum_ok and deterministic
    report(
        "C12", ok,
        f"0<=TE<=TM<=1: {ordering}; all terms <=0: {terms_ok}; "
        f"vacuum == 0: {vacuum_ok}; thread-count deterministic: {deterministic}",
    )
