import numpy as np
import pytest

from lifcas.dispersion import (
    ConstantDielectric,
    Drude,
    DrudeParams,
    IdealMetal,
    MaterialTable,
    ModifiedIdealMetal,
    Plasma,
    Tabulated,
    bloch_gruneisen_nu,
    drude_eps,
    drude_model,
    eps_at,
    tabulated_eps,
    zero_mode_class,
)
from lifcas.dispersion import _bg_integral

GOLD = DrudeParams(9.0, 0.035)


def synthetic_gold_table(n=70, lo=1e11, hi=1e18, metallic=True):
    grid = np.geomspace(lo, hi, n)
    return MaterialTable(grid, drude_eps(grid, GOLD), label="synthetic-gold", metallic=metallic)


class TestDrude:
    def test_value_at_1e15(self):
        # hand evaluation: 1 + (9*1.519e15)^2 / (1e15*(1e15 + 0.035*1.519e15))
        assert drude_eps(1e15, GOLD) == pytest.approx(178.4615003347054, rel=1e-12)

    def test_vacuum_limit_of_small_plasma_frequency(self):
        weak = DrudeParams(1e-12, 0.035)
        assert drude_eps(1e15, weak) == pytest.approx(1.0, abs=1e-25)

    def test_transparency_at_high_frequency(self):
        vals = drude_eps(np.array([1e18, 1e20, 1e22]), GOLD)
        assert np.all(np.diff(vals) < 0)
        assert vals[-1] == pytest.approx(1.0, rel=1e-10)

    def test_zero_frequency_rejected(self):
        with pytest.raises(ValueError):
            drude_eps(0.0, GOLD)

    def test_nu_zero_matches_plasma_everywhere(self):
        params = DrudeParams(9.0, 0.0)
        zetas = np.geomspace(1e10, 1e18, 50)
        plasma = eps_at(Plasma(9.0), zetas)
        np.testing.assert_array_equal(drude_eps(zetas, params), plasma)

    def test_monotone_nonincreasing(self):
        zetas = np.geomspace(1e11, 1e18, 200)
        assert np.all(np.diff(drude_eps(zetas, GOLD)) <= 0)

    def test_factory_retags_degenerate_nu(self):
        assert isinstance(drude_model(9.0, 0.0), Plasma)
        assert isinstance(drude_model(9.0, 0.035), Drude)

    def test_direct_degenerate_construction_rejected(self):
        with pytest.raises(ValueError):
            Drude(DrudeParams(9.0, 0.0))

    def test_param_validation(self):
        with pytest.raises(ValueError):
            DrudeParams(-1.0, 0.035)
        with pytest.raises(ValueError):
            DrudeParams(9.0, -0.035)
        with pytest.raises(ValueError):
            DrudeParams(9.0, 0.035, temperature_dependent_nu=True, debye_theta_k=-5.0)


class TestBlochGruneisen:
    def test_room_temperature_gold(self):
        # quadrature of the resistivity integral; close to the 35 meV value
        nu = bloch_gruneisen_nu(300.0, 175.0, 0.0847)
        assert nu == pytest.approx(0.0356224360264437, rel=1e-8)
        assert abs(nu - 0.035) / 0.035 < 0.03

    def test_integral_against_series_limit(self):
        # int_0^inf x^5 e^x/(e^x-1)^2 dx = 120 * zeta(5)
        from scipy.special import zeta

        assert _bg_integral(1e6) == pytest.approx(120 * zeta(5.0), rel=1e-10)

    def test_t5_law_at_low_temperature(self):
        r = bloch_gruneisen_nu(0.2, 175.0, 0.0847) / bloch_gruneisen_nu(0.1, 175.0, 0.0847)
        assert r == pytest.approx(2**5, rel=1e-4)

    def test_linear_at_high_temperature(self):
        r = bloch_gruneisen_nu(35000.0, 175.0, 0.0847) / bloch_gruneisen_nu(17500.0, 175.0, 0.0847)
        assert r == pytest.approx(2.0, rel=1e-3)

    def test_effective_nu_with_impurity_floor(self):
        p = DrudeParams(9.0, 0.035, temperature_dependent_nu=True, nu_impurity_ev=1e-4)
        assert p.effective_nu_ev(300.0) == pytest.approx(
            bloch_gruneisen_nu(300.0, 175.0, 0.0847) + 1e-4, rel=1e-12
        )
        with pytest.raises(ValueError):
            p.effective_nu_ev(None)

    def test_input_validation(self):
        with pytest.raises(ValueError):
            bloch_gruneisen_nu(-1.0, 175.0, 0.0847)
        with pytest.raises(ValueError):
            bloch_gruneisen_nu(300.0, 0.0, 0.0847)


class TestTabulated:
    def test_on_grid_identity(self):
        table = synthetic_gold_table()
        for i in (0, 7, 34, 69):
            assert tabulated_eps(table.zeta_grid[i], table) == pytest.approx(
                table.eps_values[i], rel=1e-12
            )

    def test_off_grid_matches_drude_within_half_percent(self):
        table = synthetic_gold_table()
        queries = np.geomspace(1.3e11, 0.9e18, 300)
        interp = tabulated_eps(queries, table)
        exact = drude_eps(queries, GOLD)
        assert np.max(np.abs(interp - exact) / exact) < 5e-3

    def test_out_of_grid_errors_without_policy(self):
        table = synthetic_gold_table()
        with pytest.raises(ValueError, match="extrapolation"):
            tabulated_eps(5e10, table)
        with pytest.raises(ValueError, match="extrapolation"):
            tabulated_eps(2e18, table)

    def test_extrapolation_policy(self):
        table = synthetic_gold_table()
        low = tabulated_eps(5e10, table, extrapolate=True)
        # 1/zeta tail anchored at the lowest grid point
        assert low - 1.0 == pytest.approx((table.eps_values[0] - 1.0) * 1e11 / 5e10, rel=1e-12)
        assert tabulated_eps(5e18, table, extrapolate=True) == 1.0

    def test_grid_validation(self):
        with pytest.raises(ValueError, match="strictly increasing"):
            MaterialTable(np.array([2e15, 1e15]), np.array([2.0, 3.0]))
        with pytest.raises(ValueError, match="eps"):
            MaterialTable(np.array([1e11, 1e18]), np.array([2.0, 0.5]))

    def test_monotone_check_toggle(self):
        grid = np.geomspace(1e11, 1e18, 5)
        eps = np.array([10.0, 8.0, 9.0, 2.0, 1.5])
        table = MaterialTable(grid, eps)
        with pytest.raises(ValueError, match="monotonically"):
            table.check_monotone(strict=True)
        with pytest.warns(UserWarning):
            table.check_monotone(strict=False)

    def test_narrow_span_warns(self):
        with pytest.warns(UserWarning, match="narrower"):
            MaterialTable(np.array([1e12, 1e15]), np.array([5.0, 2.0]))

    def test_csv_roundtrip(self, tmp_path):
        table = synthetic_gold_table()
        path = tmp_path / "gold.csv"
        table.to_csv(path)
        back = MaterialTable.from_csv(path)
        np.testing.assert_allclose(back.zeta_grid, table.zeta_grid, rtol=1e-10)
        np.testing.assert_allclose(back.eps_values, table.eps_values, rtol=1e-10)

    def test_csv_diagnostics(self, tmp_path):
        p = tmp_path / "bad.csv"
        p.write_text("1e15,2.0\n")
        with pytest.raises(ValueError, match="header"):
            MaterialTable.from_csv(p)
        p.write_text("zeta_radps,eps\n1e15,two\n2e15,1.5\n")
        with pytest.raises(ValueError, match="non-numeric"):
            MaterialTable.from_csv(p)
        p.write_text("zeta_radps,eps\n# comment\n1e15,2.0\n")
        with pytest.raises(ValueError, match="two data rows"):
            MaterialTable.from_csv(p)


class TestZeroModeClass:
    def test_drude_vanishes(self):
        assert zero_mode_class(drude_model(9.0, 0.035)).kind == "vanishes"

    def test_plasma_finite_limit(self):
        zm = zero_mode_class(Plasma(9.0))
        assert zm.kind == "finite"
        assert zm.limit_rad2ps2 == pytest.approx((9.0 * 1.519e15) ** 2, rel=1e-12)

    def test_constant_and_tabulated_vanish(self):
        assert zero_mode_class(ConstantDielectric(100.0)).kind == "vanishes"
        assert zero_mode_class(Tabulated(synthetic_gold_table())).kind == "vanishes"

    def test_ideal_and_mim(self):
        assert zero_mode_class(IdealMetal()).kind == "ideal"
        # vanishing TE zero mode is part of the model definition
        assert zero_mode_class(ModifiedIdealMetal()).kind == "vanishes"

    def test_classification_consistent_with_numerics(self):
        zetas = np.geomspace(1e6, 1e10, 9)
        drude_limit = zetas**2 * (drude_eps(zetas, GOLD) - 1.0)
        # zeta^2*(eps-1) falls off linearly in zeta toward zero for a dissipative metal
        assert np.all(np.diff(drude_limit) > 0)
        ratios = drude_limit / zetas
        assert np.allclose(ratios, ratios[0], rtol=1e-3)
        plasma_limit = zetas**2 * (eps_at(Plasma(9.0), zetas) - 1.0)
        np.testing.assert_allclose(plasma_limit, (9.0 * 1.519e15) ** 2, rtol=1e-12)


def test_eps_at_rejects_perfect_reflectors():
    with pytest.raises(TypeError):
        eps_at(IdealMetal(), 1e15)
    with pytest.raises(TypeError):
        eps_at(ModifiedIdealMetal(), 1e15)


def test_constant_dielectric_validation():
    with pytest.raises(ValueError):
        ConstantDielectric(0.5)
    # eps0 = 1 is vacuum and allowed
    assert eps_at(ConstantDielectric(1.0), 1e15) == 1.0


def test_eps_not_below_one_everywhere():
    zetas = np.geomspace(1e11, 1e18, 60)
    for model in (drude_model(9.0, 0.035), Plasma(9.0), ConstantDielectric(3.0),
                  Tabulated(synthetic_gold_table())):
        assert np.all(np.asarray(eps_at(model, zetas)) >= 1.0)
