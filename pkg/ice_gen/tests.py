from dataclasses import replace

import numpy as np
from django.test import SimpleTestCase

from system.exceptions import CalibrationError, EnvelopeError, RichMixtureError
from thermo.constants import Species
from thermo.domain import GasStream

from .domain import EngineCurve
from .services import CombustionService, EngineService

CURVE = EngineCurve()


def fuel_atoms(a, fuel):
    return {"N": (1 - a) * fuel, "H": (3 * (1 - a) + 2 * a) * fuel}


class CombustionTests(SimpleTestCase):

    def test_default_blend_stoichiometric(self):
        products = CombustionService.combustion_products(0.2, 1.0, 1.0)
        self.assertAlmostEqual(CombustionService.oxygen_supplied(0.2, 1.0, 1.0), 0.7, places=12)
        self.assertAlmostEqual(products.flow(Species.H2O), 1.4, places=12)
        self.assertAlmostEqual(products.flow(Species.N2), 0.4 + 0.7 * 79 / 21, places=12)
        self.assertAlmostEqual(products.flow(Species.N2), 3.033, delta=1e-3)
        self.assertEqual(products.flow(Species.O2), 0.0)

    def test_pure_hydrogen(self):
        products = CombustionService.combustion_products(1.0, 1.0, 1.0)
        self.assertAlmostEqual(products.flow(Species.H2O), 1.0, places=12)
        self.assertAlmostEqual(products.flow(Species.N2), 1.881, delta=1e-3)

    def test_pure_ammonia_lean(self):
        products = CombustionService.combustion_products(0.0, 2.0, 1.0)
        self.assertAlmostEqual(products.flow(Species.O2), 0.75, places=12)

    def test_atom_balance_on_random_grid(self):
        rng = np.random.default_rng(5)
        for a, lam in zip(rng.uniform(0, 1, 40), rng.uniform(1, 3, 40)):
            products = CombustionService.combustion_products(a, lam, 1.3)
            o2 = CombustionService.oxygen_supplied(a, lam, 1.3)
            reactants = GasStream({Species.O2: o2, Species.N2: o2 * 79 / 21})
            before = fuel_atoms(a, 1.3)
            for atom, count in reactants.atom_flows().items():
                before[atom] = before.get(atom, 0.0) + count
            after = products.atom_flows()
            for atom in ("N", "H", "O"):
                self.assertAlmostEqual(after.get(atom, 0.0), before.get(atom, 0.0), places=12)

    def test_rich_mixture_rejected(self):
        with self.assertRaises(RichMixtureError):
            CombustionService.combustion_products(0.2, 0.9, 1.0)


class FuelDemandTests(SimpleTestCase):

    def test_peak_efficiency_anchor(self):
        nh3, h2 = EngineService.fuel_for_power(89.5, CURVE)
        self.assertAlmostEqual(EngineService.fuel_lhv_kw(nh3, h2), 89.5 / 0.3934, places=9)
        self.assertAlmostEqual(EngineService.fuel_lhv_kw(nh3, h2), 227.5, delta=0.05)

    def test_hydrogen_mass_share(self):
        nh3, h2 = EngineService.fuel_for_power(120.0, CURVE)
        self.assertAlmostEqual(100.0 * h2 / (nh3 + h2), 2.87, delta=0.05)

    def test_efficiency_round_trip(self):
        for power in np.linspace(5.0, 230.0, 46):
            nh3, h2 = EngineService.fuel_for_power(power, CURVE)
            self.assertAlmostEqual(EngineService.efficiency_of(nh3, h2, power),
                                   CURVE.combined_efficiency(power), places=12)

    def test_fuel_increases_with_power(self):
        powers = np.linspace(5.0, 230.0, 451)
        fuel = [sum(EngineService.fuel_for_power(p, CURVE)) for p in powers]
        self.assertTrue(all(b > a for a, b in zip(fuel, fuel[1:])))

    def test_single_interior_maximum(self):
        powers = np.linspace(5.0, 230.0, 901)
        eta = np.array([CURVE.combined_efficiency(p) for p in powers])
        peak = int(np.argmax(eta))
        self.assertTrue(0 < peak < len(powers) - 1)
        self.assertTrue(np.all(np.diff(eta[:peak + 1]) >= 0))
        self.assertTrue(np.all(np.diff(eta[peak:]) <= 0))
        self.assertAlmostEqual(powers[peak], 89.5, delta=0.5)

    def test_outside_envelope(self):
        with self.assertRaises(EnvelopeError) as ctx:
            EngineService.fuel_for_power(240.0, CURVE)
        self.assertEqual((ctx.exception.p_min_kw, ctx.exception.p_max_kw), (5.0, 230.0))


class EnergyBalanceTests(SimpleTestCase):

    def test_balance_closes_over_envelope(self):
        for power in np.linspace(5.0, 230.0, 24):
            point = EngineService.energy_balance(power, CURVE)
            outputs = (point.w_gen_kw / point.generator_efficiency + point.exhaust_heat_kw
                       + point.coolant_heat_kw + point.lubrication_heat_kw)
            self.assertAlmostEqual(outputs / point.fuel_lhv_kw, 1.0, delta=1e-9)
            self.assertTrue(400.0 <= point.exhaust_temperature_k <= 1300.0)

    def test_exhaust_temperature_targets(self):
        rated = EngineService.energy_balance(230.0, CURVE)
        self.assertAlmostEqual(rated.exhaust_temperature_k, 873.0, delta=50.0)
        peak = EngineService.energy_balance(89.5, CURVE)
        self.assertAlmostEqual(peak.exhaust_temperature_k, 864.0, delta=5.0)

    def test_no_coolant_or_friction_gives_hottest_exhaust(self):
        n = len(CURVE.power_kw)
        bare = replace(CURVE, coolant_fraction=(0.0,) * n, lubrication_fraction=(0.0,) * n)
        hottest = EngineService.energy_balance(150.0, bare, excess_air_ratio=2.5)
        self.assertAlmostEqual(hottest.exhaust_heat_kw, hottest.fuel_lhv_kw - 150.0, places=9)
        no_coolant = EngineService.energy_balance(150.0, replace(CURVE, coolant_fraction=(0.0,) * n),
                                                  excess_air_ratio=2.5)
        normal = EngineService.energy_balance(150.0, CURVE, excess_air_ratio=2.5)
        self.assertGreater(hottest.exhaust_temperature_k, no_coolant.exhaust_temperature_k)
        self.assertGreater(no_coolant.exhaust_temperature_k, normal.exhaust_temperature_k)

    def test_inconsistent_split_rejected(self):
        n = len(CURVE.power_kw)
        with self.assertRaises(CalibrationError):
            replace(CURVE, coolant_fraction=(0.9,) * n)


class HighTemperatureHeatTests(SimpleTestCase):

    def test_clamped_at_or_below_decomposition_temperature(self):
        point = EngineService.energy_balance(89.5, CURVE)
        self.assertEqual(EngineService.high_temp_heat(point, point.exhaust_temperature_k), 0.0)
        self.assertEqual(EngineService.high_temp_heat(point, point.exhaust_temperature_k + 10.0), 0.0)

    def test_rated_power_heat_matches_enthalpy_integration(self):
        point = EngineService.energy_balance(230.0, CURVE)
        heat = EngineService.high_temp_heat(point, 723.15)
        self.assertGreater(heat, 0.0)
        low = EngineService.low_grade_exhaust_heat(point, 723.15)
        self.assertAlmostEqual(heat + low, point.exhaust_heat_kw, delta=1e-6 * point.exhaust_heat_kw)

    def test_non_decreasing_in_exhaust_temperature(self):
        heats = [EngineService.high_temp_heat(EngineService.energy_balance(p, CURVE), 723.15)
                 for p in np.linspace(90.0, 230.0, 15)]
        self.assertTrue(all(b >= a for a, b in zip(heats, heats[1:])))
