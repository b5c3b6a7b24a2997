import numpy as np
from django.test import SimpleTestCase
from scipy.integrate import trapezoid

from system.exceptions import ArgumentError, TemperatureRangeError, UnsupportedSpeciesError

from .constants import Species
from .domain import GasStream
from .services import ThermoService


def trapezoid_enthalpy(species, t_to, points=20001):
    poly = ThermoService.default_db().polynomial(species)
    grid = np.linspace(298.15, t_to, points)
    return trapezoid([poly.cp(t) for t in grid], grid)


class SensibleEnthalpyTests(SimpleTestCase):

    def test_zero_at_reference_for_every_species(self):
        for species in Species.ALL_SPECIES:
            self.assertEqual(ThermoService.sensible_enthalpy(species, 298.15), 0.0)

    def test_nitrogen_at_decomposition_temperature(self):
        value = ThermoService.sensible_enthalpy(Species.N2, 723.15)
        self.assertAlmostEqual(value, 12654.6, delta=1.0)
        self.assertAlmostEqual(value, trapezoid_enthalpy(Species.N2, 723.15), delta=0.05)

    def test_ammonia_matches_integrated_cp(self):
        value = ThermoService.sensible_enthalpy(Species.NH3, 723.15)
        self.assertTrue(17000.0 < value < 19000.0)
        self.assertAlmostEqual(value, 17997.5, delta=1.0)
        self.assertAlmostEqual(value, trapezoid_enthalpy(Species.NH3, 723.15), delta=0.05)

    def test_polynomials_continuous_across_mid_point(self):
        db = ThermoService.default_db()
        for species in Species.ALL_SPECIES:
            poly = db.polynomial(species)
            self.assertAlmostEqual(poly.cp(1000.0 - 1e-9), poly.cp(1000.0 + 1e-9), delta=0.05)
            self.assertGreater(poly.cp(250.0), 0.0)

    def test_out_of_range_temperature_names_species_and_bounds(self):
        with self.assertRaises(TemperatureRangeError) as ctx:
            ThermoService.sensible_enthalpy(Species.H2, 1600.0)
        self.assertEqual(ctx.exception.species, Species.H2)
        self.assertIn("250.00-1500.00", str(ctx.exception))


class StreamEnthalpyTests(SimpleTestCase):

    def test_same_temperature_is_zero(self):
        stream = GasStream({Species.NH3: 0.3, Species.H2: 0.7})
        self.assertEqual(ThermoService.stream_enthalpy_delta(stream, 500.0, 500.0), 0.0)

    def test_pure_nitrogen(self):
        stream = GasStream({Species.N2: 1.0})
        duty = ThermoService.stream_enthalpy_delta(stream, 298.15, 723.15)
        self.assertAlmostEqual(duty, ThermoService.sensible_enthalpy(Species.N2, 723.15), places=9)

    def test_equimolar_mixture_is_mean(self):
        mixed = GasStream({Species.H2: 0.5, Species.N2: 0.5})
        duty = ThermoService.stream_enthalpy_delta(mixed, 298.15, 723.15)
        mean = 0.5 * (ThermoService.sensible_enthalpy(Species.H2, 723.15)
                      + ThermoService.sensible_enthalpy(Species.N2, 723.15))
        self.assertAlmostEqual(duty, mean, places=8)

    def test_linear_and_antisymmetric_over_random_streams(self):
        rng = np.random.default_rng(7)
        for _ in range(50):
            flows = dict(zip(Species.ALL_SPECIES, rng.uniform(0.0, 2.0, 6)))
            stream = GasStream(flows)
            t1, t2 = rng.uniform(260.0, 1490.0, 2)
            forward = ThermoService.stream_enthalpy_delta(stream, t1, t2)
            backward = ThermoService.stream_enthalpy_delta(stream, t2, t1)
            self.assertEqual(forward, -backward)
            doubled = ThermoService.stream_enthalpy_delta(stream.scaled(2.0), t1, t2)
            self.assertAlmostEqual(doubled, 2.0 * forward, delta=1e-9 * abs(forward) + 1e-12)

    def test_negative_flow_rejected(self):
        with self.assertRaises(ArgumentError):
            GasStream({Species.NH3: -0.1})


class DutyTests(SimpleTestCase):

    def test_preheat_edges(self):
        self.assertEqual(ThermoService.preheat_duty(0.0, 298.15, 723.15), 0.0)
        self.assertAlmostEqual(ThermoService.preheat_duty(1.0, 298.15, 298.15), 23300.0, places=9)

    def test_preheat_to_decomposition_temperature(self):
        duty = ThermoService.preheat_duty(1.0, 298.15, 723.15)
        self.assertAlmostEqual(duty / 1000.0, 41.2975, delta=0.002)
        self.assertAlmostEqual(duty, 23300.0 + trapezoid_enthalpy(Species.NH3, 723.15), delta=0.1)

    def test_preheat_negative_flow(self):
        with self.assertRaises(ArgumentError):
            ThermoService.preheat_duty(-1.0, 298.15, 723.15)

    def test_decomposition_enthalpy(self):
        self.assertEqual(ThermoService.decomposition_enthalpy(298.15), 46.1)
        value = ThermoService.decomposition_enthalpy(723.15)
        self.assertAlmostEqual(value, 53.076, delta=0.002)
        # direct bookkeeping: products heated minus reactant heated
        hs = ThermoService.sensible_enthalpy
        bookkeeping = 46.1 + (1.5 * hs(Species.H2, 723.15) + 0.5 * hs(Species.N2, 723.15)
                              - hs(Species.NH3, 723.15)) / 1000.0
        self.assertAlmostEqual(value, bookkeeping, places=12)

    def test_hydrogen_production_arithmetic(self):
        result = ThermoService.hydrogen_production_arithmetic(0.40)
        self.assertAlmostEqual(result["heat_demand_kj_mol"], 69.4, delta=1e-9)
        self.assertAlmostEqual(result["hydrogen_energy_kj_mol"], 360.0, delta=1e-9)
        self.assertAlmostEqual(result["heater_share"] * 100.0, 48.2, delta=0.1)


class EquilibriumAndHeatingValueTests(SimpleTestCase):

    def test_equilibrium_constant_golden(self):
        self.assertAlmostEqual(ThermoService.equilibrium_constant(723.15), 0.006521, delta=5e-6)

    def test_equilibrium_constant_decreasing(self):
        temperatures = np.linspace(400.0, 1200.0, 401)
        values = [ThermoService.equilibrium_constant(t) for t in temperatures]
        self.assertTrue(all(b < a for a, b in zip(values, values[1:])))

    def test_equilibrium_constant_range(self):
        with self.assertRaises(TemperatureRangeError):
            ThermoService.equilibrium_constant(350.0)

    def test_lhv(self):
        self.assertEqual(ThermoService.lhv(Species.H2), 120.0)
        self.assertEqual(ThermoService.lhv(Species.NH3), 18.6)
        with self.assertRaises(UnsupportedSpeciesError):
            ThermoService.lhv(Species.N2)
