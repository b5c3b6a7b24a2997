import numpy as np
from django.test import SimpleTestCase

from system.exceptions import (
    ArgumentError,
    BedCapacityError,
    BedDimensionError,
    ConversionUnreachableError,
)
from thermo.constants import Species
from thermo.domain import GasStream
from thermo.services import ThermoService

from .domain import CatalystBed
from .services import KineticsService, ReactorService

BED = CatalystBed()
T = BED.temperature_k
# Feed-solver goldens
LONG_BED = CatalystBed(length_m=0.8)


def pure_inlet(ghsv, bed=BED):
    return ReactorService.pure_feed(bed.feed_for_ghsv(ghsv), bed)


class RateLawTests(SimpleTestCase):

    def test_golden_value(self):
        rate = KineticsService.rate(723.15, 0.5, 0.375, 0.125, BED)
        self.assertAlmostEqual(rate, 80.831, delta=0.01)

    def test_zero_at_equilibrium(self):
        x = KineticsService.equilibrium_conversion(T, 100.0)
        total = 1.0 + x
        p = (1.0 * (1 - x) / total, 1.5 * x / total, 0.5 * x / total)
        rate = KineticsService.rate(T, *p, BED)
        forward = KineticsService.rate_constant(T, BED) * (p[0] ** 2 / p[1] ** 3) ** BED.beta
        self.assertLess(abs(rate), 1e-9 * forward)

    def test_forward_dominant_limit(self):
        rate = KineticsService.rate(T, 1.0, 1e-3, 1e-6, BED)
        limit = KineticsService.rate_constant(T, BED) * (1.0 / 1e-9) ** BED.beta
        self.assertAlmostEqual(rate / limit, 1.0, places=6)

    def test_sign_against_equilibrium(self):
        rng = np.random.default_rng(11)
        kd2 = 1.0 / ThermoService.equilibrium_constant(T) ** 2
        checked = 0
        for _ in range(500):
            p_nh3, p_h2, p_n2 = rng.uniform(1e-3, 1.0, 3)
            quotient = p_n2 * p_h2 ** 3 / p_nh3 ** 2
            if abs(quotient / kd2 - 1.0) < 1e-6:
                continue
            rate = KineticsService.rate(T, p_nh3, p_h2, p_n2, BED)
            if quotient < kd2:
                self.assertGreater(rate, 0.0)
            else:
                self.assertLess(rate, 0.0)
            checked += 1
        self.assertGreater(checked, 400)

    def test_inlet_without_hydrogen_is_finite(self):
        rate = KineticsService.rate(T, 1.0, 0.0, 0.0, BED)
        self.assertTrue(np.isfinite(rate))
        self.assertGreater(rate, 0.0)


class PlugFlowTests(SimpleTestCase):

    def test_golden_conversion_at_5000(self):
        result = ReactorService.integrate_pfr(pure_inlet(5000.0), BED)
        self.assertAlmostEqual(result.conversion, 0.9957912, delta=1e-6)
        self.assertAlmostEqual(result.ghsv_per_h, 5000.0, places=6)

    def test_agrees_with_fixed_step_oracle(self):
        inlet = pure_inlet(30000.0)
        adaptive = ReactorService.integrate_pfr(inlet, BED)
        oracle = ReactorService.integrate_pfr_fixed_step(inlet, BED)
        self.assertAlmostEqual(adaptive.conversion, 0.60923, delta=1e-4)
        self.assertLess(abs(adaptive.conversion - oracle.conversion), 1e-6)

    def test_random_cases_against_oracle(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            ghsv = 10 ** rng.uniform(3.0, 5.0)
            feed = BED.feed_for_ghsv(ghsv)
            h2_share, n2_share = rng.uniform(0.0, 0.2, 2)
            inlet = GasStream({Species.NH3: feed, Species.H2: h2_share * feed, Species.N2: n2_share * feed},
                              temperature_k=T, pressure_kpa=BED.pressure_kpa)
            adaptive = ReactorService.integrate_pfr(inlet, BED)
            oracle = ReactorService.integrate_pfr_fixed_step(inlet, BED, steps=20000)
            self.assertLess(abs(adaptive.conversion - oracle.conversion), 1e-6)

    def test_oracle_step_doubling(self):
        inlet = pure_inlet(100000.0)
        coarse = ReactorService.integrate_pfr_fixed_step(inlet, BED, steps=20000)
        fine = ReactorService.integrate_pfr_fixed_step(inlet, BED, steps=40000)
        self.assertLess(abs(coarse.conversion - fine.conversion), 1e-6)

    def test_atom_balance(self):
        inlet = GasStream({Species.NH3: 2.0, Species.H2: 0.3, Species.N2: 0.1},
                          temperature_k=T, pressure_kpa=BED.pressure_kpa)
        outlet = ReactorService.integrate_pfr(inlet, BED).outlet
        before, after = inlet.atom_flows(), outlet.atom_flows()
        for atom in ("N", "H"):
            self.assertAlmostEqual(after[atom] / before[atom], 1.0, delta=1e-12)

    def test_short_bed_leaves_inlet_unchanged(self):
        bed = BED.with_length(1e-12)
        result = ReactorService.integrate_pfr(pure_inlet(30000.0, BED), bed)
        self.assertLess(result.conversion, 1e-6)

    def test_long_residence_reaches_equilibrium(self):
        result = ReactorService.integrate_pfr(pure_inlet(500.0), BED)
        x_eq = KineticsService.equilibrium_conversion(T, BED.pressure_kpa)
        self.assertEqual(result.conversion, x_eq)

    def test_heat_duty(self):
        inlet = pure_inlet(30000.0)
        result = ReactorService.integrate_pfr(inlet, BED)
        expected = inlet.flow(Species.NH3) * result.conversion * ThermoService.decomposition_enthalpy(T) * 1000
        self.assertAlmostEqual(result.heat_duty_w, expected, places=6)

    def test_bad_inputs(self):
        with self.assertRaises(BedDimensionError):
            CatalystBed(length_m=0.0)
        with self.assertRaises(ArgumentError):
            ReactorService.integrate_pfr(GasStream({Species.N2: 1.0}, temperature_k=T), BED)
        with self.assertRaises(ArgumentError):
            ReactorService.integrate_pfr(GasStream({Species.NH3: 1.0}, temperature_k=700.0), BED)


class ConversionCurveTests(SimpleTestCase):

    def test_strictly_decreasing_past_equilibrium_plateau(self):
        curve = ReactorService.conversion_curve(BED, np.geomspace(6000.0, 150000.0, 30))
        conversions = [p.conversion for p in curve]
        self.assertTrue(all(b < a for a, b in zip(conversions, conversions[1:])))
        rates = [p.h2_rate_mol_s for p in curve]
        self.assertTrue(all(b >= a for a, b in zip(rates, rates[1:])))

    def test_non_increasing_over_low_space_velocities(self):
        curve = ReactorService.conversion_curve(BED, np.linspace(1000.0, 30000.0, 30))
        conversions = [p.conversion for p in curve]
        x_eq = KineticsService.equilibrium_conversion(T, BED.pressure_kpa)
        self.assertEqual(conversions[0], x_eq)
        self.assertTrue(all(x <= x_eq for x in conversions))
        for a, b in zip(conversions, conversions[1:]):
            if a < x_eq:
                self.assertLess(b, a)
            else:
                self.assertLessEqual(b, a)
        self.assertLess(conversions[-1], x_eq)

    def test_mixed_inlet_stops_at_its_own_equilibrium(self):
        inlet = GasStream({Species.NH3: 0.01, Species.H2: 0.003, Species.N2: 0.001},
                          temperature_k=T, pressure_kpa=BED.pressure_kpa)
        x_cap = ReactorService.inlet_equilibrium(inlet, BED)
        self.assertLess(x_cap, KineticsService.equilibrium_conversion(T, BED.pressure_kpa))
        self.assertEqual(ReactorService.integrate_pfr(inlet, BED).conversion, x_cap)

    def test_characteristic_is_capped_and_non_increasing_in_feed(self):
        x_eq = KineticsService.equilibrium_conversion(T, BED.pressure_kpa)
        feeds = np.geomspace(1e-3, ReactorService.capacity(BED)[0], 40)
        conversions = [ReactorService.conversion_at_feed(feed, BED) for feed in feeds]
        self.assertEqual(conversions[0], x_eq)
        self.assertTrue(all(x <= x_eq for x in conversions))
        self.assertTrue(all(b <= a for a, b in zip(conversions, conversions[1:])))
        self.assertLess(conversions[-1], x_eq)

    def test_rejects_non_positive_ghsv(self):
        with self.assertRaises(ArgumentError):
            ReactorService.conversion_curve(BED, [1000.0, 0.0])


class FeedAndSizingTests(SimpleTestCase):

    def test_zero_demand(self):
        feed, _ = ReactorService.solve_feed_for_h2(0.0, BED)
        self.assertEqual(feed, 0.0)

    def test_tiny_demand_runs_at_equilibrium(self):
        feed, conversion = ReactorService.solve_feed_for_h2(1e-4, BED)
        x_eq = KineticsService.equilibrium_conversion(T, BED.pressure_kpa)
        self.assertAlmostEqual(conversion, x_eq, delta=1e-8)
        self.assertAlmostEqual(feed, 1e-4 / (1.5 * x_eq), delta=1e-12)

    def test_golden_feed_and_round_trip(self):
        feed, conversion = ReactorService.solve_feed_for_h2(4.0, LONG_BED)
        self.assertAlmostEqual(feed, 3.62966, delta=2e-4)
        self.assertAlmostEqual(conversion, 0.734687, delta=5e-5)
        self.assertLess(abs(1.5 * feed * conversion - 4.0), 1e-8 * 4.0)
        inlet = ReactorService.pure_feed(feed, LONG_BED)
        produced = ReactorService.integrate_pfr(inlet, LONG_BED).outlet.flow(Species.H2)
        self.assertLess(abs(produced - 4.0), 1e-8 * 4.0)

    def test_capacity_exceeded(self):
        _, capacity = ReactorService.capacity(LONG_BED)
        self.assertAlmostEqual(capacity, 6.6043, delta=1e-3)
        with self.assertRaises(BedCapacityError) as ctx:
            ReactorService.solve_feed_for_h2(capacity * 1.01, LONG_BED)
        self.assertAlmostEqual(ctx.exception.capacity_mol_s, capacity)

    def test_size_catalyst_golden_and_linearity(self):
        volume = ReactorService.size_catalyst(0.5, 0.95, BED)
        self.assertAlmostEqual(volume, 0.0082077, delta=2e-6)
        doubled = ReactorService.size_catalyst(1.0, 0.95, BED)
        self.assertAlmostEqual(doubled / volume, 2.0, delta=1e-6)

    def test_size_catalyst_unreachable_conversion(self):
        with self.assertRaises(ConversionUnreachableError) as ctx:
            ReactorService.size_catalyst(0.5, 0.999, BED)
        self.assertIn("equilibrium", str(ctx.exception))
