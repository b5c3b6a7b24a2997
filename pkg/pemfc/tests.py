import math

import numpy as np
from django.test import SimpleTestCase

from system.exceptions import ArgumentError, LimitingCurrentError, StackPowerError
from thermo.constants import FARADAY, GAS_CONSTANT

from .domain import FcStack
from .services import FuelCellService

STACK = FcStack()


class PolarizationTests(SimpleTestCase):

    def test_nernst_pressure_dependence(self):
        base = FuelCellService.nernst(STACK)
        b = GAS_CONSTANT * STACK.temperature_k / (2 * FARADAY)
        doubled = FcStack(h2_pressure_kpa=2 * STACK.h2_pressure_kpa)
        halved = FcStack(o2_pressure_kpa=STACK.o2_pressure_kpa / 2)
        self.assertAlmostEqual(FuelCellService.nernst(doubled) - base, b * math.log(2), places=12)
        self.assertAlmostEqual(base - FuelCellService.nernst(halved), 0.5 * b * math.log(2), places=12)

    def test_ohmic_loss(self):
        self.assertAlmostEqual(FuelCellService.ohmic_overpotential(1.0, STACK), 0.0125 / 0.13, places=12)

    def test_voltage_strictly_decreasing(self):
        grid = np.geomspace(2 * STACK.exchange_current_density, 0.999 * STACK.limiting_current_density, 400)
        voltages = [FuelCellService.cell_voltage(i, STACK) for i in grid]
        self.assertTrue(all(b < a for a, b in zip(voltages, voltages[1:])))

    def test_slope_matches_finite_difference(self):
        grid = np.geomspace(2 * STACK.exchange_current_density, 0.99 * STACK.limiting_current_density, 200)
        for i in grid:
            h = 1e-5 * i
            numeric = (FuelCellService.cell_voltage(i + h, STACK)
                       - FuelCellService.cell_voltage(i - h, STACK)) / (2 * h)
            analytic = FuelCellService.cell_voltage_slope(i, STACK)
            self.assertAlmostEqual(numeric / analytic, 1.0, delta=1e-6)

    def test_limiting_current_rejected(self):
        with self.assertRaises(LimitingCurrentError):
            FuelCellService.cell_voltage(STACK.limiting_current_density, STACK)
        with self.assertRaises(ArgumentError):
            FuelCellService.cell_voltage(0.0, STACK)


class StackPowerTests(SimpleTestCase):

    def test_peak_power(self):
        i_peak, p_max = FuelCellService.peak_power(STACK)
        self.assertAlmostEqual(p_max, 255.4, delta=1.0)
        self.assertTrue(0.0 < i_peak < STACK.limiting_current_density)
        for i in (0.9 * i_peak, min(1.1 * i_peak, 0.999 * STACK.limiting_current_density)):
            self.assertLess(FuelCellService.stack_power_kw(i, STACK), p_max)

    def test_power_round_trip_on_low_branch(self):
        i_peak, p_max = FuelCellService.peak_power(STACK)
        for power in np.linspace(1.0, p_max * 0.999, 50):
            point = FuelCellService.solve_current_for_power(power, STACK)
            self.assertAlmostEqual(point.w_fc_kw / power, 1.0, delta=1e-10)
            self.assertLessEqual(point.current_density, i_peak)

    def test_above_maximum_rejected(self):
        _, p_max = FuelCellService.peak_power(STACK)
        with self.assertRaises(StackPowerError) as ctx:
            FuelCellService.solve_current_for_power(p_max + 1.0, STACK)
        self.assertAlmostEqual(ctx.exception.p_max_kw, p_max, places=9)

    def test_rescaled_stack_scales_peak(self):
        bigger = FuelCellService.rescaled(STACK, 2 * FuelCellService.peak_power(STACK)[1])
        self.assertEqual(bigger.cell_count, 2 * STACK.cell_count)


class HydrogenAndEfficiencyTests(SimpleTestCase):

    def test_faraday_consumption(self):
        single = FcStack(cell_count=1, cell_area_cm2=1.0)
        self.assertAlmostEqual(FuelCellService.hydrogen_flow(1.0, single), 1.0447e-5, delta=1e-8)

    def test_minimum_load_efficiency(self):
        self.assertAlmostEqual(FuelCellService.efficiency(1.0, STACK), 0.7678, delta=0.005)

    def test_energy_closure(self):
        for power in np.linspace(1.0, 230.0, 24):
            point = FuelCellService.solve_current_for_power(power, STACK)
            fuel_kw = point.w_fc_kw / point.efficiency
            self.assertAlmostEqual((point.w_fc_kw + point.heat_kw) / fuel_kw, 1.0, delta=1e-12)
            self.assertGreater(point.heat_kw, 0.0)

    def test_efficiency_falls_with_load(self):
        eta = [FuelCellService.efficiency(p, STACK) for p in np.linspace(1.0, 230.0, 60)]
        self.assertTrue(all(b < a for a, b in zip(eta, eta[1:])))
