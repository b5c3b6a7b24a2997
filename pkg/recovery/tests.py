import numpy as np
from django.test import SimpleTestCase

from ice_gen.domain import EngineCurve
from ice_gen.services import EngineService
from pemfc.domain import FcStack
from pemfc.services import FuelCellService
from system.exceptions import ArgumentError

from .constants import Measure
from .domain import HeatPools
from .services import RecoveryService

T_DEC = 723.15


class ClassifyTests(SimpleTestCase):

    def test_no_engines(self):
        pools = RecoveryService.classify(None, None, 0.0, T_DEC)
        self.assertEqual((pools.q_high_kw, pools.q_low_kw), (0.0, 0.0))

    def test_fuel_cell_only_has_no_high_pool(self):
        fc = FuelCellService.solve_current_for_power(100.0, FcStack())
        pools = RecoveryService.classify(None, fc, 5.0, T_DEC)
        self.assertEqual(pools.q_high_kw, 0.0)
        self.assertAlmostEqual(pools.q_low_kw, fc.heat_kw + 5.0, places=12)

    def test_composite_is_additive(self):
        ice = EngineService.energy_balance(200.0, EngineCurve())
        fc = FuelCellService.solve_current_for_power(50.0, FcStack())
        both = RecoveryService.classify(ice, fc, 3.0, T_DEC)
        ice_only = RecoveryService.classify(ice, None, 0.0, T_DEC)
        fc_only = RecoveryService.classify(None, fc, 3.0, T_DEC)
        self.assertAlmostEqual(both.q_high_kw, ice_only.q_high_kw, places=12)
        self.assertAlmostEqual(both.q_low_kw, ice_only.q_low_kw + fc_only.q_low_kw, places=9)

    def test_low_grade_exhaust_flag(self):
        ice = EngineService.energy_balance(200.0, EngineCurve())
        plain = RecoveryService.classify(ice, None, 0.0, T_DEC)
        wider = RecoveryService.classify(ice, None, 0.0, T_DEC, include_low_grade_exhaust=True)
        extra = EngineService.low_grade_exhaust_heat(ice, T_DEC)
        self.assertAlmostEqual(wider.q_low_kw - plain.q_low_kw, extra, places=9)

    def test_negative_product_cooling_rejected(self):
        with self.assertRaises(ArgumentError):
            RecoveryService.classify(None, None, -1.0, T_DEC)


class MeasureTests(SimpleTestCase):

    def test_choices_label_every_measure(self):
        self.assertEqual([value for value, _ in Measure.CHOICES], Measure.ALL_MEASURES)
        self.assertEqual(Measure.CHOICES[0], ("I", "I: No residual heat recovered"))

    def test_zero_demand(self):
        pools = HeatPools(10.0, 10.0)
        for measure in Measure.ALL_MEASURES:
            self.assertEqual(RecoveryService.apply_measure(measure, 0.0, 0.0, pools).w_eh_kw, 0.0)

    def test_surplus_high_heat_covers_preheat(self):
        ledger = RecoveryService.apply_measure(Measure.BOTH, 30.0, 50.0, HeatPools(60.0, 20.0))
        self.assertEqual(ledger.w_eh_kw, 0.0)
        self.assertEqual(ledger.q_high_to_pre_kw, 10.0)
        self.assertEqual(ledger.q_low_to_pre_kw, 20.0)

    def test_high_only(self):
        ledger = RecoveryService.apply_measure(Measure.HIGH_TEMPERATURE, 30.0, 50.0, HeatPools(30.0, 100.0))
        self.assertEqual(ledger.w_eh_kw, 50.0)
        self.assertEqual(ledger.q_low_recovered_kw, 0.0)

    def test_low_only(self):
        ledger = RecoveryService.apply_measure(Measure.LOW_TEMPERATURE, 30.0, 50.0, HeatPools(100.0, 20.0))
        self.assertEqual(ledger.w_eh_kw, 60.0)

    def test_unknown_measure_rejected(self):
        with self.assertRaises(ArgumentError):
            RecoveryService.apply_measure('V', 1.0, 1.0, HeatPools())

    def test_empty_pools_make_measures_equal(self):
        ledgers = [RecoveryService.apply_measure(m, 12.0, 34.0, HeatPools()) for m in Measure.ALL_MEASURES]
        self.assertEqual({ledger.w_eh_kw for ledger in ledgers}, {46.0})

    def test_dominance_and_closure_on_random_inputs(self):
        rng = np.random.default_rng(11)
        for q_pre, q_dec, q_high, q_low in rng.uniform(0.0, 100.0, size=(1000, 4)):
            pools = HeatPools(q_high, q_low)
            w = {}
            for measure in Measure.ALL_MEASURES:
                ledger = RecoveryService.apply_measure(measure, q_pre, q_dec, pools)
                self.assertAlmostEqual(ledger.recovered_kw + ledger.w_eh_kw, q_pre + q_dec, places=9)
                self.assertLessEqual(ledger.q_high_recovered_kw, q_high + 1e-12)
                self.assertLessEqual(ledger.q_low_recovered_kw, q_low + 1e-12)
                self.assertGreaterEqual(ledger.w_eh_kw, 0.0)
                w[measure] = ledger.w_eh_kw
            self.assertGreaterEqual(w['I'] + 1e-9, w['II'])
            self.assertGreaterEqual(w['II'] + 1e-9, w['IV'])
            self.assertGreaterEqual(w['I'] + 1e-9, w['III'])
            self.assertGreaterEqual(w['III'] + 1e-9, w['IV'])
