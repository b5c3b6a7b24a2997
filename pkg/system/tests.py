import json
import os
import tempfile
from dataclasses import replace
from io import StringIO
from unittest import mock

import numpy as np
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase

from adu.domain import CatalystBed
from adu.services import KineticsService
from recovery.constants import Measure
from thermo.constants import MOLAR_MASS, Species

from .constants import Topology
from .domain import SystemConfig
from .exceptions import (
    ArgumentError,
    BedCapacityError,
    BedDimensionError,
    ConfigParseError,
    ConfigSchemaError,
    EnvelopeError,
    SlipExceedsDemandError,
    TopologyMismatchError,
)
from .services import ConfigService, SystemService

ICE = SystemConfig(topology=Topology.ICE_HYBRID)
FC = SystemConfig(topology=Topology.FC_HYBRID)
COMPOSITE = SystemConfig(topology=Topology.COMPOSITE)


def write_config(directory, text, name="run.yaml"):
    path = os.path.join(directory, name)
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(text)
    return path


class AuxiliaryLoadTests(SimpleTestCase):

    def test_pump_clamped_when_tank_above_bed_pressure(self):
        self.assertEqual(SystemService.pump_power(10.0, ICE), 0.0)

    def test_pump_work(self):
        cfg = SystemConfig(bed=CatalystBed(pressure_kpa=600.0), tank_pressure_kpa=100.0)
        self.assertAlmostEqual(SystemService.pump_power(10.0, cfg), 0.01 * 5e5 / (600 * 0.8) / 1000, places=12)
        self.assertAlmostEqual(SystemService.pump_power(20.0, cfg), 2 * SystemService.pump_power(10.0, cfg),
                               places=12)

    def test_pump_charged_on_adu_feed_only(self):
        cfg = replace(ICE, bed=CatalystBed(pressure_kpa=1000.0))
        result = SystemService.evaluate(cfg, 89.5, 0.0)
        flows = result.flows
        self.assertGreater(flows.direct_nh3_g_s, 0.0)
        self.assertGreater(result.w_pump_kw, 0.0)
        self.assertEqual(result.w_pump_kw, SystemService.pump_power(flows.adu_feed_g_s, cfg))
        self.assertLess(result.w_pump_kw, SystemService.pump_power(flows.total_nh3_g_s, cfg))

    def test_compressor_specific_work(self):
        cfg = replace(ICE, air_inlet_temperature_k=298.0)
        self.assertAlmostEqual(SystemService.compressor_specific_work(cfg), 82.0, delta=0.5)
        self.assertEqual(SystemService.compressor_power(5.0, replace(ICE, compressor_pressure_ratio=1.0)), 0.0)
        with self.assertRaises(ArgumentError):
            SystemService.compressor_power(5.0, replace(ICE, compressor_pressure_ratio=0.9))

    def test_negative_flows_rejected(self):
        with self.assertRaises(ArgumentError):
            SystemService.pump_power(-1.0, ICE)


class MaterialBalanceTests(SimpleTestCase):

    def assert_atoms_balance(self, flows):
        total = flows.total_nh3_mol_s
        burnt_or_lost = flows.direct_nh3_mol_s + flows.slip_to_ice_mol_s + flows.retentate_nh3_mol_s
        n2 = flows.adu_outlet.flow(Species.N2) if flows.adu_outlet is not None else 0.0
        self.assertAlmostEqual(total, burnt_or_lost + 2 * n2, delta=1e-12 * max(total, 1.0))
        hydrogen = 3 * burnt_or_lost + 2 * flows.h2_demand_mol_s
        self.assertAlmostEqual(3 * total, hydrogen, delta=1e-12 * max(total, 1.0))

    def test_fuel_cell_hybrid_has_no_direct_ammonia(self):
        flows = SystemService.material_balance(FC, 0.0, 5.0)
        self.assertEqual(flows.direct_nh3_mol_s, 0.0)
        self.assertEqual(flows.ice_branch_fraction, 0.0)
        self.assertAlmostEqual(flows.retentate_nh3_mol_s, flows.adu_feed_mol_s * (1 - flows.conversion), places=15)
        self.assert_atoms_balance(flows)

    def test_ice_hybrid_hydrogen_share(self):
        flows = SystemService.material_balance(ICE, 120.0, 0.0)
        ice = flows.ice
        self.assertAlmostEqual(100 * ice.h2_g_s / (ice.h2_g_s + ice.nh3_g_s), 2.87, delta=0.05)
        self.assertLess(flows.adu_feed_g_s, 0.5 * flows.total_nh3_g_s)
        self.assertEqual(flows.retentate_nh3_mol_s, 0.0)
        self.assertAlmostEqual(flows.direct_nh3_mol_s + flows.slip_to_ice_mol_s,
                               ice.nh3_g_s / MOLAR_MASS[Species.NH3], places=12)
        self.assert_atoms_balance(flows)

    def test_composite_atom_balance(self):
        for w_gen, w_fc in ((20.0, 30.0), (60.0, 10.0), (110.0, 100.0)):
            flows = SystemService.material_balance(COMPOSITE, w_gen, w_fc)
            self.assertGreater(flows.ice_branch_fraction, 0.0)
            self.assertLess(flows.ice_branch_fraction, 1.0)
            self.assertAlmostEqual(flows.adu_outlet.flow(Species.H2), flows.h2_demand_mol_s, places=12)
            self.assert_atoms_balance(flows)

    def test_topology_mismatch(self):
        with self.assertRaises(TopologyMismatchError):
            SystemService.material_balance(ICE, 50.0, 10.0)
        with self.assertRaises(TopologyMismatchError):
            SystemService.material_balance(FC, 50.0, 10.0)

    def test_envelopes(self):
        with self.assertRaises(EnvelopeError) as ctx:
            SystemService.material_balance(ICE, 240.0, 0.0)
        self.assertEqual(ctx.exception.stage, "ice_gen")
        with self.assertRaises(EnvelopeError) as ctx:
            SystemService.material_balance(FC, 0.0, 0.5)
        self.assertEqual(ctx.exception.stage, "pemfc")

    def test_bed_capacity(self):
        small = replace(ICE, bed=CatalystBed(area_m2=0.0005))
        with self.assertRaises(BedCapacityError):
            SystemService.material_balance(small, 120.0, 0.0)

    def test_slip_beyond_engine_demand(self):
        poor = 0.05
        with mock.patch("system.services.ReactorService.solve_feed_for_h2",
                        side_effect=lambda demand, bed: (demand / (1.5 * poor), poor)):
            with self.assertRaises(SlipExceedsDemandError) as ctx:
                SystemService.material_balance(ICE, 120.0, 0.0)
        self.assertEqual(ctx.exception.stage, "material_balance")
        self.assertEqual(ctx.exception.conversion, poor)


class EvaluateTests(SimpleTestCase):

    def test_zero_targets(self):
        result = SystemService.evaluate(COMPOSITE, 0.0, 0.0)
        self.assertEqual((result.w_sys_kw, result.eta_sys, result.total_nh3_g_s), (0.0, 0.0, 0.0))

    def test_ice_hybrid_efficiency_regressions(self):
        best = SystemService.evaluate(ICE, 89.5, 0.0)
        self.assertAlmostEqual(best.eta_sys, 0.3878, delta=0.015)
        plain = SystemService.evaluate(ICE.with_measure(Measure.NONE), 91.0, 0.0)
        self.assertAlmostEqual(plain.eta_sys, 0.3559, delta=0.015)

    def test_output_power_identity(self):
        for cfg, w_gen, w_fc in ((ICE, 150.0, 0.0), (FC, 0.0, 80.0), (COMPOSITE, 70.0, 40.0)):
            result = SystemService.evaluate(cfg, w_gen, w_fc)
            expected = w_gen + w_fc - result.w_pump_kw - result.w_comp_kw - result.w_eh_kw
            self.assertEqual(result.w_sys_kw, expected)
            fuel = result.flows.total_nh3_mol_s * MOLAR_MASS[Species.NH3] * 18.6
            self.assertAlmostEqual(result.eta_sys, result.w_sys_kw / fuel, places=12)

    def test_measure_dominance_per_point(self):
        for cfg, w_gen, w_fc in ((ICE, 40.0, 0.0), (ICE, 200.0, 0.0), (FC, 0.0, 60.0), (COMPOSITE, 90.0, 30.0)):
            eta = {m: SystemService.evaluate(cfg.with_measure(m), w_gen, w_fc).eta_sys
                   for m in Measure.ALL_MEASURES}
            self.assertLessEqual(eta["I"], eta["II"] + 1e-12)
            self.assertLessEqual(eta["II"], eta["IV"] + 1e-12)
            self.assertLessEqual(eta["I"], eta["III"] + 1e-12)
            self.assertLessEqual(eta["III"], eta["IV"] + 1e-12)

    def test_fuel_cell_hybrid_measures_collapse(self):
        for w_fc in (2.0, 50.0, 150.0):
            results = {m: SystemService.evaluate(FC.with_measure(m), 0.0, w_fc) for m in Measure.ALL_MEASURES}
            self.assertEqual(results["I"].w_sys_kw, results["III"].w_sys_kw)
            self.assertEqual(results["II"].w_sys_kw, results["IV"].w_sys_kw)
            self.assertEqual(results["I"].q_high_kw, 0.0)
            self.assertGreaterEqual(results["II"].eta_sys, results["I"].eta_sys)

    def test_no_recovery_never_beats_the_engines(self):
        for cfg, w_gen, w_fc in ((ICE, 89.5, 0.0), (FC, 0.0, 10.0), (COMPOSITE, 50.0, 50.0)):
            result = SystemService.evaluate(cfg.with_measure(Measure.NONE), w_gen, w_fc)
            best = max(e for e in (result.eta_ice, result.eta_fc) if e is not None)
            self.assertLess(result.eta_sys, best)

    def test_energy_ledger_closes(self):
        rng = np.random.default_rng(3)
        samples = {
            Topology.ICE_HYBRID: lambda: (rng.uniform(5.0, 230.0), 0.0),
            Topology.FC_HYBRID: lambda: (0.0, rng.uniform(1.0, 230.0)),
            Topology.COMPOSITE: lambda: (rng.uniform(3.0, 115.0), rng.uniform(1.0, 110.0)),
        }
        for topology, draw in samples.items():
            for _ in range(100):
                w_gen, w_fc = draw()
                measure = Measure.ALL_MEASURES[int(rng.integers(4))]
                cfg = SystemConfig(topology=topology, measure=measure)
                energy = SystemService.evaluate(cfg, w_gen, w_fc).energy
                self.assertAlmostEqual(energy.total_kw / energy.fuel_lhv_kw, 1.0, delta=1e-6)
                self.assertGreaterEqual(energy.high_temp_heat_kw, -1e-9)
                self.assertGreaterEqual(energy.low_temp_heat_kw, -1e-9)

    def test_fingerprints_follow_policy(self):
        self.assertNotEqual(ICE.fingerprint, ICE.with_measure(Measure.NONE).fingerprint)
        self.assertEqual(ICE.point_fingerprint, ICE.with_measure(Measure.NONE).point_fingerprint)
        self.assertNotEqual(ICE.point_fingerprint, FC.point_fingerprint)
        self.assertNotEqual(COMPOSITE.point_fingerprint, replace(COMPOSITE, r_ice=0.4).point_fingerprint)

    def test_default_ice_hybrid_golden(self):
        result = SystemService.evaluate(ICE, 89.5, 0.0)
        self.assertAlmostEqual(result.eta_sys, 0.4016, delta=0.002)
        self.assertLessEqual(result.flows.conversion,
                             KineticsService.equilibrium_conversion(ICE.t_dec_k, ICE.bed.pressure_kpa))

    def test_system_never_beats_its_engines_on_ammonia_basis(self):
        points = ((ICE, 40.0, 0.0), (ICE, 89.5, 0.0), (ICE, 200.0, 0.0), (FC, 0.0, 10.0), (FC, 0.0, 150.0),
                  (COMPOSITE, 50.0, 50.0), (COMPOSITE, 100.0, 5.0), (COMPOSITE, 10.0, 100.0))
        for cfg, w_gen, w_fc in points:
            for measure in Measure.ALL_MEASURES:
                result = SystemService.evaluate(cfg.with_measure(measure), w_gen, w_fc)
                best = max(e for e in (result.eta_ice_nh3, result.eta_fc_nh3) if e is not None)
                self.assertLessEqual(result.eta_sys, best)
        ice_only = SystemService.evaluate(ICE, 89.5, 0.0)
        self.assertIsNone(ice_only.eta_fc_nh3)
        self.assertAlmostEqual(ice_only.eta_ice_nh3, 89.5 / ice_only.energy.fuel_lhv_kw, places=12)

    def test_hydrogen_production_is_independent_of_engine_fuel(self):
        nh3_lhv = 18.6 * MOLAR_MASS[Species.NH3]
        h2_lhv = 120.0 * MOLAR_MASS[Species.H2]
        for cfg, w_gen, w_fc in ((ICE, 120.0, 0.0), (FC, 0.0, 60.0), (COMPOSITE, 70.0, 40.0)):
            result = SystemService.evaluate(cfg, w_gen, w_fc)
            flows, energy = result.flows, result.energy
            reacted = flows.h2_demand_mol_s / 1.5
            upgrade = reacted * (1.5 * h2_lhv - nh3_lhv)
            self.assertAlmostEqual(upgrade / reacted, 46.1, delta=0.1)
            expected = result.q_pre_kw + result.q_dec_kw - upgrade - result.product_cooling_kw
            self.assertAlmostEqual(energy.hydrogen_production_kw, expected, delta=1e-8 * energy.fuel_lhv_kw)
            engine_fuel = 0.0
            if flows.ice is not None:
                engine_fuel += flows.ice.fuel_lhv_kw
            if flows.fc is not None:
                engine_fuel += flows.fc.w_fc_kw + flows.fc.heat_kw
            self.assertAlmostEqual(engine_fuel, energy.fuel_lhv_kw + upgrade - energy.retentate_loss_kw,
                                   delta=1e-8 * energy.fuel_lhv_kw)
            self.assertGreater(energy.hydrogen_production_kw, 0.0)

    def test_decomposition_duty_carries_shell_loss(self):
        lossless = replace(ICE, bed=CatalystBed(heat_loss_kw=0.0))
        with_loss = SystemService.evaluate(ICE, 89.5, 0.0)
        without = SystemService.evaluate(lossless, 89.5, 0.0)
        self.assertAlmostEqual(with_loss.q_dec_kw - without.q_dec_kw, ICE.bed.heat_loss_kw, places=9)
        self.assertEqual(SystemService.evaluate(COMPOSITE, 0.0, 0.0).q_dec_kw, 0.0)

    def test_cache_keys_cover_plant_components(self):
        base = SystemService.evaluate(ICE, 89.5, 0.0)
        engine = replace(ICE.engine, efficiency=tuple(e * 1.05 for e in ICE.engine.efficiency))
        better = replace(ICE, engine=engine)
        self.assertNotEqual(better.fingerprint, ICE.fingerprint)
        self.assertNotEqual(better.point_fingerprint, ICE.point_fingerprint)
        self.assertGreater(SystemService.evaluate(better, 89.5, 0.0).eta_sys, base.eta_sys)
        for changed in (replace(ICE, bed=CatalystBed(heat_loss_kw=0.0)),
                        replace(ICE, stack=replace(ICE.stack, cell_count=200))):
            self.assertNotEqual(changed.point_fingerprint, ICE.point_fingerprint)
        self.assertEqual(replace(ICE, r_ice=0.3).fingerprint, ICE.fingerprint)


class ConfigTests(SimpleTestCase):

    def test_shipped_config_matches_defaults(self):
        run = ConfigService.load()
        self.assertEqual(run.system.topology, Topology.ICE_HYBRID)
        self.assertEqual(run.system.measure, Measure.BOTH)
        self.assertEqual(run.data, ConfigService.validate({}))
        self.assertEqual(run.fingerprint, ConfigService.load().fingerprint)

    def test_missing_sections_are_defaulted_and_logged(self):
        with self.assertLogs("system.serializers", level="INFO") as logs:
            data = ConfigService.validate({"bed": {"length_m": 1.0}})
        self.assertEqual(data["bed"]["length_m"], 1.0)
        self.assertEqual(data["bed"]["area_m2"], 0.05)
        self.assertTrue(any("bed.area_m2" in line for line in logs.output))
        self.assertTrue(any("section stack" in line for line in logs.output))

    def test_unknown_key_names_its_path(self):
        with self.assertRaises(ConfigSchemaError) as ctx:
            ConfigService.validate({"bed": {"aera_m2": 0.1}})
        self.assertIn("bed.aera_m2", ctx.exception.errors)
        self.assertEqual(ctx.exception.exit_code, 2)

    def test_output_section_outside_fingerprint(self):
        a = ConfigService.validate({"output": {"directory": "/tmp/a"}})
        b = ConfigService.validate({})
        self.assertEqual(ConfigService.fingerprint(a), ConfigService.fingerprint(b))
        c = ConfigService.validate({"bed": {"length_m": 0.9}})
        self.assertNotEqual(ConfigService.fingerprint(b), ConfigService.fingerprint(c))

    def test_yaml_syntax_error_reports_line(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = write_config(tmp, "bed:\n  area_m2: 0.05\n  length_m: [0.8\n")
            with self.assertRaises(ConfigParseError) as ctx:
                ConfigService.load(path)
        self.assertIsNotNone(ctx.exception.line)

    def test_bad_geometry_is_a_config_error(self):
        with self.assertRaises(BedDimensionError):
            ConfigService.build(ConfigService.validate({"bed": {"area_m2": -1.0}}))

    def test_overrides(self):
        run = ConfigService.load(overrides={"system.topology": Topology.COMPOSITE, "system.measure": "II"})
        self.assertEqual((run.system.topology, run.system.measure), (Topology.COMPOSITE, "II"))


class PointCommandTests(SimpleTestCase):

    def run_point(self, *args, **options):
        out = StringIO()
        call_command("point", *args, stdout=out, stderr=StringIO(), **options)
        return out.getvalue()

    def test_zero_point(self):
        payload = json.loads(self.run_point(wgen=0.0, wfc=0.0))
        self.assertEqual(payload["w_sys_kw"], 0.0)

    def test_matches_library_call(self):
        payload = json.loads(self.run_point(topology=Topology.ICE_HYBRID, measure="IV", wgen=89.5))
        expected = SystemService.evaluate(ICE, 89.5, 0.0)
        self.assertAlmostEqual(payload["eta_sys"], expected.eta_sys, places=12)
        self.assertAlmostEqual(payload["ledger"]["useful_work_kw"], expected.w_sys_kw, places=9)
        self.assertIn("adu_conversion", payload["flows"])

    def test_bad_key_exits_with_config_code(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = write_config(tmp, "system:\n  mesure: IV\n")
            out = StringIO()
            with self.assertRaises(CommandError) as ctx:
                call_command("point", path, stdout=out, stderr=StringIO())
        self.assertEqual(ctx.exception.returncode, 2)
        error = json.loads(out.getvalue())["error"]
        self.assertIn("system.mesure", error["message"])

    def test_infeasible_point_exits_with_one(self):
        out = StringIO()
        with self.assertRaises(CommandError) as ctx:
            call_command("point", topology=Topology.ICE_HYBRID, wgen=500.0, stdout=out, stderr=StringIO())
        self.assertEqual(ctx.exception.returncode, 1)
        self.assertEqual(json.loads(out.getvalue())["error"]["code"], "envelope")
