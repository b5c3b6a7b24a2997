import json
import os
import tempfile
from dataclasses import replace
from io import StringIO
from unittest import mock

import numpy as np
import pandas as pd
from django.core.management import call_command
from django.test import SimpleTestCase

from adu.services import KineticsService
from recovery.constants import Measure
from system.constants import Topology
from system.domain import SystemConfig
from system.exceptions import ArgumentError, UnreachableTargetError
from system.repositories import OutputRepository
from system.services import ConfigService, SystemService

from .constants import FEASIBLE, ISO_POWER_HALF_WIDTH, MAP_COLUMNS
from .domain import CurvePoint, EfficiencyMap, OptimalCurve, SizingSweepRow
from .services import ExploreService
from .tasks import evaluate_map_row

ICE = SystemConfig(topology=Topology.ICE_HYBRID)
FC = SystemConfig(topology=Topology.FC_HYBRID)
COMPOSITE = SystemConfig(topology=Topology.COMPOSITE)

COARSE_KW = 10.0


def toy_map(eta, w_sys, w_fc=(0.0, 10.0), w_gen=(0.0, 10.0), step=10.0):
    eta = np.array(eta, dtype=float)
    return EfficiencyMap(topology=Topology.COMPOSITE, measure=Measure.BOTH, fingerprint="toy", step_kw=step,
                         w_gen_kw=np.array(w_gen), w_fc_kw=np.array(w_fc), w_sys_kw=np.array(w_sys, dtype=float),
                         eta_sys=eta, mask=np.full(eta.shape, FEASIBLE, dtype=object))


class GridTests(SimpleTestCase):

    def test_axes_cover_envelopes(self):
        w_gen, w_fc = ExploreService.axes(COMPOSITE, COARSE_KW)
        envelopes = SystemService.envelopes(COMPOSITE)
        self.assertEqual(w_gen[0], 0.0)
        self.assertEqual(w_gen[1], envelopes["ice"][0])
        self.assertEqual(w_gen[-1], envelopes["ice"][1])
        self.assertEqual(w_fc[-1], envelopes["fc"][1])
        self.assertTrue(np.all(np.diff(w_gen) > 0))

    def test_single_engine_axes(self):
        self.assertEqual(list(ExploreService.axes(ICE, COARSE_KW)[1]), [0.0])
        self.assertEqual(list(ExploreService.axes(FC, COARSE_KW)[0]), [0.0])

    def test_bad_grids(self):
        with self.assertRaises(ArgumentError):
            ExploreService.axes(COMPOSITE, 0.0)
        with self.assertRaises(ArgumentError):
            ExploreService.build_map(COMPOSITE, COARSE_KW, w_gen_values=[], w_fc_values=[10.0])

    def test_single_point_map(self):
        emap = ExploreService.build_map(COMPOSITE, COARSE_KW, w_gen_values=[40.0], w_fc_values=[30.0])
        result = SystemService.evaluate(COMPOSITE, 40.0, 30.0)
        self.assertEqual(emap.shape, (1, 1))
        self.assertEqual(emap.w_sys_kw[0, 0], result.w_sys_kw)
        self.assertEqual(emap.eta_sys[0, 0], result.eta_sys)

    def test_infeasible_points_are_masked(self):
        emap = ExploreService.build_map(ICE, COARSE_KW, w_gen_values=[50.0, 500.0], w_fc_values=[0.0])
        self.assertEqual(emap.mask[0, 0], FEASIBLE)
        self.assertEqual(emap.mask[1, 0], "envelope")
        self.assertTrue(np.isnan(emap.w_sys_kw[1, 0]))
        self.assertTrue(np.isnan(emap.eta_sys[1, 0]))

    def test_map_frame_columns(self):
        emap = ExploreService.build_map(ICE, COARSE_KW)
        frame = emap.to_frame()
        self.assertEqual(list(frame.columns), MAP_COLUMNS)
        self.assertEqual(len(frame), emap.w_gen_kw.size)

    def test_task_rows_match_in_process_rows(self):
        data = ConfigService.validate({})
        cfg = ConfigService.build(data).system.with_topology(Topology.COMPOSITE)
        local = ExploreService.build_map(cfg, 20.0)
        tasked = ExploreService.build_map(cfg, 20.0, config_data=data)
        np.testing.assert_array_equal(local.w_sys_kw, tasked.w_sys_kw)
        np.testing.assert_array_equal(local.eta_sys, tasked.eta_sys)
        self.assertEqual(local.mask.tolist(), tasked.mask.tolist())
        self.assertEqual(local.fingerprint, tasked.fingerprint)

    def test_row_task_reports_fully_masked_rows(self):
        data = ConfigService.validate({})
        with self.assertLogs("explore.tasks", level="INFO") as logs:
            row = evaluate_map_row(data, 500.0, [0.0])
        self.assertEqual(row, [[None, None, "envelope"]])
        self.assertIn("W_gen=500.0 kW has no feasible point", logs.output[0])

    def test_measure_dominance_on_maps(self):
        maps = {m: ExploreService.build_map(COMPOSITE.with_measure(m), COARSE_KW) for m in Measure.ALL_MEASURES}
        feasible = maps["I"].feasible
        for m in Measure.ALL_MEASURES:
            np.testing.assert_array_equal(maps[m].feasible, feasible)
        eta = {m: maps[m].eta_sys[feasible] for m in maps}
        self.assertTrue(np.all(eta["IV"] >= eta["II"] - 1e-12))
        self.assertTrue(np.all(eta["IV"] >= eta["III"] - 1e-12))
        self.assertTrue(np.all(eta["II"] >= eta["I"] - 1e-12))
        self.assertTrue(np.all(eta["III"] >= eta["I"] - 1e-12))


class OptimalSplitTests(SimpleTestCase):

    def test_ties_go_to_larger_fuel_cell_share(self):
        emap = toy_map(eta=[[0.0, 0.4], [0.4, 0.5]], w_sys=[[0.0, 10.0], [10.0, 20.0]])
        curve = ExploreService.optimal_split(emap, [10.0])
        self.assertEqual((curve.points[0].w_gen_kw, curve.points[0].w_fc_kw), (0.0, 10.0))

    def test_unreachable_target(self):
        emap = toy_map(eta=[[0.0, 0.4], [0.4, 0.5]], w_sys=[[0.0, 10.0], [10.0, 20.0]])
        with self.assertRaises(UnreachableTargetError) as ctx:
            ExploreService.optimal_split(emap, [50.0])
        self.assertEqual(ctx.exception.max_w_sys_kw, 20.0)

    def test_curve_properties(self):
        emap = ExploreService.build_map(COMPOSITE, COARSE_KW)
        curve = ExploreService.optimal_split(emap, curve_step_kw=10.0)
        band = ISO_POWER_HALF_WIDTH * COARSE_KW
        targets = [p.target_kw for p in curve.points]
        self.assertEqual(targets, sorted(targets))
        self.assertEqual(targets[-1], emap.max_w_sys_kw)
        max_eta = np.nanmax(emap.eta_sys)
        for point in curve.points:
            self.assertLessEqual(abs(point.w_sys_kw - point.target_kw), band)
            self.assertLessEqual(point.eta_sys, max_eta)
            single = [emap.eta_sys[i, j] for i, j in zip(*np.nonzero(emap.feasible))
                      if (emap.w_gen_kw[i] == 0.0 or emap.w_fc_kw[j] == 0.0)
                      and abs(emap.w_sys_kw[i, j] - point.target_kw) <= band]
            if single:
                self.assertGreaterEqual(point.eta_sys, max(single))

    def test_refinement_never_worsens_a_pick(self):
        emap = ExploreService.build_map(COMPOSITE, COARSE_KW)
        plain = ExploreService.optimal_split(emap, [60.0, 120.0])
        refined = ExploreService.optimal_split(emap, [60.0, 120.0], cfg=COMPOSITE, refine=True)
        self.assertTrue(refined.refined)
        for grid_pick, polished in zip(plain.points, refined.points):
            self.assertGreaterEqual(polished.eta_sys, grid_pick.eta_sys)
            self.assertLessEqual(abs(polished.w_sys_kw - polished.target_kw), ISO_POWER_HALF_WIDTH * COARSE_KW)

    def test_refinement_needs_config(self):
        emap = toy_map(eta=[[0.0, 0.4], [0.4, 0.5]], w_sys=[[0.0, 10.0], [10.0, 20.0]])
        with self.assertRaises(ArgumentError):
            ExploreService.optimal_split(emap, [10.0], refine=True)


class MeasureExtremesTests(SimpleTestCase):

    def test_ice_hybrid_regressions(self):
        table = ExploreService.measure_extremes(ICE)
        self.assertAlmostEqual(table["IV"].max_eta_sys, 0.3878, delta=0.015)
        self.assertAlmostEqual(table["IV"].max_w_sys_kw, 215.8, delta=21.58)
        self.assertAlmostEqual(table["IV"].eta_at_max_w_sys, 0.2883, delta=0.015)
        self.assertAlmostEqual(table["I"].max_eta_sys, 0.3559, delta=0.015)
        self.assertAlmostEqual(table["I"].w_sys_at_max_eta_kw, 91.0, delta=9.1)
        self.assertAlmostEqual(table["I"].max_w_sys_kw, 191.2, delta=19.12)
        self.assertAlmostEqual(table["IV"].max_eta_sys - table["I"].max_eta_sys, 0.046, delta=0.01)

    def test_fuel_cell_hybrid_measure_pairs(self):
        table = ExploreService.measure_extremes(FC, step_kw=2.0)
        self.assertEqual(table["I"], replace(table["III"], measure="I"))
        self.assertEqual(table["II"], replace(table["IV"], measure="II"))
        self.assertAlmostEqual(table["I"].max_eta_sys, 0.3968, delta=0.015)
        self.assertAlmostEqual(table["I"].w_sys_at_max_eta_kw, 9.82, delta=0.982)
        self.assertAlmostEqual(table["I"].max_w_sys_kw, 83.9, delta=8.39)
        self.assertAlmostEqual(table["I"].eta_at_max_w_sys, 0.1915, delta=0.015)
        self.assertGreaterEqual(table["II"].max_eta_sys, table["I"].max_eta_sys)

    def test_composite_regressions(self):
        measures = [Measure.NONE, Measure.HIGH_TEMPERATURE, Measure.BOTH]
        table = ExploreService.measure_extremes(COMPOSITE, step_kw=2.0, measures=measures)
        self.assertAlmostEqual(table["III"].max_eta_sys, 0.4332, delta=0.015)
        for measure, max_w_sys_kw in zip(measures, (141.9, 189.3, 210.3)):
            self.assertAlmostEqual(table[measure].max_w_sys_kw, max_w_sys_kw, delta=0.1 * max_w_sys_kw)

    def test_composite_recovery_raises_both_extremes(self):
        table = ExploreService.measure_extremes(COMPOSITE, step_kw=COARSE_KW,
                                                measures=[Measure.NONE, Measure.BOTH])
        self.assertGreater(table["IV"].max_eta_sys, table["I"].max_eta_sys)
        self.assertGreaterEqual(table["IV"].max_w_sys_kw, table["I"].max_w_sys_kw)


class SizingSweepTests(SimpleTestCase):

    def test_trends(self):
        rows = ExploreService.sizing_sweep(COMPOSITE, [0.1, 0.5, 0.9], 230.0, 5.0)
        eta = [row.max_eta_sys for row in rows]
        power = [row.max_w_sys_kw for row in rows]
        self.assertEqual(eta, sorted(eta, reverse=True))
        self.assertEqual(power, sorted(power))
        for row in rows:
            self.assertGreater(row.load_factor, 0.0)
            self.assertLessEqual(row.load_factor, 1.0)
            self.assertEqual(row.load_factor, row.w_sys_at_max_eta_kw / row.max_w_sys_kw)

    def test_small_engine_is_tagged(self):
        row = ExploreService.sizing_sweep(COMPOSITE, [0.1], 230.0, COARSE_KW)[0]
        self.assertIn("engine_rescaled_x0.10", row.warnings)
        self.assertTrue(row.label)

    def test_bad_arguments(self):
        with self.assertRaises(ArgumentError):
            ExploreService.sizing_sweep(COMPOSITE, [0.0, 0.5], 230.0)
        with self.assertRaises(ArgumentError):
            ExploreService.sizing_sweep(COMPOSITE, [0.5], -1.0)

    def test_row_rejects_out_of_range_share(self):
        with self.assertRaises(ValueError):
            SizingSweepRow(1.0, 230.0, 0.4, 50.0, 100.0, 0.3, (), "")


class TraceTests(SimpleTestCase):

    def setUp(self):
        self.cfg = ICE
        emap = ExploreService.build_map(self.cfg, 5.0)
        self.curve = ExploreService.optimal_split(emap, curve_step_kw=5.0)
        self.best = max(self.curve.points, key=lambda p: p.eta_sys)

    def test_constant_trace_at_best_point(self):
        trace = [(float(t), self.best.target_kw) for t in range(10)]
        result = ExploreService.trace_eval(self.cfg, self.curve, trace)
        self.assertAlmostEqual(result.mean_eta_sys, self.best.eta_sys, places=12)
        self.assertEqual(result.clipped_count, 0)

    def test_zero_trace(self):
        result = ExploreService.trace_eval(self.cfg, self.curve, [(0.0, 0.0), (1.0, 0.0)])
        self.assertEqual((result.energy_in_kj, result.energy_out_kj, result.mean_eta_sys), (0.0, 0.0, 0.0))

    def test_two_level_trace_is_energy_weighted(self):
        low, high = self.curve.points[2], self.curve.points[-3]
        trace = [(0.0, low.target_kw), (10.0, high.target_kw), (40.0, high.target_kw)]
        result = ExploreService.trace_eval(self.cfg, self.curve, trace)
        out = low.target_kw * 10.0 + high.target_kw * 60.0
        fuel = low.target_kw * 10.0 / low.eta_sys + high.target_kw * 60.0 / high.eta_sys
        self.assertAlmostEqual(result.energy_out_kj, out, places=9)
        self.assertAlmostEqual(result.mean_eta_sys, out / fuel, places=12)

    def test_demand_above_curve_is_clipped(self):
        top = self.curve.points[-1].target_kw
        result = ExploreService.trace_eval(self.cfg, self.curve, [(0.0, top + 50.0), (1.0, top)])
        self.assertEqual(result.clipped_count, 1)
        self.assertEqual(result.steps[0].served_kw, top)

    def test_bad_traces(self):
        with self.assertRaises(ArgumentError):
            ExploreService.trace_eval(self.cfg, self.curve, [])
        with self.assertRaises(ArgumentError):
            ExploreService.trace_eval(self.cfg, self.curve, [(0.0, -1.0)])
        with self.assertRaises(ArgumentError):
            ExploreService.trace_eval(self.cfg, self.curve, [(1.0, 5.0), (1.0, 6.0)])
        with self.assertRaises(ArgumentError):
            ExploreService.trace_eval(self.cfg.with_measure(Measure.NONE), self.curve, [(0.0, 10.0)])

    def test_curve_requires_sorted_points(self):
        points = (CurvePoint(20.0, 20.0, 0.0, 20.0, 0.3), CurvePoint(10.0, 10.0, 0.0, 10.0, 0.3))
        with self.assertRaises(ValueError):
            OptimalCurve(Topology.ICE_HYBRID, Measure.BOTH, "x", points)


class CommandTests(SimpleTestCase):

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)
        self.out_dir = os.path.join(self.tmp.name, "out")
        patcher = mock.patch.dict(os.environ, {"AMMONIAPOWER_OUTPUT_DIR": self.out_dir})
        patcher.start()
        self.addCleanup(patcher.stop)

    def config(self, text):
        path = os.path.join(self.tmp.name, "run.yaml")
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(text)
        return path

    def run_command(self, *args, **options):
        out = StringIO()
        call_command(*args, stdout=out, stderr=StringIO(), **options)
        return json.loads(out.getvalue())

    def read(self, name):
        with open(os.path.join(self.out_dir, name), "rb") as handle:
            return handle.read()

    def test_fig6_is_deterministic_and_decreasing(self):
        config = self.config("explore:\n  ghsv_points: 12\n")
        summary = self.run_command("fig", "fig6", config)
        first = self.read("fig6.csv")
        self.run_command("fig", "fig6", config)
        self.assertEqual(first, self.read("fig6.csv"))
        self.assertTrue(first.startswith(b"# units: ghsv_per_h=1/h"))
        frame = OutputRepository.read_csv(os.path.join(self.out_dir, "fig6.csv"))
        conversion = frame["conversion"].to_numpy()
        self.assertTrue(np.all(np.diff(conversion) <= 0.0))
        self.assertLessEqual(conversion.max(), KineticsService.equilibrium_conversion(723.15, 100.0) + 1e-9)
        self.assertLess(conversion[-1], conversion[0])
        manifest = json.loads(self.read("fig6_manifest.json"))
        self.assertEqual(manifest["config_fingerprint"], summary["config_fingerprint"])
        self.assertEqual(manifest["files"]["fig6.csv"]["columns"][0], "ghsv_per_h")

    def test_fig8_rows_satisfy_measure_dominance(self):
        config = self.config("explore:\n  scan_step_kw: 10.0\n")
        self.run_command("fig", "fig8", config)
        frame = OutputRepository.read_csv(os.path.join(self.out_dir, "fig8.csv"))
        eta = {m: frame[frame["measure"] == m]["eta_sys"].to_numpy() for m in Measure.ALL_MEASURES}
        self.assertTrue(np.all(eta["IV"] >= eta["III"] - 1e-9))
        self.assertTrue(np.all(eta["III"] >= eta["I"] - 1e-9))
        self.assertTrue(np.all(eta["II"] >= eta["I"] - 1e-9))
        self.assertIn("exhaust_temperature_k", frame.columns)

    def test_map_command(self):
        summary = self.run_command("map", topology=Topology.FC_HYBRID, measure="II", step=20.0)
        name = "map_fc_hybrid_II"
        frame = OutputRepository.read_csv(os.path.join(self.out_dir, f"{name}.csv"))
        self.assertEqual(list(frame.columns), MAP_COLUMNS)
        self.assertEqual(summary["extremes"]["measure"], "II")
        manifest = json.loads(self.read(f"{name}_manifest.json"))
        self.assertEqual(manifest["measure"], "II")

    def test_curve_command_with_trace(self):
        trace = os.path.join(self.tmp.name, "trace.csv")
        pd.DataFrame({"time_s": [0.0, 5.0, 10.0], "power_kw": [30.0, 80.0, 500.0]}).to_csv(trace, index=False)
        summary = self.run_command("curve", topology=Topology.ICE_HYBRID, step=5.0, trace=trace)
        self.assertEqual(summary["trace"]["clipped_steps"], 1)
        self.assertTrue(os.path.exists(os.path.join(self.out_dir, "trace_ice_hybrid_IV.csv")))
        curve = OutputRepository.read_csv(os.path.join(self.out_dir, "curve_ice_hybrid_IV.csv"))
        self.assertTrue(np.all(np.diff(curve["target_kw"]) > 0))

    def test_sweep_command(self):
        summary = self.run_command("sweep", r_values=[0.3, 0.7], step=COARSE_KW)
        self.assertEqual([row["r_ice"] for row in summary["rows"]], [0.3, 0.7])
        frame = OutputRepository.read_csv(os.path.join(self.out_dir, "sweep.csv"))
        self.assertEqual(list(frame["r_ice"]), [0.3, 0.7])

    def test_manifest_can_be_disabled(self):
        config = self.config("explore:\n  ghsv_points: 5\noutput:\n  write_manifest: false\n")
        summary = self.run_command("fig", "fig6", config)
        self.assertEqual(len(summary["files"]), 1)
