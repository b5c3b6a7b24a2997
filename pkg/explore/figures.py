"""
Figure data builders
Each figure id maps to a set of named tables (pandas DataFrames) computed
from one run config; the commands write them as CSV.
"""
import logging
from dataclasses import asdict
from typing import Dict

import numpy as np
import pandas as pd

from adu.services import ReactorService
from recovery.constants import Measure
from system.constants import Topology
from system.domain import RunConfig
from system.exceptions import ArgumentError
from system.services import SystemService

from .constants import FEASIBLE, Figure
from .services import ExploreService

logger = logging.getLogger(__name__)


def _with_measure_column(frame: pd.DataFrame, measure: str) -> pd.DataFrame:
    frame = frame.copy()
    frame.insert(0, "measure", measure)
    return frame


class FigureService:
    """Service for figure data"""

    @staticmethod
    def build(figure: str, run: RunConfig) -> Dict[str, pd.DataFrame]:
        builders = {
            Figure.CONVERSION: FigureService.conversion,
            Figure.ICE_HYBRID: FigureService.ice_hybrid,
            Figure.FC_HYBRID: FigureService.fc_hybrid,
            Figure.COMPOSITE_MAPS: FigureService.composite_maps,
            Figure.OPTIMAL_CURVES: FigureService.optimal_curves,
            Figure.COMPARISON: FigureService.comparison,
            Figure.ENERGY_LEDGERS: FigureService.energy_ledgers,
            Figure.SIZING: FigureService.sizing,
            Figure.LOAD_FACTOR: FigureService.load_factor,
        }
        if figure not in builders:
            raise ArgumentError(f"Unknown figure {figure!r}; expected one of {Figure.ALL_FIGURES}", stage="explore")
        logger.info(f"Building {figure} data")
        return builders[figure](run)

    @staticmethod
    def conversion(run: RunConfig) -> Dict[str, pd.DataFrame]:
        """ADU conversion and H2 production of a pure NH3 feed over a GHSV ladder"""
        explore = run.explore
        ghsv = np.geomspace(explore["ghsv_min_per_h"], explore["ghsv_max_per_h"], explore["ghsv_points"])
        points = ReactorService.conversion_curve(run.system.bed, ghsv, run.system.db)
        frame = pd.DataFrame([asdict(p) for p in points],
                             columns=["ghsv_per_h", "conversion", "h2_rate_mol_s", "nh3_feed_mol_s"])
        return {Figure.CONVERSION: frame}

    @staticmethod
    def _single_engine(run: RunConfig, topology: str, figure: str) -> Dict[str, pd.DataFrame]:
        cfg = run.system.with_topology(topology)
        frames = []
        extremes = []
        for measure in Measure.ALL_MEASURES:
            measured = cfg.with_measure(measure)
            emap = ExploreService.build_map(measured, run.explore["scan_step_kw"], config_data=run.data)
            frame = _with_measure_column(emap.to_frame(), measure)
            engine_eta, exhaust = [], []
            for w_gen, w_fc, mask in zip(frame["w_gen_kw"], frame["w_fc_kw"], frame["mask"]):
                if mask != FEASIBLE or w_gen + w_fc == 0.0:
                    engine_eta.append(np.nan)
                    exhaust.append(np.nan)
                    continue
                result = SystemService.evaluate(measured, w_gen, w_fc)
                engine_eta.append(result.eta_ice if topology == Topology.ICE_HYBRID else result.eta_fc)
                exhaust.append(result.exhaust_temperature_k if result.exhaust_temperature_k is not None else np.nan)
            frame["eta_engine"] = engine_eta
            if topology == Topology.ICE_HYBRID:
                frame["exhaust_temperature_k"] = exhaust
            frames.append(frame)
            extremes.append(ExploreService.extremes(emap).as_dict())
        return {figure: pd.concat(frames, ignore_index=True), f"{figure}_extremes": pd.DataFrame(extremes)}

    @staticmethod
    def ice_hybrid(run: RunConfig) -> Dict[str, pd.DataFrame]:
        return FigureService._single_engine(run, Topology.ICE_HYBRID, Figure.ICE_HYBRID)

    @staticmethod
    def fc_hybrid(run: RunConfig) -> Dict[str, pd.DataFrame]:
        return FigureService._single_engine(run, Topology.FC_HYBRID, Figure.FC_HYBRID)

    @staticmethod
    def _composite(run: RunConfig) -> Dict[str, tuple]:
        cfg = run.system.with_topology(Topology.COMPOSITE)
        pairs = {}
        for measure in Measure.ALL_MEASURES:
            measured = cfg.with_measure(measure)
            emap = ExploreService.build_map(measured, run.explore["grid_step_kw"], config_data=run.data)
            curve = ExploreService.optimal_split(emap, curve_step_kw=run.explore["curve_step_kw"], cfg=measured,
                                                 refine=run.explore["refine"])
            pairs[measure] = (emap, curve)
        return pairs

    @staticmethod
    def composite_maps(run: RunConfig) -> Dict[str, pd.DataFrame]:
        """Composite efficiency map and optimal power-distribution curve per measure"""
        tables = {}
        for measure, (emap, curve) in FigureService._composite(run).items():
            tables[f"{Figure.COMPOSITE_MAPS}_map_{measure}"] = emap.to_frame()
            tables[f"{Figure.COMPOSITE_MAPS}_curve_{measure}"] = curve.to_frame()
        return tables

    @staticmethod
    def optimal_curves(run: RunConfig) -> Dict[str, pd.DataFrame]:
        frames = [_with_measure_column(curve.to_frame(), measure)
                  for measure, (_, curve) in FigureService._composite(run).items()]
        return {Figure.OPTIMAL_CURVES: pd.concat(frames, ignore_index=True)}

    @staticmethod
    def comparison(run: RunConfig) -> Dict[str, pd.DataFrame]:
        """Per topology and measure: max efficiency with its power, max power with its efficiency"""
        rows = []
        for topology in Topology.ALL_TOPOLOGIES:
            cfg = run.system.with_topology(topology)
            step = ExploreService.default_step(cfg, run.explore)
            table = ExploreService.measure_extremes(cfg, step, config_data=run.data)
            for measure, extremes in table.items():
                rows.append(dict(topology=topology, **extremes.as_dict()))
        columns = ["topology", "measure", "max_eta_sys", "w_sys_at_max_eta_kw", "w_gen_at_max_eta_kw",
                   "w_fc_at_max_eta_kw", "max_w_sys_kw", "eta_at_max_w_sys", "w_gen_at_max_w_sys_kw",
                   "w_fc_at_max_w_sys_kw"]
        return {Figure.COMPARISON: pd.DataFrame(rows, columns=columns)}

    @staticmethod
    def energy_ledgers(run: RunConfig) -> Dict[str, pd.DataFrame]:
        """Measure-IV energy ledgers at each topology's max-efficiency and max-power points"""
        rows = []
        for topology in Topology.ALL_TOPOLOGIES:
            cfg = run.system.with_topology(topology).with_measure(Measure.BOTH)
            step = ExploreService.default_step(cfg, run.explore)
            extremes = ExploreService.measure_extremes(cfg, step, [Measure.BOTH], config_data=run.data)[Measure.BOTH]
            points = {
                "max_eta": (extremes.w_gen_at_max_eta_kw, extremes.w_fc_at_max_eta_kw),
                "max_power": (extremes.w_gen_at_max_w_sys_kw, extremes.w_fc_at_max_w_sys_kw),
            }
            for point, (w_gen, w_fc) in points.items():
                result = SystemService.evaluate(cfg, w_gen, w_fc)
                row = {
                    "topology": topology,
                    "point": point,
                    "w_sys_kw": result.w_sys_kw,
                    "eta_sys": result.eta_sys,
                    "eta_ice": result.eta_ice,
                    "eta_fc": result.eta_fc,
                    "fuel_lhv_kw": result.energy.fuel_lhv_kw,
                }
                for key, share in result.energy.shares().items():
                    row[key[:-len("_kw")] + "_share"] = share
                rows.append(row)
        return {Figure.ENERGY_LEDGERS: pd.DataFrame(rows)}

    @staticmethod
    def _sweep(run: RunConfig) -> pd.DataFrame:
        rows = ExploreService.sizing_sweep(run.system, run.explore["r_values"], run.system.total_rated_kw,
                                           run.explore["grid_step_kw"], config_data=run.data)
        return ExploreService.sweep_frame(rows)

    @staticmethod
    def sizing(run: RunConfig) -> Dict[str, pd.DataFrame]:
        """Max efficiency and max power against r_ICE"""
        return {Figure.SIZING: FigureService._sweep(run)}

    @staticmethod
    def load_factor(run: RunConfig) -> Dict[str, pd.DataFrame]:
        frame = FigureService._sweep(run)
        return {Figure.LOAD_FACTOR: frame[["r_ice", "load_factor", "w_sys_at_max_eta_kw", "max_w_sys_kw"]]}
