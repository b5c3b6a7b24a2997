"""
Service layer for design exploration
Efficiency maps, optimal power-distribution curves, per-measure extremes,
r_ICE sizing sweeps and power-trace evaluation
"""
import logging
import math
from dataclasses import replace
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from celery import group
from scipy.optimize import brentq, minimize_scalar

from pemfc.services import FuelCellService
from recovery.constants import Measure
from system.constants import Topology
from system.domain import SystemConfig
from system.exceptions import ArgumentError, InfeasibleOperationError, UnreachableTargetError
from system.services import ConfigService, SystemService

from .constants import FEASIBLE, ISO_POWER_HALF_WIDTH, RESCALE_VALIDITY, SIZING_LABEL, ExploreDefaults
from .domain import (
    CurvePoint,
    EfficiencyMap,
    MeasureExtremes,
    OptimalCurve,
    SizingSweepRow,
    TraceResult,
    TraceStep,
)
from .tasks import evaluate_map_row, map_row

logger = logging.getLogger(__name__)


def _ladder(lo: float, hi: float, step: float) -> List[float]:
    """Multiples of step inside [lo, hi] plus both ends"""
    first = math.ceil(lo / step - 1e-9)
    last = math.floor(hi / step + 1e-9)
    values = [lo]
    for k in range(first, last + 1):
        value = round(k * step, 9)
        if lo + 1e-6 < value < hi - 1e-6:
            values.append(value)
    if hi > lo:
        values.append(hi)
    return values


class ExploreService:
    """Service for grid exploration of one plant"""

    @staticmethod
    def axes(cfg: SystemConfig, step_kw: float) -> Tuple[np.ndarray, np.ndarray]:
        """
        Grid axes over the engine envelopes. Both axes start at 0 so the grid
        holds the single-engine options; an absent engine has the axis [0].
        """
        if step_kw <= 0.0:
            raise ArgumentError(f"Grid step must be positive, got {step_kw} kW", stage="explore")
        envelopes = SystemService.envelopes(cfg)
        axes = []
        for name in ("ice", "fc"):
            values = [0.0]
            if name in envelopes:
                values += _ladder(*envelopes[name], step_kw)
            axes.append(np.array(values, dtype=float))
        return axes[0], axes[1]

    @staticmethod
    def _rows(cfg: SystemConfig, w_gen: np.ndarray, w_fc: np.ndarray, config_data: Optional[Dict]) -> List[list]:
        fc_values = [float(v) for v in w_fc]
        if config_data is None:
            return [map_row(cfg, float(g), fc_values) for g in w_gen]
        data = ConfigService.system_data(config_data, cfg)
        job = group([evaluate_map_row.s(data, float(g), fc_values) for g in w_gen])
        return job.apply_async().get()

    @staticmethod
    def build_map(cfg: SystemConfig, step_kw: float = ExploreDefaults.GRID_STEP_KW,
                  w_gen_values: Optional[Sequence[float]] = None, w_fc_values: Optional[Sequence[float]] = None,
                  config_data: Optional[Dict] = None) -> EfficiencyMap:
        """
        Evaluate cfg on every grid point. Rows run as Celery tasks when the
        validated config data behind cfg is given, in-process otherwise.
        """
        default_gen, default_fc = ExploreService.axes(cfg, step_kw)
        w_gen = np.asarray(w_gen_values if w_gen_values is not None else default_gen, dtype=float)
        w_fc = np.asarray(w_fc_values if w_fc_values is not None else default_fc, dtype=float)
        if w_gen.size == 0 or w_fc.size == 0:
            raise ArgumentError("Efficiency map needs a non-empty grid on both axes", stage="explore")

        w_sys = np.full((w_gen.size, w_fc.size), np.nan)
        eta = np.full_like(w_sys, np.nan)
        mask = np.full(w_sys.shape, FEASIBLE, dtype=object)
        for i, row in enumerate(ExploreService._rows(cfg, w_gen, w_fc, config_data)):
            for j, (w, e, code) in enumerate(row):
                mask[i, j] = code
                if code == FEASIBLE:
                    w_sys[i, j] = w
                    eta[i, j] = e

        emap = EfficiencyMap(topology=cfg.topology, measure=cfg.measure, fingerprint=cfg.fingerprint,
                             step_kw=float(step_kw), w_gen_kw=w_gen, w_fc_kw=w_fc, w_sys_kw=w_sys,
                             eta_sys=eta, mask=mask)
        logger.info(f"Map {cfg.topology}/{cfg.measure}: {w_gen.size}x{w_fc.size} points, "
                    f"{int((~emap.feasible).sum())} masked")
        return emap

    @staticmethod
    def curve_targets(emap: EfficiencyMap, curve_step_kw: float = ExploreDefaults.CURVE_STEP_KW) -> List[float]:
        """Multiples of curve_step_kw the map can reach, then the map maximum"""
        band = ISO_POWER_HALF_WIDTH * emap.step_kw
        feasible = emap.w_sys_kw[emap.feasible]
        max_w_sys = emap.max_w_sys_kw
        targets = []
        k = 1
        while k * curve_step_kw < max_w_sys - band:
            target = round(k * curve_step_kw, 9)
            if np.any(np.abs(feasible - target) <= band):
                targets.append(target)
            k += 1
        if max_w_sys > 0.0:
            targets.append(max_w_sys)
        return targets

    @staticmethod
    def optimal_split(emap: EfficiencyMap, targets: Optional[Iterable[float]] = None,
                      curve_step_kw: float = ExploreDefaults.CURVE_STEP_KW, cfg: Optional[SystemConfig] = None,
                      refine: bool = ExploreDefaults.REFINE) -> OptimalCurve:
        """
        Best split per W_sys target among grid points within half a cell of
        it; equal efficiencies go to the larger W_fc. With refine and cfg,
        each pick is polished along its iso-power contour.
        """
        if refine and cfg is None:
            raise ArgumentError("Refinement needs the plant config", stage="explore")
        band = ISO_POWER_HALF_WIDTH * emap.step_kw
        max_w_sys = emap.max_w_sys_kw
        if targets is None:
            targets = ExploreService.curve_targets(emap, curve_step_kw)
        points = []
        for target in sorted(float(t) for t in targets):
            with np.errstate(invalid="ignore"):
                near = np.abs(emap.w_sys_kw - target) <= band
            index = emap.best(emap.eta_sys, where=near)
            if index is None:
                raise UnreachableTargetError(target, max_w_sys)
            i, j = index
            point = CurvePoint(target_kw=target, w_gen_kw=float(emap.w_gen_kw[i]), w_fc_kw=float(emap.w_fc_kw[j]),
                               w_sys_kw=float(emap.w_sys_kw[i, j]), eta_sys=float(emap.eta_sys[i, j]))
            if refine:
                point = ExploreService._refine(cfg.with_measure(emap.measure), point, emap.step_kw)
            points.append(point)
        return OptimalCurve(topology=emap.topology, measure=emap.measure, fingerprint=emap.fingerprint,
                            points=tuple(points), refined=refine)

    @staticmethod
    def _refine(cfg: SystemConfig, point: CurvePoint, step_kw: float) -> CurvePoint:
        """Maximize eta_sys along W_sys = target near a grid pick; keeps the pick on failure"""
        envelopes = SystemService.envelopes(cfg)
        target = point.target_kw

        def on_contour(w_gen: float, w_fc_guess: float) -> Optional[Tuple[float, float]]:
            if "fc" not in envelopes or w_fc_guess == 0.0:
                return None
            lo = max(envelopes["fc"][0], w_fc_guess - 2 * step_kw)
            hi = min(envelopes["fc"][1], w_fc_guess + 2 * step_kw)
            try:
                w_fc = brentq(lambda w: SystemService.evaluate(cfg, w_gen, w).w_sys_kw - target, lo, hi,
                              xtol=1e-9)
            except (ValueError, InfeasibleOperationError):
                return None
            return w_gen, w_fc

        def eta_at(split: Optional[Tuple[float, float]]) -> float:
            if split is None:
                return -1.0
            try:
                return SystemService.evaluate(cfg, *split).eta_sys
            except InfeasibleOperationError:
                return -1.0

        best = (point.eta_sys, point.w_gen_kw, point.w_fc_kw)
        if "ice" in envelopes and point.w_gen_kw > 0.0:
            lo = max(envelopes["ice"][0], point.w_gen_kw - step_kw)
            hi = min(envelopes["ice"][1], point.w_gen_kw + step_kw)
            if point.w_fc_kw == 0.0:
                split = None
                try:
                    w_gen = brentq(lambda w: SystemService.evaluate(cfg, w, 0.0).w_sys_kw - target, lo, hi,
                                   xtol=1e-9)
                    split = (w_gen, 0.0)
                except (ValueError, InfeasibleOperationError):
                    pass
            else:
                result = minimize_scalar(lambda w: -eta_at(on_contour(w, point.w_fc_kw)), bounds=(lo, hi),
                                         method="bounded", options={"xatol": 1e-3})
                split = on_contour(float(result.x), point.w_fc_kw)
        else:
            split = on_contour(0.0, point.w_fc_kw)
        eta = eta_at(split)
        if split is not None and eta > best[0]:
            best = (eta, *split)
        eta, w_gen, w_fc = best
        w_sys = SystemService.evaluate(cfg, w_gen, w_fc).w_sys_kw
        return CurvePoint(target_kw=target, w_gen_kw=w_gen, w_fc_kw=w_fc, w_sys_kw=w_sys, eta_sys=eta)

    @staticmethod
    def extremes(emap: EfficiencyMap) -> MeasureExtremes:
        best_eta = emap.max_eta_index
        best_power = emap.max_power_index
        if best_eta is None:
            raise UnreachableTargetError(0.0, 0.0)
        return MeasureExtremes(
            measure=emap.measure,
            max_eta_sys=float(emap.eta_sys[best_eta]),
            w_sys_at_max_eta_kw=float(emap.w_sys_kw[best_eta]),
            w_gen_at_max_eta_kw=float(emap.w_gen_kw[best_eta[0]]),
            w_fc_at_max_eta_kw=float(emap.w_fc_kw[best_eta[1]]),
            max_w_sys_kw=float(emap.w_sys_kw[best_power]),
            eta_at_max_w_sys=float(emap.eta_sys[best_power]),
            w_gen_at_max_w_sys_kw=float(emap.w_gen_kw[best_power[0]]),
            w_fc_at_max_w_sys_kw=float(emap.w_fc_kw[best_power[1]]),
        )

    @staticmethod
    def default_step(cfg: SystemConfig, explore: Optional[Dict] = None) -> float:
        """Fine 1-D scan for single-engine topologies, coarser 2-D grid for the composite"""
        explore = explore or {}
        if cfg.topology == Topology.COMPOSITE:
            return explore.get("grid_step_kw", ExploreDefaults.GRID_STEP_KW)
        return explore.get("scan_step_kw", ExploreDefaults.SCAN_STEP_KW)

    @staticmethod
    def measure_extremes(cfg: SystemConfig, step_kw: Optional[float] = None,
                         measures: Sequence[str] = tuple(Measure.ALL_MEASURES),
                         config_data: Optional[Dict] = None) -> Dict[str, MeasureExtremes]:
        """Max eta_sys with its W_sys and max W_sys with its eta_sys, per measure"""
        step_kw = step_kw or ExploreService.default_step(cfg)
        table = {}
        for measure in measures:
            emap = ExploreService.build_map(cfg.with_measure(measure), step_kw, config_data=config_data)
            table[measure] = ExploreService.extremes(emap)
            logger.info(f"{cfg.topology}/{measure}: max eta {table[measure].max_eta_sys:.4f} at "
                        f"{table[measure].w_sys_at_max_eta_kw:.1f} kW, max W_sys {table[measure].max_w_sys_kw:.1f} kW")
        return table

    @staticmethod
    def rescale_warnings(base_cfg: SystemConfig, cfg: SystemConfig) -> Tuple[str, ...]:
        """Tags for engines sized outside the range their curves are trusted over"""
        lo, hi = RESCALE_VALIDITY
        warnings = []
        engine_factor = cfg.r_ice * cfg.total_rated_kw / base_cfg.engine.p_max_kw
        if not lo <= engine_factor <= hi:
            warnings.append(f"engine_rescaled_x{engine_factor:.2f}")
        stack_factor = (1.0 - cfg.r_ice) * cfg.total_rated_kw / FuelCellService.peak_power(base_cfg.stack)[1]
        if not lo <= stack_factor <= hi:
            warnings.append(f"stack_rescaled_x{stack_factor:.2f}")
        return tuple(warnings)

    @staticmethod
    def sizing_sweep(base_cfg: SystemConfig, r_values: Sequence[float], total_rated_kw: float,
                     step_kw: float = ExploreDefaults.GRID_STEP_KW,
                     config_data: Optional[Dict] = None) -> List[SizingSweepRow]:
        """Measure-IV composite extremes for each engine power share r_ICE"""
        if total_rated_kw <= 0.0:
            raise ArgumentError(f"Total rated power must be positive, got {total_rated_kw} kW", stage="explore")
        if not r_values or any(not 0.0 < r < 1.0 for r in r_values):
            raise ArgumentError(f"r_ICE values must lie in (0, 1): {list(r_values)}", stage="explore")
        rows = []
        for r in r_values:
            cfg = replace(base_cfg, topology=Topology.COMPOSITE, measure=Measure.BOTH, r_ice=float(r),
                          total_rated_kw=float(total_rated_kw))
            warnings = ExploreService.rescale_warnings(base_cfg, cfg)
            if warnings:
                logger.warning(f"r_ICE={r}: {', '.join(warnings)}")
            best = ExploreService.extremes(ExploreService.build_map(cfg, step_kw, config_data=config_data))
            row = SizingSweepRow(
                r_ice=float(r),
                total_rated_kw=float(total_rated_kw),
                max_eta_sys=best.max_eta_sys,
                w_sys_at_max_eta_kw=best.w_sys_at_max_eta_kw,
                max_w_sys_kw=best.max_w_sys_kw,
                eta_at_max_w_sys=best.eta_at_max_w_sys,
                warnings=warnings,
                label=SIZING_LABEL,
            )
            logger.info(f"✅ r_ICE={r}: max eta {row.max_eta_sys:.4f}, max W_sys {row.max_w_sys_kw:.1f} kW, "
                        f"load factor {row.load_factor:.4f}")
            rows.append(row)
        return rows

    @staticmethod
    def sweep_frame(rows: Sequence[SizingSweepRow]) -> pd.DataFrame:
        return pd.DataFrame([row.as_dict() for row in rows],
                            columns=["r_ice", "total_rated_kw", "max_eta_sys", "w_sys_at_max_eta_kw", "max_w_sys_kw",
                                     "eta_at_max_w_sys", "load_factor", "warnings", "label"])

    @staticmethod
    def trace_eval(cfg: SystemConfig, curve: OptimalCurve,
                   demand_trace: Sequence[Tuple[float, float]]) -> TraceResult:
        """
        Serve a (time s, power kW) demand trace from the optimal curve. Each
        sample holds until the next one; the last holds for the interval
        before it (1 s for a single sample). Demand above the curve is
        clipped and counted.
        """
        if curve.fingerprint != cfg.fingerprint:
            raise ArgumentError("Optimal curve was built for a different plant or measure", stage="explore")
        if not curve.points:
            raise ArgumentError("Optimal curve is empty", stage="explore")
        if len(demand_trace) == 0:
            raise ArgumentError("Demand trace is empty", stage="explore")
        times = np.array([float(t) for t, _ in demand_trace])
        demand = np.array([float(p) for _, p in demand_trace])
        if np.any(demand < 0.0):
            raise ArgumentError("Demand trace has negative powers", stage="explore")
        if np.any(np.diff(times) <= 0.0):
            raise ArgumentError("Demand trace times must be strictly increasing", stage="explore")
        durations = np.append(np.diff(times), np.diff(times)[-1] if times.size > 1 else 1.0)

        targets = np.array([p.target_kw for p in curve.points])
        top = float(targets[-1])
        steps = []
        for t, duration, power in zip(times, durations, demand):
            clipped = bool(power > top)
            served = min(float(power), top)
            if served == 0.0:
                steps.append(TraceStep(float(t), float(duration), float(power), 0.0, 0.0, 0.0, 0.0, clipped))
                continue
            point = curve.points[int(np.argmin(np.abs(targets - served)))]
            steps.append(TraceStep(float(t), float(duration), float(power), served, point.w_gen_kw, point.w_fc_kw,
                                   point.eta_sys, clipped))
        result = TraceResult(measure=curve.measure, steps=tuple(steps))
        if result.clipped_count:
            logger.warning(f"{result.clipped_count} trace samples above the curve maximum {top:.1f} kW were clipped")
        return result
