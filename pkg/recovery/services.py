"""
Service layer for recovery app
Sorts residual heat into the two pools and applies the recovery measures
"""
import logging
from typing import Optional

from ice_gen.domain import IceOperatingPoint
from ice_gen.services import EngineService
from pemfc.domain import FcOperatingPoint
from system.exceptions import ArgumentError
from thermo.domain import ThermoDb

from .constants import INCLUDE_LOW_GRADE_EXHAUST, Measure
from .domain import HeatLedger, HeatPools

logger = logging.getLogger(__name__)


class RecoveryService:
    """Service for residual-heat classification and allocation"""

    @staticmethod
    def classify(ice_point: Optional[IceOperatingPoint], fc_point: Optional[FcOperatingPoint],
                 product_cooling_kw: float, t_dec_k: float,
                 include_low_grade_exhaust: bool = INCLUDE_LOW_GRADE_EXHAUST,
                 db: Optional[ThermoDb] = None) -> HeatPools:
        if product_cooling_kw < 0.0:
            raise ArgumentError(f"Negative product cooling: {product_cooling_kw} kW", stage="recovery")
        q_high = 0.0
        q_low = product_cooling_kw
        if ice_point is not None:
            q_high = EngineService.high_temp_heat(ice_point, t_dec_k, db)
            q_low += ice_point.coolant_heat_kw
            if include_low_grade_exhaust:
                q_low += EngineService.low_grade_exhaust_heat(ice_point, t_dec_k, db)
        if fc_point is not None:
            q_low += fc_point.heat_kw
        return HeatPools(q_high_kw=q_high, q_low_kw=q_low)

    @staticmethod
    def apply_measure(measure: str, q_pre_kw: float, q_dec_kw: float, pools: HeatPools) -> HeatLedger:
        if measure not in Measure.ALL_MEASURES:
            raise ArgumentError(f"Unknown measure {measure!r}; expected one of {Measure.ALL_MEASURES}",
                                stage="recovery")
        if q_pre_kw < 0.0 or q_dec_kw < 0.0:
            raise ArgumentError(f"Heat demands must be non-negative ({q_pre_kw}, {q_dec_kw} kW)",
                                stage="recovery")
        high_to_dec = high_to_pre = low_to_pre = 0.0

        if measure in (Measure.HIGH_TEMPERATURE, Measure.BOTH):
            high_to_dec = min(pools.q_high_kw, q_dec_kw)
        if measure == Measure.BOTH:
            high_to_pre = min(pools.q_high_kw - high_to_dec, q_pre_kw)
        if measure in (Measure.LOW_TEMPERATURE, Measure.BOTH):
            low_to_pre = min(pools.q_low_kw, q_pre_kw - high_to_pre)

        w_eh = (q_dec_kw - high_to_dec) + (q_pre_kw - high_to_pre - low_to_pre)
        return HeatLedger(
            measure=measure,
            q_pre_kw=q_pre_kw,
            q_dec_kw=q_dec_kw,
            q_high_to_dec_kw=high_to_dec,
            q_high_to_pre_kw=high_to_pre,
            q_low_to_pre_kw=low_to_pre,
            w_eh_kw=max(0.0, w_eh),
        )
