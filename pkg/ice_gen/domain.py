"""
Domain types for the engine-generator unit
"""
from dataclasses import dataclass, replace
from functools import cached_property
from typing import Optional, Tuple

import numpy as np
from scipy.interpolate import PchipInterpolator

from system.exceptions import CalibrationError, EnvelopeError
from thermo.domain import GasStream

from .constants import (
    EngineCalibration,
    H2_INJECTION_PRESSURE_MPA,
    HYDROGEN_MOLE_RATIO,
    MAX_THERMAL_EFFICIENCY,
    NH3_INJECTION_PRESSURE_MPA,
)


@dataclass(frozen=True)
class EngineCurve:
    """
    Tabulated combined efficiency and heat split against generator output,
    interpolated with monotone-preserving cubics.
    """

    hydrogen_mole_ratio: float = HYDROGEN_MOLE_RATIO
    max_thermal_efficiency: float = MAX_THERMAL_EFFICIENCY
    power_kw: Tuple[float, ...] = EngineCalibration.POWER_KW
    efficiency: Tuple[float, ...] = EngineCalibration.EFFICIENCY
    coolant_fraction: Tuple[float, ...] = EngineCalibration.COOLANT_FRACTION
    lubrication_fraction: Tuple[float, ...] = EngineCalibration.LUBRICATION_FRACTION
    # None folds the generator into the combined efficiency
    generator_efficiency: Optional[Tuple[float, ...]] = None
    nh3_injection_pressure_mpa: float = NH3_INJECTION_PRESSURE_MPA
    h2_injection_pressure_mpa: float = H2_INJECTION_PRESSURE_MPA

    def __post_init__(self):
        for name in ("power_kw", "efficiency", "coolant_fraction", "lubrication_fraction", "generator_efficiency"):
            value = getattr(self, name)
            if value is not None:
                object.__setattr__(self, name, tuple(float(v) for v in value))
        n = len(self.power_kw)
        tables = [self.efficiency, self.coolant_fraction, self.lubrication_fraction]
        if self.generator_efficiency is not None:
            tables.append(self.generator_efficiency)
        if n < 2 or any(len(t) != n for t in tables):
            raise CalibrationError("Engine tables need matching lengths of at least two points", stage="ice_gen")
        if any(b <= a for a, b in zip(self.power_kw, self.power_kw[1:])) or self.power_kw[0] <= 0.0:
            raise CalibrationError("Engine power nodes must be positive and strictly increasing", stage="ice_gen")
        if not 0.0 <= self.hydrogen_mole_ratio <= 1.0:
            raise CalibrationError(f"Hydrogen mole ratio {self.hydrogen_mole_ratio} outside [0, 1]", stage="ice_gen")
        eta_gen = self.generator_efficiency or (1.0,) * n
        for p, eta, g, cool, lub in zip(self.power_kw, self.efficiency, eta_gen,
                                        self.coolant_fraction, self.lubrication_fraction):
            if not 0.0 < g <= 1.0:
                raise CalibrationError(f"Generator efficiency {g} at {p} kW outside (0, 1]", stage="ice_gen")
            if not 0.0 < eta <= self.max_thermal_efficiency * max(eta_gen):
                raise CalibrationError(
                    f"Combined efficiency {eta} at {p} kW outside (0, {self.max_thermal_efficiency} x eta_gen]",
                    stage="ice_gen")
            if cool < 0.0 or lub < 0.0 or cool + lub + eta / g > 1.0:
                raise CalibrationError(f"Heat split at {p} kW exceeds the fuel energy", stage="ice_gen")

    @property
    def p_min_kw(self) -> float:
        return self.power_kw[0]

    @property
    def p_max_kw(self) -> float:
        return self.power_kw[-1]

    @cached_property
    def _interpolators(self):
        x = np.asarray(self.power_kw)
        curves = {
            "efficiency": PchipInterpolator(x, self.efficiency, extrapolate=False),
            "coolant": PchipInterpolator(x, self.coolant_fraction, extrapolate=False),
            "lubrication": PchipInterpolator(x, self.lubrication_fraction, extrapolate=False),
        }
        if self.generator_efficiency is not None:
            curves["generator"] = PchipInterpolator(x, self.generator_efficiency, extrapolate=False)
        return curves

    def check_envelope(self, power_kw: float) -> None:
        if not self.p_min_kw <= power_kw <= self.p_max_kw:
            raise EnvelopeError(power_kw, self.p_min_kw, self.p_max_kw, stage="ice_gen")

    def _at(self, name: str, power_kw: float) -> float:
        self.check_envelope(power_kw)
        return float(self._interpolators[name](power_kw))

    def combined_efficiency(self, power_kw: float) -> float:
        return self._at("efficiency", power_kw)

    def generator_efficiency_at(self, power_kw: float) -> float:
        if self.generator_efficiency is None:
            self.check_envelope(power_kw)
            return 1.0
        return self._at("generator", power_kw)

    def coolant_fraction_at(self, power_kw: float) -> float:
        return self._at("coolant", power_kw)

    def lubrication_fraction_at(self, power_kw: float) -> float:
        return self._at("lubrication", power_kw)

    def rescaled(self, p_max_kw: float) -> "EngineCurve":
        """Same curves against P/P_max, stretched to a new rated power"""
        factor = p_max_kw / self.p_max_kw
        return replace(self, power_kw=tuple(p * factor for p in self.power_kw))


@dataclass(frozen=True)
class IceOperatingPoint:
    w_gen_kw: float
    efficiency: float
    generator_efficiency: float
    fuel_lhv_kw: float
    nh3_g_s: float
    h2_g_s: float
    air_g_s: float
    excess_air_ratio: float
    exhaust: GasStream
    exhaust_heat_kw: float
    coolant_heat_kw: float
    lubrication_heat_kw: float

    @property
    def shaft_power_kw(self) -> float:
        return self.w_gen_kw / self.generator_efficiency

    @property
    def generator_loss_kw(self) -> float:
        return self.shaft_power_kw - self.w_gen_kw

    @property
    def exhaust_temperature_k(self) -> float:
        return self.exhaust.temperature_k
