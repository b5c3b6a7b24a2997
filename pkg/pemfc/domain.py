"""
Domain types for the PEM fuel cell stack
"""
from dataclasses import dataclass, replace

from system.exceptions import ConfigurationError
from thermo.constants import REFERENCE_TEMPERATURE_K

from .constants import STANDARD_POTENTIAL_SLOPE_V_K, STANDARD_POTENTIAL_V, StackDefaults


@dataclass(frozen=True)
class FcStack:
    cell_count: int = StackDefaults.CELL_COUNT
    cell_area_cm2: float = StackDefaults.CELL_AREA_CM2
    temperature_k: float = StackDefaults.TEMPERATURE_K
    h2_pressure_kpa: float = StackDefaults.H2_PRESSURE_KPA
    o2_pressure_kpa: float = StackDefaults.O2_PRESSURE_KPA
    transfer_coefficient: float = StackDefaults.TRANSFER_COEFFICIENT
    exchange_current_density: float = StackDefaults.EXCHANGE_CURRENT_DENSITY
    limiting_current_density: float = StackDefaults.LIMITING_CURRENT_DENSITY
    membrane_thickness_cm: float = StackDefaults.MEMBRANE_THICKNESS_CM
    membrane_conductivity: float = StackDefaults.MEMBRANE_CONDUCTIVITY
    min_power_kw: float = StackDefaults.MIN_POWER_KW

    def __post_init__(self):
        if self.cell_count < 1:
            raise ConfigurationError(f"Stack needs at least one cell, got {self.cell_count}")
        positive = ("cell_area_cm2", "temperature_k", "exchange_current_density", "limiting_current_density",
                    "membrane_thickness_cm", "membrane_conductivity", "min_power_kw")
        for name in positive:
            if getattr(self, name) <= 0.0:
                raise ConfigurationError(f"Stack parameter {name} must be positive")
        if not 0.0 < self.transfer_coefficient <= 1.0:
            raise ConfigurationError(f"Charge transfer coefficient {self.transfer_coefficient} outside (0, 1]")
        if self.exchange_current_density >= self.limiting_current_density:
            raise ConfigurationError("Exchange current density must be far below the limiting current density")

    @property
    def standard_potential_v(self) -> float:
        return STANDARD_POTENTIAL_V - STANDARD_POTENTIAL_SLOPE_V_K * (self.temperature_k - REFERENCE_TEMPERATURE_K)

    def with_cells(self, cell_count: int) -> "FcStack":
        return replace(self, cell_count=max(1, int(cell_count)))


@dataclass(frozen=True)
class FcOperatingPoint:
    current_density: float
    cell_voltage_v: float
    w_fc_kw: float
    h2_g_s: float
    heat_kw: float
    efficiency: float
