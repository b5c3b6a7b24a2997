"""
Domain types for the ammonia decomposition unit
"""
from dataclasses import dataclass, replace
from typing import Tuple

from system.exceptions import BedDimensionError, ConfigurationError
from thermo.constants import GAS_CONSTANT
from thermo.domain import GasStream

from .constants import BedDefaults, KineticDefaults, SECONDS_PER_HOUR


@dataclass(frozen=True)
class CatalystBed:
    """Isothermal, isobaric packed bed"""

    activation_energy_kj_mol: float = KineticDefaults.ACTIVATION_ENERGY_KJ_MOL
    pre_exponential: float = KineticDefaults.PRE_EXPONENTIAL
    beta: float = KineticDefaults.BETA
    area_m2: float = BedDefaults.AREA_M2
    length_m: float = BedDefaults.LENGTH_M
    temperature_k: float = BedDefaults.TEMPERATURE_K
    pressure_kpa: float = BedDefaults.PRESSURE_KPA
    max_ghsv_per_h: float = BedDefaults.MAX_GHSV_PER_H
    heat_loss_kw: float = BedDefaults.HEAT_LOSS_KW

    def __post_init__(self):
        if self.area_m2 <= 0.0 or self.length_m <= 0.0:
            raise BedDimensionError(self.area_m2, self.length_m)
        if not 0.0 < self.beta < 1.0:
            raise ConfigurationError(f"Temkin-Pyzhev exponent beta must lie in (0, 1), got {self.beta}")
        if self.pre_exponential <= 0.0 or self.activation_energy_kj_mol < 0.0:
            raise ConfigurationError("Catalyst kinetics need k0 > 0 and E >= 0")
        if self.temperature_k <= 0.0 or self.pressure_kpa <= 0.0:
            raise ConfigurationError("Catalyst bed needs positive temperature and pressure")
        if self.max_ghsv_per_h <= 0.0:
            raise ConfigurationError("Bed capacity space velocity must be positive")
        if self.heat_loss_kw < 0.0:
            raise ConfigurationError(f"Bed heat loss must be non-negative, got {self.heat_loss_kw} kW")

    @property
    def volume_m3(self) -> float:
        return self.area_m2 * self.length_m

    @property
    def kinetic_state(self) -> Tuple[float, float, float, float, float]:
        """Everything conversion depends on besides residence time"""
        return (self.temperature_k, self.pressure_kpa, self.activation_energy_kj_mol,
                self.pre_exponential, self.beta)

    def molar_volume_m3(self) -> float:
        """Ideal-gas molar volume at bed conditions, m3/mol"""
        return GAS_CONSTANT * self.temperature_k / (self.pressure_kpa * 1000.0)

    def ghsv(self, nh3_feed_mol_s: float) -> float:
        """Volumetric NH3 feed at bed T, p over bed volume, 1/h"""
        return nh3_feed_mol_s * self.molar_volume_m3() * SECONDS_PER_HOUR / self.volume_m3

    def feed_for_ghsv(self, ghsv_per_h: float) -> float:
        return ghsv_per_h * self.volume_m3 / SECONDS_PER_HOUR / self.molar_volume_m3()

    def with_length(self, length_m: float) -> "CatalystBed":
        return replace(self, length_m=length_m)


@dataclass(frozen=True)
class AduResult:
    outlet: GasStream
    conversion: float
    heat_duty_w: float
    ghsv_per_h: float


@dataclass(frozen=True)
class ConversionPoint:
    ghsv_per_h: float
    conversion: float
    h2_rate_mol_s: float
    nh3_feed_mol_s: float
