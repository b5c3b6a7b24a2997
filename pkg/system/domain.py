"""
Domain types for power-system assembly
SystemConfig (one plant plus operating policy), the material-flow solution and
the evaluated SystemResult with its heat and energy ledgers.
"""
import hashlib
import json
from dataclasses import asdict, dataclass, field, fields, is_dataclass, replace
from functools import cached_property
from typing import Mapping, Optional

from adu.domain import CatalystBed
from ice_gen.domain import EngineCurve, IceOperatingPoint
from pemfc.domain import FcOperatingPoint, FcStack
from recovery.constants import INCLUDE_LOW_GRADE_EXHAUST, Measure
from recovery.domain import HeatLedger
from thermo.constants import MOLAR_MASS, Species
from thermo.domain import GasStream, ThermoDb
from thermo.services import ThermoService

from .constants import CompositeDefaults, SystemDefaults, Topology
from .exceptions import ConfigurationError


@dataclass(frozen=True)
class SystemConfig:
    """
    A plant (engine, stack, bed, property data) plus the operating policy.
    Cache keys hash every field, so a config derived with ``replace`` never
    shares results with the one it came from.
    """

    topology: str = SystemDefaults.TOPOLOGY
    measure: str = SystemDefaults.MEASURE
    engine: EngineCurve = field(default_factory=EngineCurve)
    stack: FcStack = field(default_factory=FcStack)
    bed: CatalystBed = field(default_factory=CatalystBed)
    db: ThermoDb = field(default_factory=ThermoService.default_db)
    excess_air_ratio: float = 1.0
    tank_temperature_k: float = SystemDefaults.TANK_TEMPERATURE_K
    tank_pressure_kpa: float = SystemDefaults.TANK_PRESSURE_KPA
    pump_efficiency: float = SystemDefaults.PUMP_EFFICIENCY
    compressor_efficiency: float = SystemDefaults.COMPRESSOR_EFFICIENCY
    compressor_pressure_ratio: float = SystemDefaults.COMPRESSOR_PRESSURE_RATIO
    cathode_stoichiometry: float = SystemDefaults.CATHODE_STOICHIOMETRY
    nh3_liquid_density_kg_m3: float = SystemDefaults.NH3_LIQUID_DENSITY_KG_M3
    air_cp_kj_kg_k: float = SystemDefaults.AIR_CP_KJ_KG_K
    air_gamma: float = SystemDefaults.AIR_GAMMA
    air_inlet_temperature_k: float = SystemDefaults.AIR_INLET_TEMPERATURE_K
    include_low_grade_exhaust: bool = INCLUDE_LOW_GRADE_EXHAUST
    r_ice: float = CompositeDefaults.R_ICE
    total_rated_kw: float = CompositeDefaults.TOTAL_RATED_KW

    def __post_init__(self):
        if self.topology not in Topology.ALL_TOPOLOGIES:
            raise ConfigurationError(f"Unknown topology {self.topology!r}",
                                     {"system.topology": f"expected one of {Topology.ALL_TOPOLOGIES}"})
        if self.measure not in Measure.ALL_MEASURES:
            raise ConfigurationError(f"Unknown measure {self.measure!r}",
                                     {"system.measure": f"expected one of {Measure.ALL_MEASURES}"})
        for name in ("pump_efficiency", "compressor_efficiency"):
            if not 0.0 < getattr(self, name) <= 1.0:
                raise ConfigurationError(f"{name} must lie in (0, 1]", {f"system.{name}": "outside (0, 1]"})
        if not 0.0 < self.r_ice < 1.0:
            raise ConfigurationError(f"r_ice {self.r_ice} outside (0, 1)", {"composite.r_ice": "outside (0, 1)"})
        if self.total_rated_kw <= 0.0:
            raise ConfigurationError("Composite total rated power must be positive",
                                     {"composite.total_rated_kw": "must be positive"})
        if self.tank_temperature_k > self.bed.temperature_k:
            raise ConfigurationError("Tank temperature above the decomposition temperature")

    @property
    def t_dec_k(self) -> float:
        return self.bed.temperature_k

    @property
    def has_engine(self) -> bool:
        return self.topology in Topology.WITH_ENGINE

    @property
    def has_stack(self) -> bool:
        return self.topology in Topology.WITH_STACK

    @property
    def measure_description(self) -> str:
        return Measure.DESCRIPTIONS[self.measure]

    def _identity(self) -> dict:
        identity = {f.name: _plain(getattr(self, f.name)) for f in fields(self) if f.name != "measure"}
        if self.topology != Topology.COMPOSITE:
            del identity["r_ice"], identity["total_rated_kw"]
        return identity

    @cached_property
    def point_fingerprint(self) -> str:
        """Identity of the measure-independent operating point"""
        return _digest(self._identity())

    @cached_property
    def fingerprint(self) -> str:
        return _digest(dict(self._identity(), measure=self.measure))

    def with_measure(self, measure: str) -> "SystemConfig":
        return replace(self, measure=measure)

    def with_topology(self, topology: str) -> "SystemConfig":
        return replace(self, topology=topology)


def _plain(value):
    if is_dataclass(value):
        return {f.name: _plain(getattr(value, f.name)) for f in fields(value)}
    if isinstance(value, Mapping):
        return {str(key): _plain(item) for key, item in value.items()}
    if isinstance(value, (tuple, list)):
        return [_plain(item) for item in value]
    return value


def _digest(data: dict) -> str:
    return hashlib.sha256(json.dumps(data, sort_keys=True, separators=(",", ":")).encode()).hexdigest()


@dataclass(frozen=True)
class FlowSolution:
    """Material network of one operating point, molar flows in mol/s"""

    ice: Optional[IceOperatingPoint]
    fc: Optional[FcOperatingPoint]
    h2_ice_mol_s: float
    h2_fc_mol_s: float
    adu_feed_mol_s: float
    conversion: float
    adu_outlet: Optional[GasStream]
    ice_branch_fraction: float
    slip_to_ice_mol_s: float
    retentate_nh3_mol_s: float
    direct_nh3_mol_s: float

    @property
    def total_nh3_mol_s(self) -> float:
        return self.direct_nh3_mol_s + self.adu_feed_mol_s

    @property
    def total_nh3_g_s(self) -> float:
        return self.total_nh3_mol_s * MOLAR_MASS[Species.NH3]

    @property
    def direct_nh3_g_s(self) -> float:
        return self.direct_nh3_mol_s * MOLAR_MASS[Species.NH3]

    @property
    def adu_feed_g_s(self) -> float:
        return self.adu_feed_mol_s * MOLAR_MASS[Species.NH3]

    @property
    def h2_demand_mol_s(self) -> float:
        return self.h2_ice_mol_s + self.h2_fc_mol_s

    @property
    def ice_nh3_mol_s(self) -> float:
        """Tank ammonia behind the engine, its share of the ADU feed included"""
        return self.direct_nh3_mol_s + self.adu_feed_mol_s * self.ice_branch_fraction

    @property
    def fc_nh3_mol_s(self) -> float:
        return self.adu_feed_mol_s * (1.0 - self.ice_branch_fraction)

    def as_dict(self) -> dict:
        return {
            "total_nh3_g_s": self.total_nh3_g_s,
            "direct_nh3_g_s": self.direct_nh3_g_s,
            "adu_feed_g_s": self.adu_feed_g_s,
            "adu_conversion": self.conversion,
            "h2_to_ice_mol_s": self.h2_ice_mol_s,
            "h2_to_fc_mol_s": self.h2_fc_mol_s,
            "ice_branch_fraction": self.ice_branch_fraction,
            "nh3_slip_to_ice_mol_s": self.slip_to_ice_mol_s,
            "hsu_retentate_nh3_mol_s": self.retentate_nh3_mol_s,
        }


@dataclass(frozen=True)
class EnergyLedger:
    """
    Fuel LHV input split into where it ends up. Hydrogen production is the
    ADU heat that returns neither as extra fuel heating value nor as
    recoverable product-gas heat.
    """

    fuel_lhv_kw: float
    useful_work_kw: float
    auxiliary_kw: float
    hydrogen_production_kw: float
    high_temp_heat_kw: float
    low_temp_heat_kw: float
    retentate_loss_kw: float
    other_losses_kw: float

    @property
    def total_kw(self) -> float:
        return (self.useful_work_kw + self.auxiliary_kw + self.hydrogen_production_kw + self.high_temp_heat_kw
                + self.low_temp_heat_kw + self.retentate_loss_kw + self.other_losses_kw)

    def shares(self) -> dict:
        if self.fuel_lhv_kw == 0.0:
            return {}
        return {key: value / self.fuel_lhv_kw for key, value in asdict(self).items() if key != "fuel_lhv_kw"}

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class SystemResult:
    topology: str
    measure: str
    fingerprint: str
    w_gen_kw: float
    w_fc_kw: float
    w_sys_kw: float
    eta_sys: float
    eta_ice: Optional[float]
    eta_fc: Optional[float]
    eta_ice_nh3: Optional[float]
    eta_fc_nh3: Optional[float]
    flows: FlowSolution
    q_pre_kw: float
    q_dec_kw: float
    q_high_kw: float
    q_low_kw: float
    product_cooling_kw: float
    heat: HeatLedger
    w_pump_kw: float
    w_comp_kw: float
    energy: EnergyLedger

    @property
    def w_eh_kw(self) -> float:
        return self.heat.w_eh_kw

    @property
    def exhaust_temperature_k(self) -> Optional[float]:
        return self.flows.ice.exhaust_temperature_k if self.flows.ice is not None else None

    @property
    def total_nh3_g_s(self) -> float:
        return self.flows.total_nh3_g_s


@dataclass(frozen=True)
class OperatingPoint:
    """Everything about a point that does not depend on the recovery measure"""

    w_gen_kw: float
    w_fc_kw: float
    flows: FlowSolution
    q_pre_kw: float
    q_dec_kw: float
    q_high_kw: float
    q_low_kw: float
    product_cooling_kw: float
    w_pump_kw: float
    w_comp_kw: float


@dataclass(frozen=True)
class RunConfig:
    """A validated run config file: the plant plus exploration and output settings"""

    system: SystemConfig
    explore: dict
    output_dir: Optional[str]
    write_manifest: bool
    data: dict
    fingerprint: str
