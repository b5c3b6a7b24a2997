"""
Service layer for system app
Run-config loading, material balance, auxiliary loads and operating-point
evaluation for the three topologies
"""
import hashlib
import json
import logging
from functools import lru_cache
from typing import Dict, Optional, Tuple

from django.conf import settings
from django.core.cache import cache

from adu.domain import CatalystBed
from adu.services import ReactorService
from ice_gen.domain import EngineCurve
from ice_gen.services import EngineService
from pemfc.domain import FcStack
from pemfc.services import FuelCellService
from recovery.constants import PRODUCT_DELIVERY_TEMPERATURE_K
from recovery.domain import HeatLedger, HeatPools
from recovery.services import RecoveryService
from system.exceptions import (
    ArgumentError,
    ConfigSchemaError,
    EnvelopeError,
    SlipExceedsDemandError,
    TopologyMismatchError,
)
from thermo.constants import AIR_O2_FRACTION, MOLAR_MASS, Species
from thermo.domain import GasStream
from thermo.services import ThermoService

from .constants import CACHE_PREFIX, DIRECT_NH3_TOLERANCE_MOL_S, Topology
from .domain import EnergyLedger, FlowSolution, OperatingPoint, RunConfig, SystemConfig, SystemResult
from .repositories import ConfigRepository
from .serializers import RunConfigSerializer, flatten_errors

logger = logging.getLogger(__name__)

CACHE_TTL = getattr(settings, 'CACHE_TTL', 60 * 15)


def _canonical(data: Dict) -> str:
    return json.dumps(data, sort_keys=True, separators=(",", ":"))


def _sha256(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()


@lru_cache(maxsize=64)
def _build_system(canonical: str) -> SystemConfig:
    data = json.loads(canonical)
    thermo = data["thermo"]
    engine = dict(data["engine"])
    excess_air_ratio = engine.pop("excess_air_ratio")
    for key in ("power_kw", "efficiency", "coolant_fraction", "lubrication_fraction", "generator_efficiency"):
        if engine[key] is not None:
            engine[key] = tuple(engine[key])
    system = data["system"]
    return SystemConfig(
        topology=system["topology"],
        measure=system["measure"],
        engine=EngineCurve(**engine),
        stack=FcStack(**data["stack"]),
        bed=CatalystBed(**data["bed"]),
        db=ThermoService.build_db(
            property_file=thermo["property_file"],
            latent_heat_kj_mol=thermo["latent_heat_kj_mol"],
            reaction_enthalpy_kj_mol=thermo["reaction_enthalpy_kj_mol"],
            lhv_nh3_kj_g=thermo["lhv_nh3_kj_g"],
            lhv_h2_kj_g=thermo["lhv_h2_kj_g"],
        ),
        excess_air_ratio=excess_air_ratio,
        tank_temperature_k=system["tank_temperature_k"],
        tank_pressure_kpa=system["tank_pressure_kpa"],
        pump_efficiency=system["pump_efficiency"],
        compressor_efficiency=system["compressor_efficiency"],
        compressor_pressure_ratio=system["compressor_pressure_ratio"],
        cathode_stoichiometry=system["cathode_stoichiometry"],
        nh3_liquid_density_kg_m3=system["nh3_liquid_density_kg_m3"],
        air_cp_kj_kg_k=system["air_cp_kj_kg_k"],
        air_gamma=system["air_gamma"],
        air_inlet_temperature_k=system["air_inlet_temperature_k"],
        include_low_grade_exhaust=system["include_low_grade_exhaust"],
        r_ice=data["composite"]["r_ice"],
        total_rated_kw=data["composite"]["total_rated_kw"],
    )


class ConfigService:
    """Service for run configs"""

    @staticmethod
    def validate(raw: Optional[Dict]) -> Dict:
        """Strict schema check; returns the config with every default filled in"""
        serializer = RunConfigSerializer(data=raw if raw is not None else {})
        if not serializer.is_valid():
            raise ConfigSchemaError(flatten_errors(serializer.errors))
        return json.loads(json.dumps(serializer.validated_data))

    @staticmethod
    def fingerprint(data: Dict) -> str:
        """SHA-256 of the canonical validated config, output section excluded"""
        return _sha256(_canonical({key: value for key, value in data.items() if key != "output"}))

    @staticmethod
    def build(data: Dict) -> RunConfig:
        """RunConfig from validated data; plants are memoized per canonical form"""
        return RunConfig(
            system=_build_system(_canonical(data)),
            explore=dict(data["explore"]),
            output_dir=data["output"]["directory"],
            write_manifest=data["output"]["write_manifest"],
            data=data,
            fingerprint=ConfigService.fingerprint(data),
        )

    @staticmethod
    def load(path: Optional[str] = None, overrides: Optional[Dict[str, object]] = None) -> RunConfig:
        """
        Read, validate and build a run config. ``overrides`` maps dotted keys
        (e.g. ``system.measure``) to values applied before validation.
        """
        raw = ConfigRepository.read(path)
        for dotted, value in (overrides or {}).items():
            if value is None:
                continue
            section, key = dotted.split(".", 1)
            current = raw.get(section)
            raw[section] = dict(current) if isinstance(current, dict) else {}
            raw[section][key] = value
        data = ConfigService.validate(raw)
        run = ConfigService.build(data)
        logger.info(f"Loaded config {path or ConfigRepository.default_path()} ({run.fingerprint[:12]})")
        return run

    @staticmethod
    def system_data(data: Dict, cfg: SystemConfig) -> Dict:
        """Validated data describing cfg, for shipping a config to workers"""
        data = json.loads(json.dumps(data))
        data["system"].update(topology=cfg.topology, measure=cfg.measure)
        data["composite"].update(r_ice=cfg.r_ice, total_rated_kw=cfg.total_rated_kw)
        return data


class SystemService:
    """Service for assembling and evaluating power systems"""

    @staticmethod
    def engine_for(cfg: SystemConfig) -> Optional[EngineCurve]:
        """Engine curve of the topology; the composite's is rescaled to r_ice of the total"""
        if not cfg.has_engine:
            return None
        if cfg.topology == Topology.COMPOSITE:
            return cfg.engine.rescaled(cfg.r_ice * cfg.total_rated_kw)
        return cfg.engine

    @staticmethod
    def stack_for(cfg: SystemConfig) -> Optional[FcStack]:
        if not cfg.has_stack:
            return None
        if cfg.topology == Topology.COMPOSITE:
            return FuelCellService.rescaled(cfg.stack, (1.0 - cfg.r_ice) * cfg.total_rated_kw)
        return cfg.stack

    @staticmethod
    def envelopes(cfg: SystemConfig) -> Dict[str, Tuple[float, float]]:
        """Operating range of each engine present, kW"""
        ranges = {}
        engine = SystemService.engine_for(cfg)
        if engine is not None:
            ranges["ice"] = (engine.p_min_kw, engine.p_max_kw)
        stack = SystemService.stack_for(cfg)
        if stack is not None:
            ranges["fc"] = (stack.min_power_kw, FuelCellService.peak_power(stack)[1])
        return ranges

    @staticmethod
    def check_targets(cfg: SystemConfig, w_gen_kw: float, w_fc_kw: float) -> None:
        if w_gen_kw < 0.0 or w_fc_kw < 0.0:
            raise ArgumentError(f"Power targets must be non-negative (W_gen={w_gen_kw}, W_fc={w_fc_kw})",
                                stage="system")
        if (w_gen_kw > 0.0 and not cfg.has_engine) or (w_fc_kw > 0.0 and not cfg.has_stack):
            raise TopologyMismatchError(cfg.topology, w_gen_kw, w_fc_kw)
        if w_gen_kw > 0.0:
            SystemService.engine_for(cfg).check_envelope(w_gen_kw)
        if w_fc_kw > 0.0:
            stack = SystemService.stack_for(cfg)
            p_max = FuelCellService.peak_power(stack)[1]
            if w_fc_kw < stack.min_power_kw:
                raise EnvelopeError(w_fc_kw, stack.min_power_kw, p_max, stage="pemfc")

    @staticmethod
    def material_balance(cfg: SystemConfig, w_gen_kw: float, w_fc_kw: float) -> FlowSolution:
        """
        Route ammonia through the plant: the ADU makes all hydrogen; its outlet
        splits so the engine branch carries exactly the engine's hydrogen, the
        NH3 riding along burns in the engine in place of direct NH3, and the
        separator branch gives pure H2 to the stack with its NH3 lost.
        """
        SystemService.check_targets(cfg, w_gen_kw, w_fc_kw)
        ice = fc = None
        h2_ice = h2_fc = nh3_ice = 0.0
        if w_gen_kw > 0.0:
            ice = EngineService.energy_balance(w_gen_kw, SystemService.engine_for(cfg), cfg.excess_air_ratio, cfg.db)
            h2_ice = ice.h2_g_s / MOLAR_MASS[Species.H2]
            nh3_ice = ice.nh3_g_s / MOLAR_MASS[Species.NH3]
        if w_fc_kw > 0.0:
            fc = FuelCellService.solve_current_for_power(w_fc_kw, SystemService.stack_for(cfg), cfg.db)
            h2_fc = fc.h2_g_s / MOLAR_MASS[Species.H2]

        demand = h2_ice + h2_fc
        feed, conversion = ReactorService.solve_feed_for_h2(demand, cfg.bed)
        outlet = None
        unconverted = 0.0
        if feed > 0.0:
            unconverted = feed * (1.0 - conversion)
            outlet = GasStream(
                {Species.NH3: unconverted, Species.H2: demand, Species.N2: demand / 3.0},
                temperature_k=cfg.t_dec_k, pressure_kpa=cfg.bed.pressure_kpa,
            )
        share = h2_ice / demand if demand > 0.0 else 0.0
        slip = share * unconverted
        direct = nh3_ice - slip
        if direct < -DIRECT_NH3_TOLERANCE_MOL_S:
            raise SlipExceedsDemandError(slip, nh3_ice, conversion)
        return FlowSolution(
            ice=ice,
            fc=fc,
            h2_ice_mol_s=h2_ice,
            h2_fc_mol_s=h2_fc,
            adu_feed_mol_s=feed,
            conversion=conversion if feed > 0.0 else 0.0,
            adu_outlet=outlet,
            ice_branch_fraction=share,
            slip_to_ice_mol_s=slip,
            retentate_nh3_mol_s=unconverted - slip,
            direct_nh3_mol_s=max(direct, 0.0),
        )

    @staticmethod
    def pump_power(nh3_mass_flow_g_s: float, cfg: SystemConfig) -> float:
        """Liquid NH3 pump from tank to ADU pressure, kW"""
        if nh3_mass_flow_g_s < 0.0:
            raise ArgumentError(f"Negative NH3 flow: {nh3_mass_flow_g_s} g/s", stage="system")
        dp_pa = max(0.0, cfg.bed.pressure_kpa - cfg.tank_pressure_kpa) * 1000.0
        return nh3_mass_flow_g_s / 1000.0 * dp_pa / (cfg.nh3_liquid_density_kg_m3 * cfg.pump_efficiency) / 1000.0

    @staticmethod
    def compressor_specific_work(cfg: SystemConfig) -> float:
        """kJ per kg of air"""
        ratio = cfg.compressor_pressure_ratio
        if ratio < 1.0:
            raise ArgumentError(f"Compressor pressure ratio {ratio} below 1", stage="system")
        exponent = (cfg.air_gamma - 1.0) / cfg.air_gamma
        return cfg.air_cp_kj_kg_k * cfg.air_inlet_temperature_k * (ratio ** exponent - 1.0) / cfg.compressor_efficiency

    @staticmethod
    def compressor_power(air_mass_flow_g_s: float, cfg: SystemConfig) -> float:
        """Cathode air compressor, kW"""
        if air_mass_flow_g_s < 0.0:
            raise ArgumentError(f"Negative air flow: {air_mass_flow_g_s} g/s", stage="system")
        return air_mass_flow_g_s / 1000.0 * SystemService.compressor_specific_work(cfg)

    @staticmethod
    def cathode_air_g_s(h2_fc_mol_s: float, cfg: SystemConfig) -> float:
        o2 = 0.5 * h2_fc_mol_s * cfg.cathode_stoichiometry
        return o2 / AIR_O2_FRACTION * MOLAR_MASS[Species.AIR]

    @staticmethod
    def _operating_point(cfg: SystemConfig, w_gen_kw: float, w_fc_kw: float) -> OperatingPoint:
        flows = SystemService.material_balance(cfg, w_gen_kw, w_fc_kw)
        t_dec = cfg.t_dec_k
        q_pre = ThermoService.preheat_duty(flows.adu_feed_mol_s, cfg.tank_temperature_k, t_dec, cfg.db) / 1000.0
        q_dec = 0.0
        product_cooling = 0.0
        if flows.adu_outlet is not None:
            reacted = flows.adu_feed_mol_s * flows.conversion
            q_dec = reacted * ThermoService.decomposition_enthalpy(t_dec, cfg.db) + cfg.bed.heat_loss_kw
            product_cooling = ThermoService.stream_enthalpy_delta(
                flows.adu_outlet, PRODUCT_DELIVERY_TEMPERATURE_K, t_dec, cfg.db) / 1000.0
        pools = RecoveryService.classify(flows.ice, flows.fc, product_cooling, t_dec,
                                         cfg.include_low_grade_exhaust, cfg.db)
        return OperatingPoint(
            w_gen_kw=w_gen_kw,
            w_fc_kw=w_fc_kw,
            flows=flows,
            q_pre_kw=q_pre,
            q_dec_kw=q_dec,
            q_high_kw=pools.q_high_kw,
            q_low_kw=pools.q_low_kw,
            product_cooling_kw=product_cooling,
            w_pump_kw=SystemService.pump_power(flows.adu_feed_g_s, cfg),
            w_comp_kw=SystemService.compressor_power(SystemService.cathode_air_g_s(flows.h2_fc_mol_s, cfg), cfg),
        )

    @staticmethod
    def operating_point(cfg: SystemConfig, w_gen_kw: float, w_fc_kw: float) -> OperatingPoint:
        """Measure-independent part of an evaluation, cached per plant and targets"""
        key = f"{CACHE_PREFIX}:point:{cfg.point_fingerprint}:{float(w_gen_kw)!r}:{float(w_fc_kw)!r}"
        data = cache.get(key)
        if data is None:
            data = SystemService._operating_point(cfg, float(w_gen_kw), float(w_fc_kw))
            cache.set(key, data, CACHE_TTL)
        return data

    @staticmethod
    def _energy_ledger(cfg: SystemConfig, point: OperatingPoint, heat: HeatLedger, w_sys_kw: float,
                       fuel_lhv_kw: float) -> EnergyLedger:
        flows = point.flows
        nh3_molar_lhv = ThermoService.molar_lhv(Species.NH3, cfg.db)
        retentate_kw = flows.retentate_nh3_mol_s * nh3_molar_lhv
        # 2 NH3 -> 3 H2 + N2: heating value gained per mol NH3 cracked
        reacted = flows.adu_feed_mol_s * flows.conversion
        upgrade = reacted * (1.5 * ThermoService.molar_lhv(Species.H2, cfg.db) - nh3_molar_lhv)
        other = 0.0
        if flows.ice is not None:
            other += flows.ice.generator_loss_kw + flows.ice.lubrication_heat_kw
            if not cfg.include_low_grade_exhaust:
                other += EngineService.low_grade_exhaust_heat(flows.ice, cfg.t_dec_k, cfg.db)
        return EnergyLedger(
            fuel_lhv_kw=fuel_lhv_kw,
            useful_work_kw=w_sys_kw,
            auxiliary_kw=point.w_pump_kw + point.w_comp_kw,
            hydrogen_production_kw=point.q_pre_kw + point.q_dec_kw - upgrade - point.product_cooling_kw,
            high_temp_heat_kw=point.q_high_kw - heat.q_high_recovered_kw,
            low_temp_heat_kw=point.q_low_kw - heat.q_low_recovered_kw,
            retentate_loss_kw=retentate_kw,
            other_losses_kw=other,
        )

    @staticmethod
    def _evaluate(cfg: SystemConfig, w_gen_kw: float, w_fc_kw: float) -> SystemResult:
        point = SystemService.operating_point(cfg, w_gen_kw, w_fc_kw)
        flows = point.flows
        pools = HeatPools(q_high_kw=point.q_high_kw, q_low_kw=point.q_low_kw)
        heat = RecoveryService.apply_measure(cfg.measure, point.q_pre_kw, point.q_dec_kw, pools)
        w_sys = w_gen_kw + w_fc_kw - point.w_pump_kw - point.w_comp_kw - heat.w_eh_kw
        nh3_molar_lhv = ThermoService.molar_lhv(Species.NH3, cfg.db)
        fuel_lhv = flows.total_nh3_mol_s * nh3_molar_lhv
        energy = SystemService._energy_ledger(cfg, point, heat, w_sys, fuel_lhv)
        if fuel_lhv > 0.0 and abs(energy.total_kw - fuel_lhv) > 1e-6 * fuel_lhv:
            logger.warning(f"Energy ledger off by {energy.total_kw - fuel_lhv:.3e} kW at "
                           f"W_gen={w_gen_kw}, W_fc={w_fc_kw}")
        return SystemResult(
            topology=cfg.topology,
            measure=cfg.measure,
            fingerprint=cfg.fingerprint,
            w_gen_kw=w_gen_kw,
            w_fc_kw=w_fc_kw,
            w_sys_kw=w_sys,
            eta_sys=w_sys / fuel_lhv if fuel_lhv > 0.0 else 0.0,
            eta_ice=flows.ice.efficiency if flows.ice is not None else None,
            eta_fc=flows.fc.efficiency if flows.fc is not None else None,
            eta_ice_nh3=w_gen_kw / (flows.ice_nh3_mol_s * nh3_molar_lhv) if flows.ice is not None else None,
            eta_fc_nh3=w_fc_kw / (flows.fc_nh3_mol_s * nh3_molar_lhv) if flows.fc is not None else None,
            flows=flows,
            q_pre_kw=point.q_pre_kw,
            q_dec_kw=point.q_dec_kw,
            q_high_kw=point.q_high_kw,
            q_low_kw=point.q_low_kw,
            product_cooling_kw=point.product_cooling_kw,
            heat=heat,
            w_pump_kw=point.w_pump_kw,
            w_comp_kw=point.w_comp_kw,
            energy=energy,
        )

    @staticmethod
    def evaluate(cfg: SystemConfig, w_gen_kw: float, w_fc_kw: float) -> SystemResult:
        """W_sys and eta_sys of one operating point under cfg.measure"""
        w_gen_kw, w_fc_kw = float(w_gen_kw), float(w_fc_kw)
        key = f"{CACHE_PREFIX}:result:{cfg.fingerprint}:{w_gen_kw!r}:{w_fc_kw!r}"
        data = cache.get(key)
        if data is None:
            data = SystemService._evaluate(cfg, w_gen_kw, w_fc_kw)
            cache.set(key, data, CACHE_TTL)
        return data
