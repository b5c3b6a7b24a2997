"""
Serializers for run configs and results
Run configs are validated strictly: unknown keys fail with their dotted path,
missing keys take the documented default and are logged.
"""
import logging
from collections.abc import Mapping

from rest_framework import serializers
from rest_framework.fields import empty

from adu.constants import BedDefaults, KineticDefaults
from explore.constants import ExploreDefaults
from ice_gen.constants import (
    DEFAULT_EXCESS_AIR_RATIO,
    H2_INJECTION_PRESSURE_MPA,
    HYDROGEN_MOLE_RATIO,
    MAX_THERMAL_EFFICIENCY,
    NH3_INJECTION_PRESSURE_MPA,
    EngineCalibration,
)
from pemfc.constants import StackDefaults
from recovery.constants import INCLUDE_LOW_GRADE_EXHAUST, Measure
from thermo.constants import DECOMPOSITION_ENTHALPY_KJ_MOL, LATENT_HEAT_NH3_KJ_MOL, LHV_KJ_G, Species

from .constants import CompositeDefaults, SystemDefaults, Topology

logger = logging.getLogger(__name__)


def flatten_errors(errors, prefix=""):
    """Nested serializer errors as {dotted.key: message}"""
    flat = {}
    for key, value in errors.items():
        path = f"{prefix}.{key}" if prefix else str(key)
        if isinstance(value, Mapping):
            flat.update(flatten_errors(value, path))
        elif isinstance(value, (list, tuple)):
            flat[path] = "; ".join(str(v) for v in value)
        else:
            flat[path] = str(value)
    return flat


class StrictSerializer(serializers.Serializer):
    """Rejects unknown keys and logs every default it fills in"""

    def _path(self, name):
        parts = [name]
        node = self
        while node is not None and getattr(node, "field_name", None):
            parts.append(node.field_name)
            node = node.parent
        return ".".join(reversed(parts))

    def to_internal_value(self, data):
        if data is None:
            data = {}
        if not isinstance(data, Mapping):
            raise serializers.ValidationError("Expected a mapping of keys to values")
        unknown = sorted(str(key) for key in set(data) - set(self.fields))
        if unknown:
            raise serializers.ValidationError({key: ["Unknown key"] for key in unknown})
        data = dict(data)
        for name, field in self.fields.items():
            if name in data:
                continue
            if isinstance(field, serializers.BaseSerializer):
                logger.info(f"Config section {self._path(name)} missing, using defaults")
                data[name] = {}
            elif field.default is not empty:
                logger.info(f"Config key {self._path(name)} missing, using default {field.default!r}")
        return super().to_internal_value(data)


def _positive(default, **kwargs):
    return serializers.FloatField(default=default, min_value=0.0, **kwargs)


def _fraction_list(default):
    return serializers.ListField(child=serializers.FloatField(), min_length=2, default=list(default))


class ThermoSectionSerializer(StrictSerializer):
    property_file = serializers.CharField(allow_null=True, default=None)
    latent_heat_kj_mol = _positive(LATENT_HEAT_NH3_KJ_MOL)
    reaction_enthalpy_kj_mol = _positive(DECOMPOSITION_ENTHALPY_KJ_MOL)
    lhv_nh3_kj_g = _positive(LHV_KJ_G[Species.NH3])
    lhv_h2_kj_g = _positive(LHV_KJ_G[Species.H2])


class BedSectionSerializer(StrictSerializer):
    activation_energy_kj_mol = _positive(KineticDefaults.ACTIVATION_ENERGY_KJ_MOL)
    pre_exponential = _positive(KineticDefaults.PRE_EXPONENTIAL)
    beta = _positive(KineticDefaults.BETA, max_value=1.0)
    area_m2 = serializers.FloatField(default=BedDefaults.AREA_M2)
    length_m = serializers.FloatField(default=BedDefaults.LENGTH_M)
    temperature_k = _positive(BedDefaults.TEMPERATURE_K)
    pressure_kpa = _positive(BedDefaults.PRESSURE_KPA)
    max_ghsv_per_h = _positive(BedDefaults.MAX_GHSV_PER_H)
    heat_loss_kw = serializers.FloatField(default=BedDefaults.HEAT_LOSS_KW, min_value=0.0)


class EngineSectionSerializer(StrictSerializer):
    hydrogen_mole_ratio = _positive(HYDROGEN_MOLE_RATIO, max_value=1.0)
    max_thermal_efficiency = _positive(MAX_THERMAL_EFFICIENCY, max_value=1.0)
    power_kw = _fraction_list(EngineCalibration.POWER_KW)
    efficiency = _fraction_list(EngineCalibration.EFFICIENCY)
    coolant_fraction = _fraction_list(EngineCalibration.COOLANT_FRACTION)
    lubrication_fraction = _fraction_list(EngineCalibration.LUBRICATION_FRACTION)
    generator_efficiency = serializers.ListField(child=serializers.FloatField(), allow_null=True, default=None)
    nh3_injection_pressure_mpa = _positive(NH3_INJECTION_PRESSURE_MPA)
    h2_injection_pressure_mpa = _positive(H2_INJECTION_PRESSURE_MPA)
    excess_air_ratio = serializers.FloatField(default=DEFAULT_EXCESS_AIR_RATIO)


class StackSectionSerializer(StrictSerializer):
    cell_count = serializers.IntegerField(default=StackDefaults.CELL_COUNT, min_value=1)
    cell_area_cm2 = _positive(StackDefaults.CELL_AREA_CM2)
    temperature_k = _positive(StackDefaults.TEMPERATURE_K)
    h2_pressure_kpa = serializers.FloatField(default=StackDefaults.H2_PRESSURE_KPA)
    o2_pressure_kpa = serializers.FloatField(default=StackDefaults.O2_PRESSURE_KPA)
    transfer_coefficient = _positive(StackDefaults.TRANSFER_COEFFICIENT, max_value=1.0)
    exchange_current_density = _positive(StackDefaults.EXCHANGE_CURRENT_DENSITY)
    limiting_current_density = _positive(StackDefaults.LIMITING_CURRENT_DENSITY)
    membrane_thickness_cm = _positive(StackDefaults.MEMBRANE_THICKNESS_CM)
    membrane_conductivity = _positive(StackDefaults.MEMBRANE_CONDUCTIVITY)
    min_power_kw = _positive(StackDefaults.MIN_POWER_KW)


class SystemSectionSerializer(StrictSerializer):
    topology = serializers.ChoiceField(choices=Topology.CHOICES, default=SystemDefaults.TOPOLOGY)
    measure = serializers.ChoiceField(choices=Measure.CHOICES, default=SystemDefaults.MEASURE)
    tank_temperature_k = _positive(SystemDefaults.TANK_TEMPERATURE_K)
    tank_pressure_kpa = _positive(SystemDefaults.TANK_PRESSURE_KPA)
    pump_efficiency = _positive(SystemDefaults.PUMP_EFFICIENCY, max_value=1.0)
    compressor_efficiency = _positive(SystemDefaults.COMPRESSOR_EFFICIENCY, max_value=1.0)
    compressor_pressure_ratio = serializers.FloatField(default=SystemDefaults.COMPRESSOR_PRESSURE_RATIO, min_value=1.0)
    cathode_stoichiometry = serializers.FloatField(default=SystemDefaults.CATHODE_STOICHIOMETRY, min_value=1.0)
    nh3_liquid_density_kg_m3 = _positive(SystemDefaults.NH3_LIQUID_DENSITY_KG_M3)
    air_cp_kj_kg_k = _positive(SystemDefaults.AIR_CP_KJ_KG_K)
    air_gamma = serializers.FloatField(default=SystemDefaults.AIR_GAMMA, min_value=1.0)
    air_inlet_temperature_k = _positive(SystemDefaults.AIR_INLET_TEMPERATURE_K)
    include_low_grade_exhaust = serializers.BooleanField(default=INCLUDE_LOW_GRADE_EXHAUST)


class CompositeSectionSerializer(StrictSerializer):
    r_ice = _positive(CompositeDefaults.R_ICE, max_value=1.0)
    total_rated_kw = _positive(CompositeDefaults.TOTAL_RATED_KW)


class ExploreSectionSerializer(StrictSerializer):
    grid_step_kw = _positive(ExploreDefaults.GRID_STEP_KW)
    scan_step_kw = _positive(ExploreDefaults.SCAN_STEP_KW)
    curve_step_kw = _positive(ExploreDefaults.CURVE_STEP_KW)
    ghsv_min_per_h = _positive(ExploreDefaults.GHSV_MIN_PER_H)
    ghsv_max_per_h = _positive(ExploreDefaults.GHSV_MAX_PER_H)
    ghsv_points = serializers.IntegerField(default=ExploreDefaults.GHSV_POINTS, min_value=2)
    r_values = serializers.ListField(child=serializers.FloatField(min_value=0.0, max_value=1.0), min_length=1,
                                     default=list(ExploreDefaults.R_VALUES))
    refine = serializers.BooleanField(default=ExploreDefaults.REFINE)

    def validate(self, attrs):
        if attrs["ghsv_min_per_h"] >= attrs["ghsv_max_per_h"]:
            raise serializers.ValidationError({"ghsv_max_per_h": ["Must exceed ghsv_min_per_h"]})
        if any(not 0.0 < r < 1.0 for r in attrs["r_values"]):
            raise serializers.ValidationError({"r_values": ["Every r_ice must lie strictly between 0 and 1"]})
        if any(v <= 0.0 for v in (attrs["grid_step_kw"], attrs["scan_step_kw"], attrs["curve_step_kw"])):
            raise serializers.ValidationError("Grid steps must be positive")
        return attrs


class OutputSectionSerializer(StrictSerializer):
    directory = serializers.CharField(allow_null=True, default=None)
    write_manifest = serializers.BooleanField(default=True)


class RunConfigSerializer(StrictSerializer):
    """Whole run config: one section per app plus explore and output settings"""

    thermo = ThermoSectionSerializer()
    bed = BedSectionSerializer()
    engine = EngineSectionSerializer()
    stack = StackSectionSerializer()
    system = SystemSectionSerializer()
    composite = CompositeSectionSerializer()
    explore = ExploreSectionSerializer()
    output = OutputSectionSerializer()


class SystemResultSerializer(serializers.Serializer):
    """Documented JSON shape of one evaluated operating point"""

    topology = serializers.CharField()
    measure = serializers.CharField()
    measure_description = serializers.SerializerMethodField()
    fingerprint = serializers.CharField()
    w_gen_kw = serializers.FloatField()
    w_fc_kw = serializers.FloatField()
    w_sys_kw = serializers.FloatField()
    eta_sys = serializers.FloatField()
    eta_ice = serializers.FloatField(allow_null=True)
    eta_fc = serializers.FloatField(allow_null=True)
    eta_ice_nh3 = serializers.FloatField(allow_null=True)
    eta_fc_nh3 = serializers.FloatField(allow_null=True)
    exhaust_temperature_k = serializers.FloatField(allow_null=True)
    auxiliaries = serializers.SerializerMethodField()
    heat = serializers.SerializerMethodField()
    flows = serializers.SerializerMethodField()
    ledger = serializers.SerializerMethodField()

    def get_measure_description(self, result):
        return Measure.DESCRIPTIONS[result.measure]

    def get_auxiliaries(self, result):
        return {"w_pump_kw": result.w_pump_kw, "w_comp_kw": result.w_comp_kw, "w_eh_kw": result.w_eh_kw}

    def get_heat(self, result):
        data = result.heat.as_dict()
        data.update(
            q_high_available_kw=result.q_high_kw,
            q_low_available_kw=result.q_low_kw,
            product_cooling_kw=result.product_cooling_kw,
        )
        return data

    def get_flows(self, result):
        return result.flows.as_dict()

    def get_ledger(self, result):
        return result.energy.as_dict()
