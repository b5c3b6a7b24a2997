"""
Service layer for ice_gen app
Combustion stoichiometry, fuel demand, engine energy balance and the
high-temperature heat available in the exhaust
"""
import logging
from typing import Optional, Tuple

from scipy.optimize import brentq

from system.exceptions import ArgumentError, CalibrationError, RichMixtureError
from thermo.constants import MOLAR_MASS, N2_PER_O2_IN_AIR, REFERENCE_TEMPERATURE_K, Species
from thermo.domain import GasStream, ThermoDb
from thermo.services import ThermoService

from .constants import DEFAULT_EXCESS_AIR_RATIO, EXHAUST_MAX_TEMPERATURE_K, EXHAUST_MIN_TEMPERATURE_K
from .domain import EngineCurve, IceOperatingPoint

logger = logging.getLogger(__name__)


class CombustionService:
    """Service for complete combustion of NH3/H2 blends in air"""

    @staticmethod
    def _check(hydrogen_mole_ratio: float, excess_air_ratio: float, fuel_flow_mol_s: float) -> None:
        if not 0.0 <= hydrogen_mole_ratio <= 1.0:
            raise ArgumentError(f"Hydrogen mole ratio {hydrogen_mole_ratio} outside [0, 1]", stage="ice_gen")
        if excess_air_ratio < 1.0:
            raise RichMixtureError(excess_air_ratio)
        if fuel_flow_mol_s < 0.0:
            raise ArgumentError(f"Negative fuel flow: {fuel_flow_mol_s} mol/s", stage="ice_gen")

    @staticmethod
    def stoichiometric_oxygen(hydrogen_mole_ratio: float) -> float:
        """mol O2 per mol fuel blend"""
        return 0.75 * (1.0 - hydrogen_mole_ratio) + 0.5 * hydrogen_mole_ratio

    @staticmethod
    def oxygen_supplied(hydrogen_mole_ratio: float, excess_air_ratio: float, fuel_flow_mol_s: float) -> float:
        CombustionService._check(hydrogen_mole_ratio, excess_air_ratio, fuel_flow_mol_s)
        return excess_air_ratio * CombustionService.stoichiometric_oxygen(hydrogen_mole_ratio) * fuel_flow_mol_s

    @staticmethod
    def air_mass_flow_g_s(hydrogen_mole_ratio: float, excess_air_ratio: float, fuel_flow_mol_s: float) -> float:
        o2 = CombustionService.oxygen_supplied(hydrogen_mole_ratio, excess_air_ratio, fuel_flow_mol_s)
        return o2 * MOLAR_MASS[Species.O2] + o2 * N2_PER_O2_IN_AIR * MOLAR_MASS[Species.N2]

    @staticmethod
    def combustion_products(hydrogen_mole_ratio: float, excess_air_ratio: float,
                            fuel_flow_mol_s: float) -> GasStream:
        """Exhaust of (1-a) NH3 + a H2 burnt completely with lambda times stoichiometric air"""
        CombustionService._check(hydrogen_mole_ratio, excess_air_ratio, fuel_flow_mol_s)
        a = hydrogen_mole_ratio
        o2_stoich = CombustionService.stoichiometric_oxygen(a)
        per_mol = {
            Species.H2O: 1.5 * (1.0 - a) + a,
            Species.N2: 0.5 * (1.0 - a) + N2_PER_O2_IN_AIR * excess_air_ratio * o2_stoich,
            Species.O2: (excess_air_ratio - 1.0) * o2_stoich,
        }
        return GasStream({s: n * fuel_flow_mol_s for s, n in per_mol.items()})


class EngineService:
    """Service for the engine-generator unit"""

    @staticmethod
    def fuel_molar_lhv(curve: EngineCurve, db: Optional[ThermoDb] = None) -> float:
        """kJ per mol of fuel blend"""
        a = curve.hydrogen_mole_ratio
        return ((1.0 - a) * ThermoService.molar_lhv(Species.NH3, db)
                + a * ThermoService.molar_lhv(Species.H2, db))

    @staticmethod
    def fuel_for_power(w_gen_kw: float, curve: EngineCurve,
                       db: Optional[ThermoDb] = None) -> Tuple[float, float]:
        """(NH3, H2) mass flows in g/s delivering w_gen_kw"""
        fuel_lhv_kw = w_gen_kw / curve.combined_efficiency(w_gen_kw)
        fuel_mol_s = fuel_lhv_kw / EngineService.fuel_molar_lhv(curve, db)
        a = curve.hydrogen_mole_ratio
        return (
            (1.0 - a) * fuel_mol_s * MOLAR_MASS[Species.NH3],
            a * fuel_mol_s * MOLAR_MASS[Species.H2],
        )

    @staticmethod
    def fuel_lhv_kw(nh3_g_s: float, h2_g_s: float, db: Optional[ThermoDb] = None) -> float:
        return nh3_g_s * ThermoService.lhv(Species.NH3, db) + h2_g_s * ThermoService.lhv(Species.H2, db)

    @staticmethod
    def efficiency_of(nh3_g_s: float, h2_g_s: float, w_gen_kw: float, db: Optional[ThermoDb] = None) -> float:
        """W_gen over fuel LHV input"""
        return w_gen_kw / EngineService.fuel_lhv_kw(nh3_g_s, h2_g_s, db)

    @staticmethod
    def exhaust_temperature(exhaust: GasStream, exhaust_heat_kw: float, db: Optional[ThermoDb] = None) -> float:
        """Temperature at which the exhaust carries exhaust_heat_kw above the reference state"""
        if exhaust_heat_kw < 0.0:
            raise CalibrationError(
                f"Negative exhaust heat {exhaust_heat_kw:.4f} kW: heat-split fractions inconsistent",
                stage="ice_gen")
        if exhaust_heat_kw == 0.0:
            return EXHAUST_MIN_TEMPERATURE_K
        target_w = exhaust_heat_kw * 1000.0

        def residual(t):
            return ThermoService.stream_enthalpy_delta(exhaust, REFERENCE_TEMPERATURE_K, t, db) - target_w

        if residual(EXHAUST_MAX_TEMPERATURE_K) < 0.0:
            raise CalibrationError(
                f"Exhaust heat {exhaust_heat_kw:.3f} kW implies an exhaust above "
                f"{EXHAUST_MAX_TEMPERATURE_K} K: heat-split fractions inconsistent", stage="ice_gen")
        return brentq(residual, EXHAUST_MIN_TEMPERATURE_K, EXHAUST_MAX_TEMPERATURE_K, xtol=1e-9, rtol=1e-12)

    @staticmethod
    def energy_balance(w_gen_kw: float, curve: EngineCurve,
                       excess_air_ratio: float = DEFAULT_EXCESS_AIR_RATIO,
                       db: Optional[ThermoDb] = None) -> IceOperatingPoint:
        """Split fuel energy into generator output, generator loss, coolant, lubrication and exhaust"""
        nh3_g_s, h2_g_s = EngineService.fuel_for_power(w_gen_kw, curve, db)
        fuel_lhv = EngineService.fuel_lhv_kw(nh3_g_s, h2_g_s, db)
        eta_gen = curve.generator_efficiency_at(w_gen_kw)
        coolant = curve.coolant_fraction_at(w_gen_kw) * fuel_lhv
        lubrication = curve.lubrication_fraction_at(w_gen_kw) * fuel_lhv
        exhaust_heat = fuel_lhv - w_gen_kw / eta_gen - coolant - lubrication

        fuel_mol_s = nh3_g_s / MOLAR_MASS[Species.NH3] + h2_g_s / MOLAR_MASS[Species.H2]
        a = curve.hydrogen_mole_ratio
        products = CombustionService.combustion_products(a, excess_air_ratio, fuel_mol_s)
        t_exhaust = EngineService.exhaust_temperature(products, exhaust_heat, db)
        return IceOperatingPoint(
            w_gen_kw=w_gen_kw,
            efficiency=curve.combined_efficiency(w_gen_kw),
            generator_efficiency=eta_gen,
            fuel_lhv_kw=fuel_lhv,
            nh3_g_s=nh3_g_s,
            h2_g_s=h2_g_s,
            air_g_s=CombustionService.air_mass_flow_g_s(a, excess_air_ratio, fuel_mol_s),
            excess_air_ratio=excess_air_ratio,
            exhaust=products.at(temperature_k=t_exhaust),
            exhaust_heat_kw=exhaust_heat,
            coolant_heat_kw=coolant,
            lubrication_heat_kw=lubrication,
        )

    @staticmethod
    def high_temp_heat(point: IceOperatingPoint, t_dec_k: float, db: Optional[ThermoDb] = None) -> float:
        """Exhaust heat released cooling from its temperature down to t_dec, kW"""
        if point.exhaust_temperature_k <= t_dec_k:
            return 0.0
        return ThermoService.stream_enthalpy_delta(point.exhaust, t_dec_k, point.exhaust_temperature_k, db) / 1000.0

    @staticmethod
    def low_grade_exhaust_heat(point: IceOperatingPoint, t_dec_k: float, db: Optional[ThermoDb] = None) -> float:
        """Exhaust heat between min(T_exh, t_dec) and the reference temperature, kW"""
        upper = min(point.exhaust_temperature_k, t_dec_k)
        if upper <= REFERENCE_TEMPERATURE_K:
            return 0.0
        return ThermoService.stream_enthalpy_delta(point.exhaust, REFERENCE_TEMPERATURE_K, upper, db) / 1000.0
