"""
Service layer for thermo app
Sensible enthalpies, preheat and decomposition duties, heating values and the
ammonia equilibrium constant
"""
import math
from functools import lru_cache
from typing import Dict, Optional

from system.exceptions import ArgumentError, TemperatureRangeError, UnsupportedSpeciesError

from .constants import (
    ATM_BAR,
    DECOMPOSITION_ENTHALPY_KJ_MOL,
    EQUILIBRIUM_MAX_TEMPERATURE_K,
    EQUILIBRIUM_MIN_TEMPERATURE_K,
    LATENT_HEAT_NH3_KJ_MOL,
    LHV_KJ_G,
    MOLAR_MASS,
    NOMINAL_H2_PER_NH3_G,
    Species,
)
from .domain import GasStream, ThermoDb
from .repositories import PropertyRepository


@lru_cache(maxsize=8)
def _load_db(property_file, latent_heat, reaction_enthalpy, lhv_nh3, lhv_h2) -> ThermoDb:
    return ThermoDb(
        polynomials=PropertyRepository.load_polynomials(property_file),
        latent_heat_kj_mol=latent_heat,
        reaction_enthalpy_kj_mol=reaction_enthalpy,
        lhv_kj_g={Species.NH3: lhv_nh3, Species.H2: lhv_h2},
    )


class ThermoService:
    """Service for species properties and process heat duties"""

    @staticmethod
    def build_db(
        property_file: Optional[str] = None,
        latent_heat_kj_mol: float = LATENT_HEAT_NH3_KJ_MOL,
        reaction_enthalpy_kj_mol: float = DECOMPOSITION_ENTHALPY_KJ_MOL,
        lhv_nh3_kj_g: float = LHV_KJ_G[Species.NH3],
        lhv_h2_kj_g: float = LHV_KJ_G[Species.H2],
    ) -> ThermoDb:
        return _load_db(property_file, latent_heat_kj_mol, reaction_enthalpy_kj_mol, lhv_nh3_kj_g, lhv_h2_kj_g)

    @staticmethod
    def default_db() -> ThermoDb:
        return ThermoService.build_db()

    @staticmethod
    def sensible_enthalpy(species: str, temperature_k: float, db: Optional[ThermoDb] = None) -> float:
        """Molar enthalpy above the reference temperature, J/mol"""
        db = db or ThermoService.default_db()
        poly = db.polynomial(species)
        return poly.enthalpy(temperature_k) - poly.enthalpy(db.reference_temperature_k)

    @staticmethod
    def stream_enthalpy_delta(stream: GasStream, t_from_k: float, t_to_k: float,
                              db: Optional[ThermoDb] = None) -> float:
        """Heat to take a stream from t_from to t_to, W"""
        db = db or ThermoService.default_db()
        duty = 0.0
        for species, flow in stream.flows.items():
            if flow == 0.0:
                continue
            poly = db.polynomial(species)
            duty += flow * (poly.enthalpy(t_to_k) - poly.enthalpy(t_from_k))
        return duty

    @staticmethod
    def preheat_duty(nh3_flow_mol_s: float, t_tank_k: float, t_out_k: float,
                     db: Optional[ThermoDb] = None) -> float:
        """Vaporize tank ammonia and superheat the vapour to t_out, W"""
        db = db or ThermoService.default_db()
        if nh3_flow_mol_s < 0.0:
            raise ArgumentError(f"Negative ammonia flow: {nh3_flow_mol_s} mol/s", stage="thermo")
        if t_out_k < t_tank_k:
            raise ArgumentError(f"Preheat outlet {t_out_k} K below tank temperature {t_tank_k} K", stage="thermo")
        if nh3_flow_mol_s == 0.0:
            return 0.0
        poly = db.polynomial(Species.NH3)
        superheat = poly.enthalpy(t_out_k) - poly.enthalpy(t_tank_k)
        return nh3_flow_mol_s * (db.latent_heat_kj_mol * 1000.0 + superheat)

    @staticmethod
    def decomposition_enthalpy(temperature_k: float, db: Optional[ThermoDb] = None) -> float:
        """NH3 -> 1.5 H2 + 0.5 N2 reaction enthalpy with Kirchhoff correction, kJ/mol NH3"""
        db = db or ThermoService.default_db()
        hs = ThermoService.sensible_enthalpy
        correction = (
            1.5 * hs(Species.H2, temperature_k, db)
            + 0.5 * hs(Species.N2, temperature_k, db)
            - hs(Species.NH3, temperature_k, db)
        )
        return db.reaction_enthalpy_kj_mol + correction / 1000.0

    @staticmethod
    def equilibrium_constant(temperature_k: float) -> float:
        """
        Ammonia synthesis equilibrium constant Kp = pNH3 / (pN2^0.5 pH2^1.5), 1/bar.
        Gillespie and Beattie (1930) correlation, converted from 1/atm.
        """
        if not EQUILIBRIUM_MIN_TEMPERATURE_K <= temperature_k <= EQUILIBRIUM_MAX_TEMPERATURE_K:
            raise TemperatureRangeError(
                "Kp(NH3)", temperature_k, EQUILIBRIUM_MIN_TEMPERATURE_K, EQUILIBRIUM_MAX_TEMPERATURE_K
            )
        t = temperature_k
        log10_ka = (
            -2.691122 * math.log10(t)
            - 5.519265e-5 * t
            + 1.848863e-7 * t * t
            + 2001.6 / t
            + 2.6899
        )
        return 10.0 ** log10_ka / ATM_BAR

    @staticmethod
    def lhv(species: str, db: Optional[ThermoDb] = None) -> float:
        """Lower heating value, kJ/g"""
        db = db or ThermoService.default_db()
        if species not in db.lhv_kj_g:
            raise UnsupportedSpeciesError(species, "lower heating value")
        return db.lhv_kj_g[species]

    @staticmethod
    def molar_lhv(species: str, db: Optional[ThermoDb] = None) -> float:
        """Lower heating value, kJ/mol"""
        return ThermoService.lhv(species, db) * MOLAR_MASS[species]

    @staticmethod
    def hydrogen_production_arithmetic(thermal_efficiency: float = 0.40,
                                       db: Optional[ThermoDb] = None) -> Dict[str, float]:
        """
        Energy bookkeeping of producing hydrogen from one mole of ammonia at the
        reference state: heat needed versus the useful work the hydrogen yields.
        """
        db = db or ThermoService.default_db()
        heat = db.latent_heat_kj_mol + db.reaction_enthalpy_kj_mol
        hydrogen_energy = NOMINAL_H2_PER_NH3_G * ThermoService.lhv(Species.H2, db)
        useful = hydrogen_energy * thermal_efficiency
        return {
            "heat_demand_kj_mol": heat,
            "hydrogen_energy_kj_mol": hydrogen_energy,
            "useful_work_kj_mol": useful,
            "heater_share": heat / useful,
        }
