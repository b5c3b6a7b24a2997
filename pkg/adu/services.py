"""
Service layer for adu app
Temkin-Pyzhev kinetics, isothermal plug-flow integration, conversion
characteristics, catalyst sizing and the feed needed for a hydrogen demand
"""
import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, List, Optional, Tuple

from scipy.integrate import solve_ivp
from scipy.optimize import bisect, brentq

from system.exceptions import (
    ArgumentError,
    BedCapacityError,
    ConversionUnreachableError,
    NumericalError,
)
from thermo.constants import BAR_KPA, GAS_CONSTANT, Species
from thermo.domain import GasStream, ThermoDb
from thermo.services import ThermoService

from .constants import (
    CHARACTERISTIC_ATOL,
    CHARACTERISTIC_MIN_GHSV_PER_H,
    CHARACTERISTIC_RTOL,
    EQUILIBRIUM_APPROACH,
    EQUILIBRIUM_SNAP,
    INTEGRATOR_ATOL,
    INTEGRATOR_METHOD,
    INTEGRATOR_RTOL,
    MOLE_CHANGE,
    ORACLE_STEPS,
    PRE_EXPONENTIAL_VOLUME_FACTOR,
    PRESSURE_FLOOR_BAR,
    SECONDS_PER_HOUR,
    STOICHIOMETRY,
)
from .domain import AduResult, CatalystBed, ConversionPoint

logger = logging.getLogger(__name__)


class KineticsService:
    """Service for the decomposition rate law"""

    @staticmethod
    def rate_constant(temperature_k: float, bed: CatalystBed) -> float:
        """Arrhenius factor, mol/(m3 s)"""
        k0 = bed.pre_exponential * PRE_EXPONENTIAL_VOLUME_FACTOR
        return k0 * math.exp(-bed.activation_energy_kj_mol * 1000.0 / (GAS_CONSTANT * temperature_k))

    @staticmethod
    def rate(temperature_k: float, p_nh3_bar: float, p_h2_bar: float, p_n2_bar: float,
             bed: CatalystBed) -> float:
        """
        Volumetric NH3 consumption rate, mol/(m3 catalyst s).

        R = k [(pNH3^2/pH2^3)^beta - pN2 Kp^2 (pH2^3/pNH3^2)^(1-beta)]
        with Kp the synthesis constant, so the rate vanishes when
        (1/Kp)^2 = pN2 pH2^3 / pNH3^2.
        """
        if min(p_nh3_bar, p_h2_bar, p_n2_bar) < 0.0:
            raise ArgumentError("Partial pressures must be non-negative", stage="adu")
        if temperature_k <= 0.0:
            raise ArgumentError(f"Temperature must be positive, got {temperature_k} K", stage="adu")
        p_nh3 = max(p_nh3_bar, PRESSURE_FLOOR_BAR)
        p_h2 = max(p_h2_bar, PRESSURE_FLOOR_BAR)
        p_n2 = max(p_n2_bar, PRESSURE_FLOOR_BAR)
        kp = ThermoService.equilibrium_constant(temperature_k)
        ratio = p_nh3 * p_nh3 / (p_h2 * p_h2 * p_h2)
        forward = ratio ** bed.beta
        reverse = p_n2 * kp * kp * (1.0 / ratio) ** (1.0 - bed.beta)
        return KineticsService.rate_constant(temperature_k, bed) * (forward - reverse)

    @staticmethod
    def equilibrium_conversion(temperature_k: float, pressure_kpa: float) -> float:
        """Equilibrium fraction decomposed for a pure NH3 feed"""
        kp = ThermoService.equilibrium_constant(temperature_k)
        p_bar = pressure_kpa / BAR_KPA
        # Kp = (1 - X^2) / (0.5^0.5 1.5^1.5 X^2 P)
        return 1.0 / math.sqrt(1.0 + math.sqrt(0.5) * 1.5 ** 1.5 * kp * p_bar)


def _pure_feed_rate(x: float, bed: CatalystBed) -> float:
    """Rate along a bed fed with pure NH3, as a function of conversion"""
    p_bar = bed.pressure_kpa / BAR_KPA
    total = 1.0 + x
    return KineticsService.rate(
        bed.temperature_k,
        p_bar * (1.0 - x) / total,
        p_bar * 1.5 * x / total,
        p_bar * 0.5 * x / total,
        bed,
    )


@dataclass(frozen=True)
class ConversionCharacteristic:
    """Pure-NH3 conversion against residence time tau = V_bed / V_feed (s)"""

    solution: object
    tau_end_s: float
    conversion_end: float
    equilibrium: float

    def conversion(self, tau_s: float) -> float:
        if tau_s <= 0.0:
            return 0.0
        if tau_s >= self.tau_end_s:
            conversion = self.conversion_end
        else:
            conversion = min(float(self.solution(tau_s)[0]), self.equilibrium)
        return self.equilibrium if conversion > self.equilibrium - EQUILIBRIUM_SNAP else conversion


@lru_cache(maxsize=32)
def _characteristic(kinetic_state) -> ConversionCharacteristic:
    temperature_k, pressure_kpa, activation, k0, beta = kinetic_state
    bed = CatalystBed(activation_energy_kj_mol=activation, pre_exponential=k0, beta=beta,
                      temperature_k=temperature_k, pressure_kpa=pressure_kpa)
    molar_volume = bed.molar_volume_m3()
    x_eq = KineticsService.equilibrium_conversion(temperature_k, pressure_kpa)

    def rhs(_tau, y):
        return [_pure_feed_rate(min(max(y[0], 0.0), x_eq), bed) * molar_volume]

    def near_equilibrium(_tau, y):
        return x_eq - y[0] - EQUILIBRIUM_APPROACH

    near_equilibrium.terminal = True
    tau_max = SECONDS_PER_HOUR / CHARACTERISTIC_MIN_GHSV_PER_H
    sol = solve_ivp(rhs, (0.0, tau_max), [0.0], method=INTEGRATOR_METHOD, dense_output=True,
                    events=near_equilibrium, rtol=CHARACTERISTIC_RTOL, atol=CHARACTERISTIC_ATOL)
    if sol.status == -1:
        raise NumericalError(f"Conversion characteristic failed: {sol.message}", stage="adu",
                             diagnostics={"nfev": sol.nfev, "kinetic_state": kinetic_state})
    tau_end = float(sol.t[-1])
    logger.debug(f"Conversion characteristic for {kinetic_state}: {sol.nfev} evaluations, tau_end={tau_end:.4g} s")
    return ConversionCharacteristic(solution=sol.sol, tau_end_s=tau_end,
                                    conversion_end=float(sol.y[0, -1]), equilibrium=x_eq)


class ReactorService:
    """Service for plug-flow reactor calculations"""

    @staticmethod
    def _check_inlet(inlet: GasStream, bed: CatalystBed) -> float:
        n_nh3 = inlet.flow(Species.NH3)
        if n_nh3 <= 0.0:
            raise ArgumentError("Reactor inlet needs a positive NH3 flow", stage="adu")
        if abs(inlet.temperature_k - bed.temperature_k) > 1e-9:
            raise ArgumentError(
                f"Inlet temperature {inlet.temperature_k} K differs from bed temperature "
                f"{bed.temperature_k} K", stage="adu")
        return n_nh3

    @staticmethod
    def inlet_equilibrium(inlet: GasStream, bed: CatalystBed) -> float:
        """Fraction of the inlet NH3 decomposed once the rate vanishes"""
        n_nh3 = inlet.flow(Species.NH3)
        if inlet.total_flow == n_nh3:
            return KineticsService.equilibrium_conversion(bed.temperature_k, bed.pressure_kpa)

        def rate(extent):
            p_nh3, p_h2, p_n2 = ReactorService._partial_pressures(inlet, bed, extent)
            return KineticsService.rate(bed.temperature_k, max(p_nh3, 0.0), p_h2, p_n2, bed)

        if rate(0.0) <= 0.0:
            return 0.0
        return brentq(rate, 0.0, n_nh3, xtol=1e-15, rtol=1e-13, maxiter=200) / n_nh3

    @staticmethod
    def _result(inlet: GasStream, bed: CatalystBed, extent: float,
                db: Optional[ThermoDb]) -> AduResult:
        n_nh3 = inlet.flow(Species.NH3)
        x_cap = ReactorService.inlet_equilibrium(inlet, bed)
        conversion = min(max(extent, 0.0) / n_nh3, x_cap)
        if conversion > x_cap - EQUILIBRIUM_SNAP:
            conversion = x_cap
        extent = conversion * n_nh3
        flows = dict(inlet.flows)
        for species, nu in STOICHIOMETRY.items():
            flows[species] = max(flows.get(species, 0.0) + nu * extent, 0.0)
        outlet = GasStream(flows, temperature_k=bed.temperature_k, pressure_kpa=bed.pressure_kpa)
        duty = n_nh3 * conversion * ThermoService.decomposition_enthalpy(bed.temperature_k, db) * 1000.0
        return AduResult(outlet=outlet, conversion=conversion, heat_duty_w=duty,
                         ghsv_per_h=bed.ghsv(n_nh3))

    @staticmethod
    def _partial_pressures(inlet: GasStream, bed: CatalystBed, extent: float) -> Tuple[float, float, float]:
        total = inlet.total_flow + MOLE_CHANGE * extent
        scale = bed.pressure_kpa / BAR_KPA / total
        return (
            (inlet.flow(Species.NH3) - extent) * scale,
            (inlet.flow(Species.H2) + 1.5 * extent) * scale,
            (inlet.flow(Species.N2) + 0.5 * extent) * scale,
        )

    @staticmethod
    def integrate_pfr(inlet: GasStream, bed: CatalystBed, db: Optional[ThermoDb] = None) -> AduResult:
        """
        Integrate the species balances dn_i/dz = nu_i R A over the bed length.
        The balances are integrated through the reaction extent so N and H atoms
        are conserved by construction.
        """
        n_nh3 = ReactorService._check_inlet(inlet, bed)

        def rhs(_z, y):
            extent = min(max(y[0], 0.0), n_nh3)
            p_nh3, p_h2, p_n2 = ReactorService._partial_pressures(inlet, bed, extent)
            return [KineticsService.rate(bed.temperature_k, max(p_nh3, 0.0), p_h2, p_n2, bed) * bed.area_m2]

        sol = solve_ivp(rhs, (0.0, bed.length_m), [0.0], method=INTEGRATOR_METHOD,
                        rtol=INTEGRATOR_RTOL, atol=INTEGRATOR_ATOL)
        if not sol.success:
            raise NumericalError(f"Plug-flow integration failed: {sol.message}", stage="adu",
                                 diagnostics={"nfev": sol.nfev, "z_reached": float(sol.t[-1])})
        return ReactorService._result(inlet, bed, float(sol.y[0, -1]), db)

    @staticmethod
    def integrate_pfr_fixed_step(inlet: GasStream, bed: CatalystBed, steps: int = ORACLE_STEPS,
                                 db: Optional[ThermoDb] = None) -> AduResult:
        """
        Classic RK4 with a fixed step count on the stretched coordinate
        z = L u^3, which packs steps at the inlet where the rate is steep.
        """
        n_nh3 = ReactorService._check_inlet(inlet, bed)
        length = bed.length_m

        def g(u, extent):
            extent = min(max(extent, 0.0), n_nh3)
            p_nh3, p_h2, p_n2 = ReactorService._partial_pressures(inlet, bed, extent)
            r = KineticsService.rate(bed.temperature_k, max(p_nh3, 0.0), p_h2, p_n2, bed)
            return r * bed.area_m2 * 3.0 * length * u * u

        h = 1.0 / steps
        extent = 0.0
        for k in range(steps):
            u = k * h
            k1 = g(u, extent)
            k2 = g(u + h / 2, extent + h / 2 * k1)
            k3 = g(u + h / 2, extent + h / 2 * k2)
            k4 = g(u + h, extent + h * k3)
            extent += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        return ReactorService._result(inlet, bed, extent, db)

    @staticmethod
    def pure_feed(nh3_feed_mol_s: float, bed: CatalystBed) -> GasStream:
        return GasStream({Species.NH3: nh3_feed_mol_s}, temperature_k=bed.temperature_k,
                         pressure_kpa=bed.pressure_kpa)

    @staticmethod
    def conversion_curve(bed: CatalystBed, ghsv_list: Iterable[float],
                         db: Optional[ThermoDb] = None) -> List[ConversionPoint]:
        """Conversion and hydrogen production of a pure NH3 feed per space velocity"""
        points = []
        for ghsv in ghsv_list:
            if ghsv <= 0.0:
                raise ArgumentError(f"GHSV must be positive, got {ghsv}", stage="adu")
            feed = bed.feed_for_ghsv(ghsv)
            result = ReactorService.integrate_pfr(ReactorService.pure_feed(feed, bed), bed, db)
            points.append(ConversionPoint(ghsv_per_h=float(ghsv), conversion=result.conversion,
                                          h2_rate_mol_s=result.outlet.flow(Species.H2),
                                          nh3_feed_mol_s=feed))
        return points

    @staticmethod
    def characteristic(bed: CatalystBed) -> ConversionCharacteristic:
        return _characteristic(bed.kinetic_state)

    @staticmethod
    def conversion_at_feed(nh3_feed_mol_s: float, bed: CatalystBed) -> float:
        """Conversion of a pure NH3 feed from the cached characteristic"""
        if nh3_feed_mol_s <= 0.0:
            return ReactorService.characteristic(bed).equilibrium
        tau = bed.volume_m3 / (nh3_feed_mol_s * bed.molar_volume_m3())
        return ReactorService.characteristic(bed).conversion(tau)

    @staticmethod
    def capacity(bed: CatalystBed) -> Tuple[float, float]:
        """(NH3 feed, H2 production) at the bed's capacity space velocity, mol/s"""
        feed = bed.feed_for_ghsv(bed.max_ghsv_per_h)
        return feed, 1.5 * feed * ReactorService.conversion_at_feed(feed, bed)

    @staticmethod
    def solve_feed_for_h2(h2_demand_mol_s: float, bed: CatalystBed) -> Tuple[float, float]:
        """Pure NH3 feed whose decomposition yields the demanded H2 flow: (feed, X)"""
        if h2_demand_mol_s < 0.0:
            raise ArgumentError(f"Negative hydrogen demand: {h2_demand_mol_s} mol/s", stage="adu")
        if h2_demand_mol_s == 0.0:
            return 0.0, ReactorService.characteristic(bed).equilibrium
        feed_max, capacity = ReactorService.capacity(bed)
        if h2_demand_mol_s > capacity:
            raise BedCapacityError(h2_demand_mol_s, capacity)

        def residual(feed):
            return 1.5 * feed * ReactorService.conversion_at_feed(feed, bed) - h2_demand_mol_s

        lower = h2_demand_mol_s / 1.5
        if residual(feed_max) == 0.0:
            feed = feed_max
        else:
            feed = brentq(residual, lower, feed_max, xtol=1e-15, rtol=1e-14, maxiter=200)
        return feed, h2_demand_mol_s / (1.5 * feed)

    @staticmethod
    def size_catalyst(max_h2_demand_mol_s: float, min_conversion: float,
                      bed_template: CatalystBed) -> float:
        """Smallest bed volume (fixed area) reaching min_conversion at the implied feed, m3"""
        if max_h2_demand_mol_s <= 0.0:
            raise ArgumentError("Hydrogen demand must be positive", stage="adu")
        x_eq = KineticsService.equilibrium_conversion(bed_template.temperature_k, bed_template.pressure_kpa)
        if not 0.0 < min_conversion < x_eq:
            raise ConversionUnreachableError(min_conversion, x_eq)
        feed = max_h2_demand_mol_s / (1.5 * min_conversion)

        def shortfall(length):
            bed = bed_template.with_length(length)
            inlet = ReactorService.pure_feed(feed, bed)
            return ReactorService.integrate_pfr(inlet, bed).conversion - min_conversion

        upper = bed_template.length_m
        while shortfall(upper) < 0.0:
            upper *= 2.0
        lower = upper / 2.0
        while lower > 1e-12 * upper and shortfall(lower) >= 0.0:
            lower /= 2.0
        length = bisect(shortfall, lower, upper, xtol=1e-13 * upper, rtol=1e-12, maxiter=200)
        volume = length * bed_template.area_m2
        logger.debug(f"Sized bed for {max_h2_demand_mol_s} mol/s H2 at X>={min_conversion}: {volume:.6g} m3")
        return volume
