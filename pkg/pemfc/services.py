"""
Service layer for pemfc app
Polarization curve, power inversion on the low-current branch, Faraday
hydrogen consumption and stack efficiency
"""
import logging
import math
from functools import lru_cache
from typing import Optional, Tuple

from scipy.optimize import brentq, minimize_scalar

from system.exceptions import ArgumentError, LimitingCurrentError, StackPowerError
from thermo.constants import FARADAY, GAS_CONSTANT, MOLAR_MASS, Species
from thermo.domain import ThermoDb
from thermo.services import ThermoService

from .constants import ELECTRONS_PER_H2
from .domain import FcOperatingPoint, FcStack

logger = logging.getLogger(__name__)


@lru_cache(maxsize=64)
def _peak(stack: FcStack) -> Tuple[float, float]:
    lower = stack.exchange_current_density
    upper = stack.limiting_current_density * (1.0 - 1e-9)
    found = minimize_scalar(lambda i: -FuelCellService.stack_power_kw(i, stack), bounds=(lower, upper),
                            method="bounded", options={"xatol": 1e-12, "maxiter": 500})
    i_peak = float(found.x)
    return i_peak, FuelCellService.stack_power_kw(i_peak, stack)


class FuelCellService:
    """Service for PEM stack calculations"""

    @staticmethod
    def _thermal_voltage(stack: FcStack) -> float:
        """RT/2F, V"""
        return GAS_CONSTANT * stack.temperature_k / (ELECTRONS_PER_H2 * FARADAY)

    @staticmethod
    def nernst(stack: FcStack) -> float:
        """Reversible cell voltage at the stack's reactant partial pressures, V"""
        if stack.h2_pressure_kpa <= 0.0 or stack.o2_pressure_kpa <= 0.0:
            raise ArgumentError("Reactant partial pressures must be positive", stage="pemfc")
        p0 = ThermoService.default_db().reference_pressure_kpa
        activity = (stack.h2_pressure_kpa / p0) * math.sqrt(stack.o2_pressure_kpa / p0)
        return stack.standard_potential_v + FuelCellService._thermal_voltage(stack) * math.log(activity)

    @staticmethod
    def activation_overpotential(i: float, stack: FcStack) -> float:
        if i <= stack.exchange_current_density:
            return 0.0
        b = FuelCellService._thermal_voltage(stack) / stack.transfer_coefficient
        return b * math.log(i / stack.exchange_current_density)

    @staticmethod
    def concentration_overpotential(i: float, stack: FcStack) -> float:
        i_l = stack.limiting_current_density
        return FuelCellService._thermal_voltage(stack) * math.log(i_l / (i_l - i))

    @staticmethod
    def ohmic_overpotential(i: float, stack: FcStack) -> float:
        return i * stack.membrane_thickness_cm / stack.membrane_conductivity

    @staticmethod
    def _check_current(i: float, stack: FcStack) -> None:
        if i <= 0.0:
            raise ArgumentError(f"Current density must be positive, got {i} A/cm2", stage="pemfc")
        if i >= stack.limiting_current_density:
            raise LimitingCurrentError(i, stack.limiting_current_density)

    @staticmethod
    def cell_voltage(i: float, stack: FcStack) -> float:
        FuelCellService._check_current(i, stack)
        return (FuelCellService.nernst(stack)
                - FuelCellService.activation_overpotential(i, stack)
                - FuelCellService.concentration_overpotential(i, stack)
                - FuelCellService.ohmic_overpotential(i, stack))

    @staticmethod
    def cell_voltage_slope(i: float, stack: FcStack) -> float:
        """dV/di, V cm2/A"""
        FuelCellService._check_current(i, stack)
        b = FuelCellService._thermal_voltage(stack)
        slope = -b / (stack.limiting_current_density - i) - stack.membrane_thickness_cm / stack.membrane_conductivity
        if i > stack.exchange_current_density:
            slope -= b / (stack.transfer_coefficient * i)
        return slope

    @staticmethod
    def stack_power_kw(i: float, stack: FcStack) -> float:
        return stack.cell_count * FuelCellService.cell_voltage(i, stack) * i * stack.cell_area_cm2 / 1000.0

    @staticmethod
    def peak_power(stack: FcStack) -> Tuple[float, float]:
        """(current density, power kW) at the top of the power curve"""
        return _peak(stack)

    @staticmethod
    def hydrogen_flow(i: float, stack: FcStack) -> float:
        """Faraday consumption of the whole stack, g/s"""
        if i < 0.0:
            raise ArgumentError(f"Current density must be non-negative, got {i} A/cm2", stage="pemfc")
        current = stack.cell_count * i * stack.cell_area_cm2
        return current * MOLAR_MASS[Species.H2] / (ELECTRONS_PER_H2 * FARADAY)

    @staticmethod
    def operating_point(i: float, stack: FcStack, db: Optional[ThermoDb] = None) -> FcOperatingPoint:
        voltage = FuelCellService.cell_voltage(i, stack)
        power = stack.cell_count * voltage * i * stack.cell_area_cm2 / 1000.0
        h2 = FuelCellService.hydrogen_flow(i, stack)
        fuel_kw = h2 * ThermoService.lhv(Species.H2, db)
        return FcOperatingPoint(
            current_density=i,
            cell_voltage_v=voltage,
            w_fc_kw=power,
            h2_g_s=h2,
            heat_kw=fuel_kw - power,
            efficiency=power / fuel_kw,
        )

    @staticmethod
    def solve_current_for_power(power_kw: float, stack: FcStack,
                                db: Optional[ThermoDb] = None) -> FcOperatingPoint:
        """Low-current-branch operating point delivering power_kw"""
        if power_kw <= 0.0:
            raise ArgumentError(f"Stack power must be positive, got {power_kw} kW", stage="pemfc")
        i_peak, p_max = FuelCellService.peak_power(stack)
        if power_kw > p_max:
            raise StackPowerError(power_kw, p_max)
        if power_kw == p_max:
            return FuelCellService.operating_point(i_peak, stack, db)

        def residual(i):
            return FuelCellService.stack_power_kw(i, stack) - power_kw

        i = brentq(residual, 1e-300, i_peak, xtol=1e-300, rtol=1e-14, maxiter=500)
        return FuelCellService.operating_point(i, stack, db)

    @staticmethod
    def efficiency(power_kw: float, stack: FcStack, db: Optional[ThermoDb] = None) -> float:
        return FuelCellService.solve_current_for_power(power_kw, stack, db).efficiency

    @staticmethod
    def rescaled(stack: FcStack, p_max_kw: float) -> FcStack:
        """Same cell physics, cell count scaled to a new peak power"""
        _, current = FuelCellService.peak_power(stack)
        cells = max(1, round(stack.cell_count * p_max_kw / current))
        logger.debug(f"Rescaled stack from {stack.cell_count} to {cells} cells for {p_max_kw} kW")
        return stack.with_cells(cells)
