"""
Constants for the ammonia-hydrogen engine and generator
Fuel blend, injection pressures and the shipped calibration tables.
"""

HYDROGEN_MOLE_RATIO = 0.2
MAX_THERMAL_EFFICIENCY = 0.425
NH3_INJECTION_PRESSURE_MPA = 0.6
H2_INJECTION_PRESSURE_MPA = 2.5
DEFAULT_EXCESS_AIR_RATIO = 1.0

# Exhaust temperature search window, K
EXHAUST_MIN_TEMPERATURE_K = 298.15
EXHAUST_MAX_TEMPERATURE_K = 1500.0


class EngineCalibration:
    """
    Combined ICE-generator map, generator output 5-230 kW.
    Peak 39.34% at 89.5 kW. Coolant and lubrication heat are fractions of
    fuel LHV; with stoichiometric air they put the exhaust near 860 K at
    the efficiency peak and 910 K at rated power.
    """
    POWER_KW = (5.0, 15.0, 30.0, 50.0, 70.0, 89.5, 110.0, 130.0, 150.0, 170.0, 190.0, 210.0, 230.0)
    EFFICIENCY = (0.200, 0.285, 0.345, 0.375, 0.389, 0.3934, 0.3925, 0.383, 0.364, 0.346, 0.328, 0.311, 0.293)
    COOLANT_FRACTION = (0.470, 0.400, 0.340, 0.300, 0.285, 0.280, 0.286, 0.295, 0.305, 0.316, 0.327, 0.339, 0.350)
    LUBRICATION_FRACTION = (0.160, 0.110, 0.080, 0.070, 0.065, 0.060, 0.060, 0.060, 0.061, 0.062, 0.063, 0.064, 0.065)
