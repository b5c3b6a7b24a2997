"""
Constants for the ammonia decomposition unit
Kinetic parameters, default bed geometry and integrator settings.
"""
from thermo.constants import Species

# NH3 -> 1.5 H2 + 0.5 N2
STOICHIOMETRY = {
    Species.NH3: -1.0,
    Species.H2: 1.5,
    Species.N2: 0.5,
}
MOLE_CHANGE = sum(STOICHIOMETRY.values())


# Temkin-Pyzhev kinetics of the shipped catalyst
class KineticDefaults:
    ACTIVATION_ENERGY_KJ_MOL = 117.0
    PRE_EXPONENTIAL = 1.5e7  # mol/(L catalyst s), pressures in bar
    BETA = 0.27


# k0 is quoted per litre of catalyst; rates are reported per m3
PRE_EXPONENTIAL_VOLUME_FACTOR = 1.0e3

# Partial pressures are floored inside the rate law, bar
PRESSURE_FLOOR_BAR = 1e-6


class BedDefaults:
    AREA_M2 = 0.05
    LENGTH_M = 0.4
    TEMPERATURE_K = 723.15
    PRESSURE_KPA = 100.0
    # Shell loss of the heated unit, charged whenever it runs
    HEAT_LOSS_KW = 0.78
    # Capacity is quoted at this space velocity
    MAX_GHSV_PER_H = 50000.0


# Integrators
INTEGRATOR_METHOD = "DOP853"
INTEGRATOR_RTOL = 1e-10
INTEGRATOR_ATOL = 1e-10  # mol/s of NH3 decomposed
CHARACTERISTIC_RTOL = 1e-11
CHARACTERISTIC_ATOL = 1e-13
CHARACTERISTIC_MIN_GHSV_PER_H = 1.0
# Characteristic stops once this close to equilibrium conversion
EQUILIBRIUM_APPROACH = 1e-10
# Conversions this close to equilibrium report equilibrium
EQUILIBRIUM_SNAP = 1e-8
ORACLE_STEPS = 100_000

SECONDS_PER_HOUR = 3600.0
