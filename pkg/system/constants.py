"""
Constants for power-system assembly
Topologies, auxiliary-load defaults and composite sizing defaults.
"""


class Topology:
    ICE_HYBRID = 'ice_hybrid'
    FC_HYBRID = 'fc_hybrid'
    COMPOSITE = 'composite'

    ALL_TOPOLOGIES = [ICE_HYBRID, FC_HYBRID, COMPOSITE]
    WITH_ENGINE = [ICE_HYBRID, COMPOSITE]
    WITH_STACK = [FC_HYBRID, COMPOSITE]

    CHOICES = [
        (ICE_HYBRID, 'ICE hybrid'),
        (FC_HYBRID, 'Fuel cell hybrid'),
        (COMPOSITE, 'ICE and fuel cell composite'),
    ]


class SystemDefaults:
    TOPOLOGY = Topology.ICE_HYBRID
    MEASURE = 'IV'
    TANK_TEMPERATURE_K = 293.15
    TANK_PRESSURE_KPA = 860.0
    PUMP_EFFICIENCY = 0.80
    COMPRESSOR_EFFICIENCY = 0.80
    COMPRESSOR_PRESSURE_RATIO = 2.0
    CATHODE_STOICHIOMETRY = 2.0
    NH3_LIQUID_DENSITY_KG_M3 = 600.0
    AIR_CP_KJ_KG_K = 1.005
    AIR_GAMMA = 1.4
    AIR_INLET_TEMPERATURE_K = 298.15


class CompositeDefaults:
    R_ICE = 0.5
    # rated power of the ICE hybrid's engine
    TOTAL_RATED_KW = 230.0


# Energy ledger closure tolerance, relative to fuel LHV input
LEDGER_CLOSURE_RTOL = 1e-6

# Negative direct NH3 within this of zero is rounding, mol/s
DIRECT_NH3_TOLERANCE_MOL_S = 1e-12

CACHE_PREFIX = 'ammoniapower'
