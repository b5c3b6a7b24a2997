"""
Constants for thermodynamic properties
Species identifiers, molar masses, atom contents and reference-state values.
"""
from scipy import constants as sc

# Species
class Species:
    NH3 = "NH3"
    H2 = "H2"
    N2 = "N2"
    O2 = "O2"
    H2O = "H2O"
    AIR = "AIR"

    ALL_SPECIES = [NH3, H2, N2, O2, H2O, AIR]

    FUELS = [NH3, H2]

    CHOICES = [
        (NH3, "Ammonia"),
        (H2, "Hydrogen"),
        (N2, "Nitrogen"),
        (O2, "Oxygen"),
        (H2O, "Water vapour"),
        (AIR, "Air (21% O2, 79% N2)"),
    ]


# Air pseudo-species, molar basis
AIR_O2_FRACTION = 0.21
AIR_N2_FRACTION = 0.79
N2_PER_O2_IN_AIR = AIR_N2_FRACTION / AIR_O2_FRACTION

# g/mol
MOLAR_MASS = {
    Species.NH3: 17.031,
    Species.H2: 2.016,
    Species.N2: 28.014,
    Species.O2: 31.998,
    Species.H2O: 18.015,
    Species.AIR: AIR_O2_FRACTION * 31.998 + AIR_N2_FRACTION * 28.014,
}

ATOMS = {
    Species.NH3: {"N": 1.0, "H": 3.0},
    Species.H2: {"H": 2.0},
    Species.N2: {"N": 2.0},
    Species.O2: {"O": 2.0},
    Species.H2O: {"H": 2.0, "O": 1.0},
    Species.AIR: {"O": 2.0 * AIR_O2_FRACTION, "N": 2.0 * AIR_N2_FRACTION},
}

# Reference state
REFERENCE_TEMPERATURE_K = 298.15
REFERENCE_PRESSURE_KPA = 101.325
BAR_KPA = 100.0
ATM_BAR = 1.01325

# Heat-capacity fits are trusted only inside this window
CP_MIN_TEMPERATURE_K = 250.0
CP_MAX_TEMPERATURE_K = 1500.0

# Energy constants (kJ/mol, kJ/g)
LATENT_HEAT_NH3_KJ_MOL = 23.3
DECOMPOSITION_ENTHALPY_KJ_MOL = 46.1
LHV_KJ_G = {
    Species.NH3: 18.6,
    Species.H2: 120.0,
}

# Synthesis equilibrium correlation validity
EQUILIBRIUM_MIN_TEMPERATURE_K = 400.0
EQUILIBRIUM_MAX_TEMPERATURE_K = 1200.0

GAS_CONSTANT = sc.R  # J/(mol K)
FARADAY = sc.physical_constants["Faraday constant"][0]  # C/mol

# Hydrogen carried by one mole of ammonia with integer atomic masses, g
NOMINAL_H2_PER_NH3_G = 3.0
