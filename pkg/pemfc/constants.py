"""
Constants for the PEM fuel cell stack
Shipped stack calibration: peak power near 255 kW, 69% efficiency at 20 kW.
"""


class StackDefaults:
    CELL_COUNT = 400
    CELL_AREA_CM2 = 1000.0
    TEMPERATURE_K = 353.15
    H2_PRESSURE_KPA = 150.0
    O2_PRESSURE_KPA = 30.0
    TRANSFER_COEFFICIENT = 0.535
    EXCHANGE_CURRENT_DENSITY = 1.3e-6  # A/cm2
    LIMITING_CURRENT_DENSITY = 1.02  # A/cm2
    MEMBRANE_THICKNESS_CM = 0.0125
    MEMBRANE_CONDUCTIVITY = 0.13  # 1/(ohm cm)
    MIN_POWER_KW = 1.0


# E0(T) = 1.229 - 8.5e-4 (T - 298.15), V
STANDARD_POTENTIAL_V = 1.229
STANDARD_POTENTIAL_SLOPE_V_K = 8.5e-4

# Electrons per H2
ELECTRONS_PER_H2 = 2
