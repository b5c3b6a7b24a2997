"""
Constants for residual-heat recovery
"""


class Measure:
    NONE = 'I'
    LOW_TEMPERATURE = 'II'
    HIGH_TEMPERATURE = 'III'
    BOTH = 'IV'

    ALL_MEASURES = [NONE, LOW_TEMPERATURE, HIGH_TEMPERATURE, BOTH]

    DESCRIPTIONS = {
        NONE: 'No residual heat recovered',
        LOW_TEMPERATURE: 'Low-temperature heat to NH3 preheating',
        HIGH_TEMPERATURE: 'High-temperature heat to NH3 decomposition',
        BOTH: 'High-temperature heat to decomposition, surplus and low-temperature heat to preheating',
    }

    CHOICES = [(m, f'{m}: {d}') for m, d in DESCRIPTIONS.items()]


# ADU and HSU product gases are cooled to this before the engine or stack
PRODUCT_DELIVERY_TEMPERATURE_K = 353.15

INCLUDE_LOW_GRADE_EXHAUST = False
