"""
Constants for design exploration
Grid spacing, scan resolution, figure ladders and the r_ICE sweep.
"""


class ExploreDefaults:
    # 2-D composite grid spacing on both axes, kW
    GRID_STEP_KW = 2.0
    # 1-D scan spacing for single-engine topologies, kW
    SCAN_STEP_KW = 0.5
    # spacing of W_sys targets on optimal curves, kW
    CURVE_STEP_KW = 5.0
    GHSV_MIN_PER_H = 1000.0
    GHSV_MAX_PER_H = 100000.0
    GHSV_POINTS = 30
    R_VALUES = [0.1, 0.2, 0.25, 0.3, 0.4, 0.5, 0.6, 0.7, 0.75, 0.8, 0.9]
    REFINE = False


class Figure:
    CONVERSION = 'fig6'
    ICE_HYBRID = 'fig8'
    FC_HYBRID = 'fig9'
    COMPOSITE_MAPS = 'fig10'
    OPTIMAL_CURVES = 'fig11'
    COMPARISON = 'fig12'
    ENERGY_LEDGERS = 'fig13'
    SIZING = 'fig14'
    LOAD_FACTOR = 'fig15'

    ALL_FIGURES = [CONVERSION, ICE_HYBRID, FC_HYBRID, COMPOSITE_MAPS, OPTIMAL_CURVES, COMPARISON,
                   ENERGY_LEDGERS, SIZING, LOAD_FACTOR]


MAP_COLUMNS = ['w_gen_kw', 'w_fc_kw', 'w_sys_kw', 'eta_sys', 'mask']

# Iso-power band is this fraction of a grid cell either side of the target
ISO_POWER_HALF_WIDTH = 0.5

SIZING_LABEL = 'engine curve similar in P/P_max; stack rescaled by cell count'

# Mask value of a feasible grid point; infeasible points carry the error code
FEASIBLE = 'ok'

# Rescale factors (new rated power / calibrated rated power) the curves are trusted over
RESCALE_VALIDITY = (0.25, 2.0)


class Units:
    KW = 'kW'
    FRACTION = '-'
    PER_HOUR = '1/h'
    MOL_S = 'mol/s'
    KELVIN = 'K'
    SECONDS = 's'
    KJ = 'kJ'
    TEXT = 'text'


COLUMN_UNITS = {
    'ghsv_per_h': Units.PER_HOUR,
    'conversion': Units.FRACTION,
    'h2_rate_mol_s': Units.MOL_S,
    'nh3_feed_mol_s': Units.MOL_S,
    'measure': Units.TEXT,
    'topology': Units.TEXT,
    'point': Units.TEXT,
    'mask': Units.TEXT,
    'warnings': Units.TEXT,
    'label': Units.TEXT,
    'clipped': Units.TEXT,
    'exhaust_temperature_k': Units.KELVIN,
    'time_s': Units.SECONDS,
    'duration_s': Units.SECONDS,
    'energy_in_kj': Units.KJ,
    'energy_out_kj': Units.KJ,
}


def column_units(columns):
    """Unit of each column: explicit entries, then *_kw as kW, else dimensionless"""
    return {c: COLUMN_UNITS.get(c, Units.KW if c.endswith('_kw') else Units.FRACTION) for c in columns}
