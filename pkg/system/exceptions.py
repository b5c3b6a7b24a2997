"""
Custom exceptions for the ammonia power-system toolkit
Every error keeps its inputs as attributes; CLI exit codes follow the family.
"""


class AmmoniaPowerError(Exception):
    """Base exception for toolkit operations"""
    exit_code = 1
    code = "error"
    stage = None

    def as_dict(self):
        return {
            "type": type(self).__name__,
            "message": str(self),
            "stage": self.stage,
            "code": self.code,
        }


# Configuration errors (exit code 2)

class ConfigurationError(AmmoniaPowerError):
    """Raised when a run config or calibration cannot be used"""
    exit_code = 2
    code = "config"

    def __init__(self, message, errors=None):
        self.errors = errors or {}
        super().__init__(message)


class ConfigSchemaError(ConfigurationError):
    """Raised when a config file violates the schema"""
    def __init__(self, errors):
        lines = [f"{key}: {message}" for key, message in sorted(errors.items())]
        super().__init__("Invalid configuration: " + "; ".join(lines), errors)


class ConfigParseError(ConfigurationError):
    """Raised when a config file is not valid YAML"""
    def __init__(self, path, line=None, column=None, problem=None):
        self.path = path
        self.line = line
        self.column = column
        location = f" at line {line}, column {column}" if line is not None else ""
        super().__init__(f"Cannot parse config {path}{location}: {problem}")


class CalibrationError(ConfigurationError):
    """Raised when calibration data is internally inconsistent"""
    code = "calibration"

    def __init__(self, message, stage=None):
        self.stage = stage
        super().__init__(message)


class BedDimensionError(ConfigurationError):
    """Raised when a catalyst bed has non-positive geometry"""
    stage = "adu"

    def __init__(self, area_m2, length_m):
        self.area_m2 = area_m2
        self.length_m = length_m
        super().__init__(f"Catalyst bed needs positive dimensions (A={area_m2} m2, L={length_m} m)")


# Argument errors (exit code 1)

class ArgumentError(AmmoniaPowerError, ValueError):
    """Raised when an operation receives an invalid argument"""
    code = "argument"

    def __init__(self, message, stage=None):
        self.stage = stage
        super().__init__(message)


class TemperatureRangeError(ArgumentError):
    """Raised when a property is evaluated outside its valid temperature range"""
    code = "temperature_range"

    def __init__(self, species, temperature, t_min, t_max):
        self.species = species
        self.temperature = temperature
        self.t_min = t_min
        self.t_max = t_max
        super().__init__(
            f"Temperature {temperature:.2f} K outside the valid range of {species} "
            f"({t_min:.2f}-{t_max:.2f} K)",
            stage="thermo",
        )


class UnsupportedSpeciesError(ArgumentError):
    """Raised when a species has no data for the requested property"""
    code = "unsupported_species"

    def __init__(self, species, prop):
        self.species = species
        self.prop = prop
        super().__init__(f"No {prop} for species {species}", stage="thermo")


class RichMixtureError(ArgumentError):
    """Raised when combustion is requested below stoichiometric air"""
    code = "rich_mixture"

    def __init__(self, excess_air_ratio):
        self.excess_air_ratio = excess_air_ratio
        super().__init__(
            f"Excess air ratio {excess_air_ratio} < 1: rich combustion is not supported",
            stage="ice_gen",
        )


class LimitingCurrentError(ArgumentError):
    """Raised when a fuel cell current density reaches the limiting current"""
    code = "limiting_current"

    def __init__(self, current_density, limiting_current_density):
        self.current_density = current_density
        self.limiting_current_density = limiting_current_density
        super().__init__(
            f"Current density {current_density} A/cm2 at or above the limiting "
            f"current {limiting_current_density} A/cm2",
            stage="pemfc",
        )


class TopologyMismatchError(ArgumentError):
    """Raised when power targets do not fit the configured topology"""
    code = "topology"

    def __init__(self, topology, w_gen_kw, w_fc_kw):
        self.topology = topology
        self.w_gen_kw = w_gen_kw
        self.w_fc_kw = w_fc_kw
        super().__init__(
            f"Targets W_gen={w_gen_kw} kW, W_fc={w_fc_kw} kW are not valid for topology {topology}",
            stage="system",
        )


# Infeasible operations (exit code 1)

class InfeasibleOperationError(AmmoniaPowerError):
    """Raised when a requested operating point cannot be reached"""
    code = "infeasible"

    def __init__(self, message, stage=None):
        self.stage = stage
        super().__init__(message)


class EnvelopeError(InfeasibleOperationError):
    """Raised when an engine power is outside its calibrated envelope"""
    code = "envelope"

    def __init__(self, power_kw, p_min_kw, p_max_kw, stage="ice_gen"):
        self.power_kw = power_kw
        self.p_min_kw = p_min_kw
        self.p_max_kw = p_max_kw
        super().__init__(
            f"Power {power_kw} kW outside the envelope [{p_min_kw}, {p_max_kw}] kW",
            stage=stage,
        )


class StackPowerError(InfeasibleOperationError):
    """Raised when a fuel cell power exceeds the stack maximum"""
    code = "stack_power"

    def __init__(self, power_kw, p_max_kw):
        self.power_kw = power_kw
        self.p_max_kw = p_max_kw
        super().__init__(
            f"Stack power {power_kw} kW above the stack maximum {p_max_kw:.3f} kW",
            stage="pemfc",
        )


class BedCapacityError(InfeasibleOperationError):
    """Raised when a hydrogen demand exceeds the catalyst bed capacity"""
    code = "bed_capacity"

    def __init__(self, h2_demand_mol_s, capacity_mol_s):
        self.h2_demand_mol_s = h2_demand_mol_s
        self.capacity_mol_s = capacity_mol_s
        super().__init__(
            f"Hydrogen demand {h2_demand_mol_s:.6g} mol/s above the bed capacity "
            f"{capacity_mol_s:.6g} mol/s",
            stage="adu",
        )


class ConversionUnreachableError(InfeasibleOperationError):
    """Raised when a conversion target is at or above the equilibrium bound"""
    code = "conversion_unreachable"

    def __init__(self, min_conversion, equilibrium_conversion):
        self.min_conversion = min_conversion
        self.equilibrium_conversion = equilibrium_conversion
        super().__init__(
            f"Conversion {min_conversion} unreachable: equilibrium bound is "
            f"{equilibrium_conversion:.6f}",
            stage="adu",
        )


class SlipExceedsDemandError(InfeasibleOperationError):
    """Raised when unconverted ammonia reaching the engine exceeds its ammonia demand"""
    code = "slip_exceeds_demand"

    def __init__(self, slip_mol_s, nh3_demand_mol_s, conversion):
        self.slip_mol_s = slip_mol_s
        self.nh3_demand_mol_s = nh3_demand_mol_s
        self.conversion = conversion
        super().__init__(
            f"ADU slip {slip_mol_s:.6g} mol/s exceeds the engine NH3 demand "
            f"{nh3_demand_mol_s:.6g} mol/s (conversion bottleneck X={conversion:.4f})",
            stage="material_balance",
        )


class UnreachableTargetError(InfeasibleOperationError):
    """Raised when a system power target lies beyond an efficiency map"""
    code = "unreachable_target"

    def __init__(self, target_kw, max_w_sys_kw):
        self.target_kw = target_kw
        self.max_w_sys_kw = max_w_sys_kw
        super().__init__(
            f"Target {target_kw} kW unreachable; map maximum W_sys is {max_w_sys_kw:.3f} kW",
            stage="explore",
        )


# Numerical errors (exit code 1)

class NumericalError(AmmoniaPowerError):
    """Raised when an integrator or root solver fails"""
    code = "numerical"

    def __init__(self, message, stage=None, diagnostics=None):
        self.stage = stage
        self.diagnostics = diagnostics or {}
        super().__init__(message)
