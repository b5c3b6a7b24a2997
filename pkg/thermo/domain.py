"""
Domain types for thermodynamic properties
Heat-capacity polynomials, the property database and the gas stream carrier.
"""
from dataclasses import dataclass, field, replace
from types import MappingProxyType
from typing import Dict, Mapping, Optional, Tuple

from system.exceptions import ArgumentError, TemperatureRangeError, UnsupportedSpeciesError

from .constants import (
    ATOMS,
    CP_MAX_TEMPERATURE_K,
    CP_MIN_TEMPERATURE_K,
    DECOMPOSITION_ENTHALPY_KJ_MOL,
    GAS_CONSTANT,
    LATENT_HEAT_NH3_KJ_MOL,
    LHV_KJ_G,
    MOLAR_MASS,
    REFERENCE_PRESSURE_KPA,
    REFERENCE_TEMPERATURE_K,
    BAR_KPA,
    Species,
)


@dataclass(frozen=True)
class CpPolynomial:
    """NASA 7-coefficient fit for one species, two temperature ranges split at t_mid."""

    species: str
    low: Tuple[float, ...]
    high: Tuple[float, ...]
    t_mid: float = 1000.0
    t_min: float = CP_MIN_TEMPERATURE_K
    t_max: float = CP_MAX_TEMPERATURE_K

    def __post_init__(self):
        if len(self.low) != 7 or len(self.high) != 7:
            raise ArgumentError(f"{self.species}: NASA polynomials need 7 coefficients per range", stage="thermo")
        object.__setattr__(self, "low", tuple(float(c) for c in self.low))
        object.__setattr__(self, "high", tuple(float(c) for c in self.high))

    def _coefficients(self, temperature: float) -> Tuple[float, ...]:
        if not self.t_min <= temperature <= self.t_max:
            raise TemperatureRangeError(self.species, temperature, self.t_min, self.t_max)
        return self.low if temperature <= self.t_mid else self.high

    def cp(self, temperature: float) -> float:
        """Molar heat capacity, J/(mol K)"""
        a = self._coefficients(temperature)
        t = temperature
        return GAS_CONSTANT * (a[0] + t * (a[1] + t * (a[2] + t * (a[3] + t * a[4]))))

    def enthalpy(self, temperature: float) -> float:
        """Absolute molar enthalpy on the polynomial's own datum, J/mol"""
        a = self._coefficients(temperature)
        t = temperature
        poly = a[0] + t * (a[1] / 2 + t * (a[2] / 3 + t * (a[3] / 4 + t * a[4] / 5)))
        return GAS_CONSTANT * (poly * t + a[5])

    @classmethod
    def blend(cls, species: str, parts) -> "CpPolynomial":
        """Mole-fraction weighted mixture of polynomials sharing t_mid."""
        parts = list(parts)
        low = [sum(x * p.low[k] for x, p in parts) for k in range(7)]
        high = [sum(x * p.high[k] for x, p in parts) for k in range(7)]
        t_min = max(p.t_min for _, p in parts)
        t_max = min(p.t_max for _, p in parts)
        return cls(species=species, low=tuple(low), high=tuple(high),
                   t_mid=parts[0][1].t_mid, t_min=t_min, t_max=t_max)


@dataclass(frozen=True)
class ThermoDb:
    polynomials: Mapping[str, CpPolynomial]
    latent_heat_kj_mol: float = LATENT_HEAT_NH3_KJ_MOL
    reaction_enthalpy_kj_mol: float = DECOMPOSITION_ENTHALPY_KJ_MOL
    lhv_kj_g: Mapping[str, float] = field(default_factory=lambda: dict(LHV_KJ_G))
    reference_temperature_k: float = REFERENCE_TEMPERATURE_K
    reference_pressure_kpa: float = REFERENCE_PRESSURE_KPA

    def __post_init__(self):
        missing = [s for s in Species.ALL_SPECIES if s not in self.polynomials]
        if missing:
            raise UnsupportedSpeciesError(",".join(missing), "heat-capacity polynomial")
        object.__setattr__(self, "polynomials", MappingProxyType(dict(self.polynomials)))
        object.__setattr__(self, "lhv_kj_g", MappingProxyType(dict(self.lhv_kj_g)))

    def polynomial(self, species: str) -> CpPolynomial:
        try:
            return self.polynomials[species]
        except KeyError:
            raise UnsupportedSpeciesError(species, "heat-capacity polynomial")


@dataclass(frozen=True)
class GasStream:
    """Ideal-gas stream: molar flows (mol/s) per species, temperature (K), pressure (kPa)."""

    flows: Mapping[str, float]
    temperature_k: float = REFERENCE_TEMPERATURE_K
    pressure_kpa: float = REFERENCE_PRESSURE_KPA

    def __post_init__(self):
        clean: Dict[str, float] = {}
        for species, flow in self.flows.items():
            if species not in Species.ALL_SPECIES:
                raise UnsupportedSpeciesError(species, "stream flow")
            flow = float(flow)
            if flow < 0.0:
                raise ArgumentError(f"Negative flow of {species}: {flow} mol/s", stage="thermo")
            clean[species] = flow
        if self.temperature_k <= 0.0:
            raise ArgumentError(f"Stream temperature must be positive, got {self.temperature_k} K", stage="thermo")
        if self.pressure_kpa <= 0.0:
            raise ArgumentError(f"Stream pressure must be positive, got {self.pressure_kpa} kPa", stage="thermo")
        ordered = {s: clean[s] for s in Species.ALL_SPECIES if s in clean}
        object.__setattr__(self, "flows", ordered)

    def flow(self, species: str) -> float:
        return self.flows.get(species, 0.0)

    @property
    def total_flow(self) -> float:
        return sum(self.flows.values())

    def mole_fraction(self, species: str) -> float:
        total = self.total_flow
        return self.flow(species) / total if total > 0.0 else 0.0

    def partial_pressure_kpa(self, species: str) -> float:
        return self.pressure_kpa * self.mole_fraction(species)

    def partial_pressure_bar(self, species: str) -> float:
        return self.partial_pressure_kpa(species) / BAR_KPA

    def mass_flow_g_s(self, species: Optional[str] = None) -> float:
        if species is not None:
            return self.flow(species) * MOLAR_MASS[species]
        return sum(n * MOLAR_MASS[s] for s, n in self.flows.items())

    def atom_flows(self) -> Dict[str, float]:
        atoms: Dict[str, float] = {}
        for species, n in self.flows.items():
            for atom, count in ATOMS[species].items():
                atoms[atom] = atoms.get(atom, 0.0) + count * n
        return atoms

    def scaled(self, factor: float) -> "GasStream":
        return replace(self, flows={s: n * factor for s, n in self.flows.items()})

    def at(self, temperature_k: Optional[float] = None, pressure_kpa: Optional[float] = None) -> "GasStream":
        return replace(
            self,
            temperature_k=self.temperature_k if temperature_k is None else temperature_k,
            pressure_kpa=self.pressure_kpa if pressure_kpa is None else pressure_kpa,
        )
