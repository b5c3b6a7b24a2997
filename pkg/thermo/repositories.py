"""
Repository layer for thermodynamic property data
Loads heat-capacity fits from YAML property files
"""
import logging
import os
from typing import Dict, Optional

import yaml

from system.exceptions import ConfigurationError

from .constants import AIR_N2_FRACTION, AIR_O2_FRACTION, Species
from .domain import CpPolynomial

logger = logging.getLogger(__name__)

DEFAULT_PROPERTY_FILE = os.path.join(os.path.dirname(os.path.abspath(__file__)), "data", "nasa7.yaml")


class PropertyRepository:
    """Repository for heat-capacity polynomial data"""

    @staticmethod
    def load_polynomials(path: Optional[str] = None) -> Dict[str, CpPolynomial]:
        """Read a property file; AIR is blended from O2/N2 when not listed"""
        path = path or DEFAULT_PROPERTY_FILE
        try:
            with open(path, "r", encoding="utf-8") as handle:
                data = yaml.safe_load(handle) or {}
        except OSError as e:
            raise ConfigurationError(f"Cannot read property file {path}: {e}")
        except yaml.YAMLError as e:
            raise ConfigurationError(f"Cannot parse property file {path}: {e}")

        t_min = float(data.get("t_min", 250.0))
        t_max = float(data.get("t_max", 1500.0))
        polynomials = {}
        for species, entry in (data.get("species") or {}).items():
            if species not in Species.ALL_SPECIES:
                raise ConfigurationError(f"Property file {path}: unknown species {species}")
            try:
                polynomials[species] = CpPolynomial(
                    species=species,
                    low=tuple(entry["low"]),
                    high=tuple(entry["high"]),
                    t_mid=float(entry.get("t_mid", 1000.0)),
                    t_min=float(entry.get("t_min", t_min)),
                    t_max=float(entry.get("t_max", t_max)),
                )
            except (KeyError, TypeError) as e:
                raise ConfigurationError(f"Property file {path}: bad entry for {species}: {e}")

        if Species.AIR not in polynomials and {Species.O2, Species.N2} <= set(polynomials):
            polynomials[Species.AIR] = CpPolynomial.blend(
                Species.AIR,
                [(AIR_O2_FRACTION, polynomials[Species.O2]), (AIR_N2_FRACTION, polynomials[Species.N2])],
            )
        logger.debug(f"Loaded {len(polynomials)} heat-capacity fits from {path}")
        return polynomials
