"""
Repository layer for explore app
Writes result tables as CSV with a manifest recording the config fingerprint
and each file's column schema
"""
import logging
import os
from typing import Dict, List, Optional

import pandas as pd

from recovery.constants import Measure
from system.exceptions import ArgumentError
from system.repositories import OutputRepository

from .constants import column_units

logger = logging.getLogger(__name__)


class ResultRepository:
    """Repository for exploration outputs"""

    @staticmethod
    def manifest(command: str, fingerprint: str, tables: Dict[str, pd.DataFrame],
                 extra: Optional[Dict] = None) -> Dict:
        files = {
            f"{name}.csv": {"columns": list(frame.columns), "units": column_units(frame.columns)}
            for name, frame in tables.items()
        }
        manifest = {
            "command": command,
            "config_fingerprint": fingerprint,
            "measures": Measure.DESCRIPTIONS,
            "files": files,
        }
        manifest.update(extra or {})
        return manifest

    @staticmethod
    def write_tables(directory: str, command: str, fingerprint: str, tables: Dict[str, pd.DataFrame],
                     write_manifest: bool = True, extra: Optional[Dict] = None,
                     stem: Optional[str] = None) -> List[str]:
        """Write <name>.csv per table plus <stem or command>_manifest.json; returns the paths"""
        paths = []
        for name, frame in tables.items():
            path = os.path.join(directory, f"{name}.csv")
            paths.append(OutputRepository.write_csv(path, frame, column_units(frame.columns)))
        if write_manifest:
            manifest = ResultRepository.manifest(command, fingerprint, tables, extra)
            path = os.path.join(directory, f"{stem or command}_manifest.json")
            paths.append(OutputRepository.write_json(path, manifest))
        logger.info(f"✅ {command}: wrote {len(paths)} files to {directory}")
        return paths

    @staticmethod
    def read_trace(path: str) -> List[tuple]:
        """(time_s, power_kw) samples from a CSV with those two columns"""
        try:
            frame = OutputRepository.read_csv(path)
        except (OSError, ValueError) as e:
            raise ArgumentError(f"Cannot read trace {path}: {e}", stage="explore")
        missing = {"time_s", "power_kw"} - set(frame.columns)
        if missing:
            raise ArgumentError(f"Trace {path} lacks columns {sorted(missing)}", stage="explore")
        return list(zip(frame["time_s"].astype(float), frame["power_kw"].astype(float)))
