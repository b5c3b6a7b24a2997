"""
Repository layer for system app
Reads run config files and writes result files atomically
"""
import json
import logging
import os
import tempfile
from typing import Dict, Optional

import pandas as pd
import yaml
from django.conf import settings

from .exceptions import ConfigParseError, ConfigurationError

logger = logging.getLogger(__name__)

CSV_FLOAT_FORMAT = "%.10g"


class ConfigRepository:
    """Repository for YAML run configs"""

    @staticmethod
    def default_path() -> str:
        return settings.AMMONIAPOWER_DEFAULT_CONFIG

    @staticmethod
    def read(path: Optional[str] = None) -> Dict:
        path = path or ConfigRepository.default_path()
        try:
            with open(path, "r", encoding="utf-8") as handle:
                data = yaml.safe_load(handle)
        except OSError as e:
            raise ConfigurationError(f"Cannot read config {path}: {e.strerror}")
        except yaml.MarkedYAMLError as e:
            mark = e.problem_mark
            raise ConfigParseError(path, mark.line + 1 if mark else None, mark.column + 1 if mark else None,
                                   e.problem)
        except yaml.YAMLError as e:
            raise ConfigParseError(path, problem=str(e))
        if data is None:
            logger.info(f"Config {path} is empty, using defaults throughout")
            return {}
        if not isinstance(data, dict):
            raise ConfigParseError(path, problem="top level must be a mapping of sections")
        return data


class OutputRepository:
    """Repository for CSV, JSON and manifest output files"""

    @staticmethod
    def output_dir(configured: Optional[str] = None) -> str:
        """Env override first, then the config's output.directory, then the project default"""
        directory = os.environ.get("AMMONIAPOWER_OUTPUT_DIR") or configured or settings.AMMONIAPOWER_OUTPUT_DIR
        os.makedirs(directory, exist_ok=True)
        return directory

    @staticmethod
    def _atomic_write(path: str, text: str) -> str:
        directory = os.path.dirname(os.path.abspath(path))
        os.makedirs(directory, exist_ok=True)
        fd, tmp = tempfile.mkstemp(prefix=".tmp-", dir=directory)
        try:
            with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
                handle.write(text)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
        logger.debug(f"Wrote {path}")
        return path

    @staticmethod
    def write_csv(path: str, frame: pd.DataFrame, units: Dict[str, str]) -> str:
        """CSV with a leading '# units:' comment line"""
        comment = "# units: " + ", ".join(f"{column}={units.get(column, '-')}" for column in frame.columns)
        body = frame.to_csv(index=False, float_format=CSV_FLOAT_FORMAT, lineterminator="\n")
        return OutputRepository._atomic_write(path, comment + "\n" + body)

    @staticmethod
    def read_csv(path: str) -> pd.DataFrame:
        return pd.read_csv(path, comment="#", keep_default_na=False, na_values=[""])

    @staticmethod
    def write_json(path: str, payload) -> str:
        return OutputRepository._atomic_write(path, json.dumps(payload, indent=2, sort_keys=True) + "\n")
