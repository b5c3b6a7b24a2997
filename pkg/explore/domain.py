"""
Domain types for design exploration
Efficiency maps over the (W_gen, W_fc) grid, optimal power-distribution curves,
per-measure extremes, sizing-sweep rows and power-trace results.
"""
from dataclasses import asdict, dataclass
from typing import Optional, Tuple

import numpy as np
import pandas as pd

from .constants import FEASIBLE, MAP_COLUMNS


@dataclass(frozen=True, eq=False)
class EfficiencyMap:
    """
    W_sys and eta_sys on a (W_gen, W_fc) grid for one measure. Matrices are
    indexed [w_gen, w_fc]; masked points hold NaN and their mask holds the
    code of the error that made them infeasible.
    """

    topology: str
    measure: str
    fingerprint: str
    step_kw: float
    w_gen_kw: np.ndarray
    w_fc_kw: np.ndarray
    w_sys_kw: np.ndarray
    eta_sys: np.ndarray
    mask: np.ndarray

    def __post_init__(self):
        shape = (len(self.w_gen_kw), len(self.w_fc_kw))
        for name in ("w_sys_kw", "eta_sys", "mask"):
            if getattr(self, name).shape != shape:
                raise ValueError(f"{name} has shape {getattr(self, name).shape}, grid is {shape}")

    @property
    def feasible(self) -> np.ndarray:
        return self.mask == FEASIBLE

    @property
    def shape(self) -> Tuple[int, int]:
        return self.w_sys_kw.shape

    def best(self, key: np.ndarray, where: Optional[np.ndarray] = None) -> Optional[Tuple[int, int]]:
        """Grid index maximizing key over feasible points; ties go to the larger W_fc"""
        candidates = self.feasible if where is None else self.feasible & where
        if not candidates.any():
            return None
        best = None
        for i, j in zip(*np.nonzero(candidates)):
            rank = (key[i, j], self.w_fc_kw[j])
            if best is None or rank > best[0]:
                best = (rank, (int(i), int(j)))
        return best[1]

    @property
    def max_eta_index(self) -> Optional[Tuple[int, int]]:
        return self.best(self.eta_sys)

    @property
    def max_power_index(self) -> Optional[Tuple[int, int]]:
        return self.best(self.w_sys_kw)

    @property
    def max_w_sys_kw(self) -> float:
        index = self.max_power_index
        return float(self.w_sys_kw[index]) if index is not None else 0.0

    def to_frame(self) -> pd.DataFrame:
        gen, fc = np.meshgrid(self.w_gen_kw, self.w_fc_kw, indexing="ij")
        return pd.DataFrame({
            "w_gen_kw": gen.ravel(),
            "w_fc_kw": fc.ravel(),
            "w_sys_kw": self.w_sys_kw.ravel(),
            "eta_sys": self.eta_sys.ravel(),
            "mask": self.mask.ravel(),
        }, columns=MAP_COLUMNS)


@dataclass(frozen=True)
class CurvePoint:
    target_kw: float
    w_gen_kw: float
    w_fc_kw: float
    w_sys_kw: float
    eta_sys: float

    @property
    def fc_share(self) -> float:
        total = self.w_gen_kw + self.w_fc_kw
        return self.w_fc_kw / total if total > 0.0 else 0.0


@dataclass(frozen=True)
class OptimalCurve:
    """Best split of each W_sys target, sorted by target"""

    topology: str
    measure: str
    fingerprint: str
    points: Tuple[CurvePoint, ...]
    refined: bool = False

    def __post_init__(self):
        targets = [p.target_kw for p in self.points]
        if targets != sorted(targets):
            raise ValueError("Curve points must be sorted by W_sys target")

    @property
    def max_w_sys_kw(self) -> float:
        return max((p.w_sys_kw for p in self.points), default=0.0)

    def to_frame(self) -> pd.DataFrame:
        rows = [dict(asdict(p), fc_share=p.fc_share) for p in self.points]
        return pd.DataFrame(rows, columns=["target_kw", "w_gen_kw", "w_fc_kw", "w_sys_kw", "eta_sys", "fc_share"])


@dataclass(frozen=True)
class MeasureExtremes:
    measure: str
    max_eta_sys: float
    w_sys_at_max_eta_kw: float
    w_gen_at_max_eta_kw: float
    w_fc_at_max_eta_kw: float
    max_w_sys_kw: float
    eta_at_max_w_sys: float
    w_gen_at_max_w_sys_kw: float
    w_fc_at_max_w_sys_kw: float

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class SizingSweepRow:
    r_ice: float
    total_rated_kw: float
    max_eta_sys: float
    w_sys_at_max_eta_kw: float
    max_w_sys_kw: float
    eta_at_max_w_sys: float
    warnings: Tuple[str, ...]
    label: str

    def __post_init__(self):
        if not 0.0 < self.r_ice < 1.0:
            raise ValueError(f"r_ice {self.r_ice} outside (0, 1)")

    @property
    def load_factor(self) -> float:
        return self.w_sys_at_max_eta_kw / self.max_w_sys_kw if self.max_w_sys_kw > 0.0 else 0.0

    def as_dict(self) -> dict:
        data = asdict(self)
        data.update(load_factor=self.load_factor, warnings=";".join(self.warnings))
        return data


@dataclass(frozen=True)
class TraceStep:
    time_s: float
    duration_s: float
    demand_kw: float
    served_kw: float
    w_gen_kw: float
    w_fc_kw: float
    eta_sys: float
    clipped: bool

    @property
    def energy_out_kj(self) -> float:
        return self.served_kw * self.duration_s

    @property
    def energy_in_kj(self) -> float:
        return self.energy_out_kj / self.eta_sys if self.served_kw > 0.0 else 0.0


@dataclass(frozen=True)
class TraceResult:
    measure: str
    steps: Tuple[TraceStep, ...]

    @property
    def energy_out_kj(self) -> float:
        return sum(step.energy_out_kj for step in self.steps)

    @property
    def energy_in_kj(self) -> float:
        return sum(step.energy_in_kj for step in self.steps)

    @property
    def mean_eta_sys(self) -> float:
        energy_in = self.energy_in_kj
        return self.energy_out_kj / energy_in if energy_in > 0.0 else 0.0

    @property
    def clipped_count(self) -> int:
        return sum(step.clipped for step in self.steps)

    def to_frame(self) -> pd.DataFrame:
        rows = [dict(asdict(s), energy_out_kj=s.energy_out_kj, energy_in_kj=s.energy_in_kj) for s in self.steps]
        return pd.DataFrame(rows, columns=["time_s", "duration_s", "demand_kw", "served_kw", "w_gen_kw", "w_fc_kw",
                                           "eta_sys", "clipped", "energy_out_kj", "energy_in_kj"])

    def summary(self) -> dict:
        return {
            "measure": self.measure,
            "steps": len(self.steps),
            "energy_in_kj": self.energy_in_kj,
            "energy_out_kj": self.energy_out_kj,
            "mean_eta_sys": self.mean_eta_sys,
            "clipped_steps": self.clipped_count,
        }
