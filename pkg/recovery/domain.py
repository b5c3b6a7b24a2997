"""
Domain types for residual-heat bookkeeping
"""
from dataclasses import asdict, dataclass

from system.exceptions import ArgumentError


@dataclass(frozen=True)
class HeatPools:
    q_high_kw: float = 0.0
    q_low_kw: float = 0.0

    def __post_init__(self):
        if self.q_high_kw < 0.0 or self.q_low_kw < 0.0:
            raise ArgumentError(f"Heat pools must be non-negative ({self.q_high_kw}, {self.q_low_kw} kW)",
                                stage="recovery")


@dataclass(frozen=True)
class HeatLedger:
    """Where the preheating and decomposition duties come from under one measure."""

    measure: str
    q_pre_kw: float
    q_dec_kw: float
    q_high_to_dec_kw: float
    q_high_to_pre_kw: float
    q_low_to_pre_kw: float
    w_eh_kw: float

    @property
    def q_high_recovered_kw(self) -> float:
        return self.q_high_to_dec_kw + self.q_high_to_pre_kw

    @property
    def q_low_recovered_kw(self) -> float:
        return self.q_low_to_pre_kw

    @property
    def recovered_kw(self) -> float:
        return self.q_high_recovered_kw + self.q_low_recovered_kw

    @property
    def demand_kw(self) -> float:
        return self.q_pre_kw + self.q_dec_kw

    def as_dict(self) -> dict:
        data = asdict(self)
        data.update(
            q_high_recovered_kw=self.q_high_recovered_kw,
            q_low_recovered_kw=self.q_low_recovered_kw,
        )
        return data
