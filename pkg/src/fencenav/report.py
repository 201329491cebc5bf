"""Run reports shared by the strategies, the bench and the CLI."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Optional


@dataclass
class RunReport:
    scene_id: str
    n: int
    k: int
    mode: str
    trip_lengths: list[float]
    L: Optional[float]
    groups: int = 0
    fences: int = 0
    delta_x: list[float] = field(default_factory=list)
    checks: Any = None
    extra: dict = field(default_factory=dict)

    @property
    def total(self) -> float:
        return sum(self.trip_lengths)

    @property
    def rho(self) -> Optional[float]:
        if not self.L:
            return None
        return self.total / (len(self.trip_lengths) * self.L)

    @property
    def rho_i(self) -> list[Optional[float]]:
        if not self.L:
            return [None] * len(self.trip_lengths)
        return [r / self.L for r in self.trip_lengths]

    def cum_ratio(self, upto: int) -> Optional[float]:
        if not self.L:
            return None
        return sum(self.trip_lengths[:upto]) / (upto * self.L)
