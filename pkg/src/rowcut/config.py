"""Run configuration shared by the command line and the service."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Config:
    threshold: int = 128
    skew_range_deg: float = 10.0
    skew_step_deg: float = 0.25
    smooth_window: int = 9
    band_threshold: float = 0.2
    epsilon: float = 2.0
    resume_lookahead: int = 3
    exterior_first: bool = True

    def __post_init__(self):
        if not 0 <= self.threshold <= 255:
            raise ValueError("threshold must lie in [0, 255]")
        if not 0 < self.skew_range_deg <= 10.0:
            raise ValueError("skew_range_deg must lie in (0, 10]")
        if self.skew_step_deg <= 0:
            raise ValueError("skew_step_deg must be positive")
        if self.smooth_window < 1 or self.smooth_window % 2 == 0:
            raise ValueError("smooth_window must be odd and positive")
        if not 0.0 < self.band_threshold < 1.0:
            raise ValueError("band_threshold must sit strictly between 0 and 1")
        if self.epsilon < 0:
            raise ValueError("epsilon must be non-negative")
        if self.resume_lookahead < 1:
            raise ValueError("resume_lookahead must be at least 1")
