"""Capacity bounds and regime analysis for the Gaussian cognitive
interference channel: inner/outer rate regions, regime classification,
constant-gap checks, and plot-ready sweeps."""

from .channel import (CapacityResult, ChannelParams, RawChannel, RegimeReport,
                      classify, to_standard_form, very_strong_condition)
from .region import (GapReport, Kind, RateRegion, additive_gap, contains,
                     from_pareto_points, gap_report, intersect,
                     multiplicative_gap, union)

__version__ = "0.1.0"

__all__ = [
    "CapacityResult", "ChannelParams", "RawChannel", "RegimeReport",
    "classify", "to_standard_form", "very_strong_condition",
    "GapReport", "Kind", "RateRegion", "additive_gap", "contains",
    "from_pareto_points", "gap_report", "intersect", "multiplicative_gap",
    "union", "__version__",
]
