"""Linear contracts between a network operator and a risk-averse fog node."""

from ._fogpact import (
    FogpactError,
    MarketInstance,
    fn_certainty_equivalent,
    plans,
    profile_to_effort,
    rank_plans,
    reference_fixture,
    sensitivity,
    simulate,
    solve,
    solve_numeric_oracle,
    sweep,
)

__all__ = [
    "FogpactError",
    "MarketInstance",
    "fn_certainty_equivalent",
    "plans",
    "profile_to_effort",
    "rank_plans",
    "reference_fixture",
    "sensitivity",
    "simulate",
    "solve",
    "solve_numeric_oracle",
    "sweep",
]
__version__ = "0.1.0"
