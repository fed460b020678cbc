"""Python bindings for the sagin simulator core."""

from ._sagin import (
    Env,
    brute_force_oracle,
    default_config,
    orbital_period,
    satellite_position,
    solve_max_min,
)

__all__ = [
    "Env",
    "brute_force_oracle",
    "default_config",
    "orbital_period",
    "satellite_position",
    "solve_max_min",
]
