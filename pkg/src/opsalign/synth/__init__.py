"""Synthetic fleet generator: flight profiles and degradation trajectories."""

from .degradation import DegradationSpec, SensorCoupling, gen_fleet, gen_unit, health_trajectory
from .flights import FLIGHT_CLASSES, FlightClassSpec, gen_flight

__all__ = [
    "DegradationSpec",
    "SensorCoupling",
    "gen_fleet",
    "gen_unit",
    "health_trajectory",
    "FLIGHT_CLASSES",
    "FlightClassSpec",
    "gen_flight",
]
