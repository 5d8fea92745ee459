"""Three-speed ballistic annihilation: exact simulation, renewal sampling,
exhaustive enumeration and lower bounds on the offspring mean."""
from ._kernel import IMPLEMENTATION as KERNEL
from .kinematics import (
    CollisionEvent,
    SimOutcome,
    Speed,
    destroyer_of,
    reflect,
    run_ba,
    xi,
)

__version__ = "0.1.0"

__all__ = [
    "KERNEL",
    "CollisionEvent",
    "SimOutcome",
    "Speed",
    "destroyer_of",
    "reflect",
    "run_ba",
    "xi",
]
