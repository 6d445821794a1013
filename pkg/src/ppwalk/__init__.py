"""Random walks on discrete point processes over Z^d.

The walker lives on the occupied sites of a translation-invariant point
process and jumps to one of its 2d coordinate nearest neighbors, chosen
uniformly.  The package simulates these walks at scale, checks their limit
behavior (zero speed, Gaussian scaling, recurrence and transience by
dimension), and exposes the analytic machinery those checks rest on:
electrical networks, isoperimetry of compressed sets, correctors, and
displacement-entropy bounds for the environment kernel.

Hot loops run in a compiled extension when it is available and fall back to a
vectorized pure-Python implementation otherwise; see ppwalk.backend.
"""

__version__ = "0.1.0"

from .backend import BACKEND
from .env import Direction, Environment, EnvironmentConfig, directions
from .errors import PPWalkError

__all__ = [
    "BACKEND",
    "Direction",
    "Environment",
    "EnvironmentConfig",
    "PPWalkError",
    "directions",
    "__version__",
]
