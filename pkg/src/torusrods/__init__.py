"""Exact tools for complements of closed geodesics ("rods") in the 3-torus.

Submodules: ``farey`` (slopes and the Farey graph), ``unimodular`` (integer
linear algebra), ``lattice`` (rods and configurations), ``homeo``
(homeomorphism classification for up to three rods), ``volume`` (volume
bounds and the drilling construction), ``config`` and ``cli``.
"""

__version__ = "0.1.0"

from .errors import (  # noqa: F401
    ConfigError,
    InvalidInputError,
    ResourceLimitError,
    TorusRodsError,
    UnsupportedCaseError,
)
from .farey import Slope, farey_distance, farey_geodesic_path  # noqa: F401
from .lattice import Rod, validate_stratified  # noqa: F401
