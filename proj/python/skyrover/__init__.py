"""3D UAV/AGV multi-agent path finding."""

from ._skyrover import *  # noqa: F401,F403
from ._skyrover import __doc__  # noqa: F401

__version__ = "0.1.0"
