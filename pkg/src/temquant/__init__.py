"""Integrate-and-fire time encoding with time-difference quantization."""

from .signals import *  # noqa: F401,F403
from .kernel import *  # noqa: F401,F403
from .encoding import *  # noqa: F401,F403
from .quantization import *  # noqa: F401,F403
from .reconstruction import *  # noqa: F401,F403

__version__ = "0.1.0"
