"""itil-forge: phase-gated IT infrastructure lifecycle management engine."""

from .config import ServiceConfig, SlaConfig, load_config
from .store import Engine

__version__ = "0.1.0"

__all__ = ["Engine", "ServiceConfig", "SlaConfig", "load_config", "__version__"]
