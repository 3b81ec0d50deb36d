"""
Engine contracts for wallcross.
"""

from .euler_interface import EulerEngineInterface
from .vortex_interface import VortexEngineInterface

__all__ = ['EulerEngineInterface', 'VortexEngineInterface']
