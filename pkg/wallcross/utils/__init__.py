"""
Utility functions for wallcross: exact scalars, linear algebra and configuration.
"""

from .environment import EnvironmentConfig, config

__all__ = ['EnvironmentConfig', 'config']
