"""Configuration module for the double cone verification suite."""

from .settings import settings

__all__ = ['settings']
