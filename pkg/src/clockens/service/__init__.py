"""HTTP service wrapping the core experiments."""

from .app import app

__all__ = ["app"]
