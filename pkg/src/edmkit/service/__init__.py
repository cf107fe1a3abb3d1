"""HTTP service exposing the metering toolkit."""

from .app import create_app

__all__ = ["create_app"]
