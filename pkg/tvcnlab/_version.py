"""Version of the tvcnlab package."""

__version__ = "0.1.0"
