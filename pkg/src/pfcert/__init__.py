"""Picard-Fuchs operators with exact-form certificates, and numeric normal functions."""

__version__ = "0.1.0"
