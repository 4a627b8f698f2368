"""Exact implicitization of de Jonquieres maps via downgraded sequences."""

__version__ = "0.1.0"
