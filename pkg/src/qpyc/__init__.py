"""Qudit erasure codes and one-way quantum repeater modelling."""

__version__ = "0.1.0"
