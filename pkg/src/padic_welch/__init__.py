"""Exact p-adic Welch bounds, Zauner-type conditions and configuration search over Q."""

__version__ = "0.1.0"
