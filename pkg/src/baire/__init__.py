"""Exact computation over Baire-space oracles: partial application,
signed-digit reals, named metric spaces, compactness-base realizers of
the anti-Specker property, protected series splitting, and bound
extraction from domination realizers."""

from . import antispecker, bdn, cauchy, cli, k2, naming, reals

__all__ = ["antispecker", "bdn", "cauchy", "cli", "k2", "naming", "reals"]
__version__ = "0.1.0"
