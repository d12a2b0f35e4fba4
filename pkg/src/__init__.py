"""Semiparametric bounds on expected payoffs by column generation."""

__version__ = "0.1.0"
