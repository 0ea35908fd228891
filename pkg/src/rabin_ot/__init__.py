"""Rabin oblivious transfer: protocols, cheating strategies, closed forms,
Monte Carlo verification and optimization oracles."""

__version__ = "0.1.0"

from . import adversary, analytics, cli, protocols, qmath, verify  # noqa: F401
