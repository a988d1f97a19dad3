"""Chord diagrams, weight systems, associators and the universal finite-type invariant."""

from __future__ import annotations

__version__ = "0.1.0"
