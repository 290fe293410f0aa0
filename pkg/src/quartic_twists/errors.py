"""Shared error types.

TripwireError marks internal consistency failures that should never occur on
valid input: two independent routes disagreeing, or a search blowing past a
provably sufficient bound.  The CLI maps these to a dedicated exit code.
"""
from __future__ import annotations


class TripwireError(RuntimeError):
    """Internal consistency violation (not a usage error)."""
