"""Deterministic per-trial seed derivation (splitmix64-style mixing)."""

from __future__ import annotations

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def mix64(x: int) -> int:
    """splitmix64 output mixing of a 64-bit state."""
    x &= _MASK
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK
    return x ^ (x >> 31)


def trial_seed(master_seed: int, trial: int) -> int:
    """Seed for one trial; depends only on (master_seed, trial), not run order."""
    return mix64((master_seed + _GOLDEN * (trial + 1)) & _MASK)
