"""64-bit seed mixing (splitmix64) shared by every randomised component.

``trial_seed(base, i)`` is the seed of trial ``i`` under base seed ``base``:

    z = (base + (i + 1) * 0x9E3779B97F4A7C15) mod 2^64
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 mod 2^64
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB mod 2^64
    return z ^ (z >> 31)
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
MIX1 = 0xBF58476D1CE4E5B9
MIX2 = 0x94D049BB133111EB


def splitmix64(z: int) -> int:
    z &= MASK64
    z = ((z ^ (z >> 30)) * MIX1) & MASK64
    z = ((z ^ (z >> 27)) * MIX2) & MASK64
    return z ^ (z >> 31)


def trial_seed(base: int, i: int) -> int:
    return splitmix64((base + (i + 1) * GOLDEN) & MASK64)


def derive(base: int, *labels: int) -> int:
    """Seed for a labelled sub-component, e.g. ``derive(seed, 3)`` for the 4th matrix."""
    s = base & MASK64
    for lab in labels:
        s = trial_seed(s, lab)
    return s


def splitmix64_array(counters: np.ndarray, base: int) -> np.ndarray:
    """Vectorised ``trial_seed(base, c)`` for a uint64 array of counters."""
    with np.errstate(over="ignore"):
        z = np.uint64(base & MASK64) + (counters.astype(np.uint64) + np.uint64(1)) * np.uint64(GOLDEN)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(MIX1)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(MIX2)
        return z ^ (z >> np.uint64(31))
