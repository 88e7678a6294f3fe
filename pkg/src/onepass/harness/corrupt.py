"""Error injection for received words."""

from __future__ import annotations

import random
from typing import Sequence

from ..codes import FoldedReedSolomon, LinearCode


class CorruptionError(ValueError):
    pass


def _random_nonzero_symbol(code: LinearCode, rng: random.Random):
    F = code.field
    if isinstance(code, FoldedReedSolomon):
        while True:
            d = tuple(rng.randrange(F.order) for _ in range(code.s))
            if any(d):
                return d
    return rng.randrange(1, F.order)


def _shift(code: LinearCode, y, d):
    F = code.field
    if isinstance(code, FoldedReedSolomon):
        return tuple(F.add(a, b) for a, b in zip(y, d))
    return F.add(y, d)


def _norm(code: LinearCode, v):
    F = code.field
    if isinstance(code, FoldedReedSolomon):
        v = tuple(F.coerce(x) for x in v)
        if len(v) != code.s:
            raise CorruptionError(f"folded symbol needs {code.s} elements")
        return v
    return F.coerce(v)


def corrupt_worst_case(code: LinearCode, word: Sequence, positions: Sequence[int], values: Sequence) -> list:
    """Overwrite ``positions`` (symbol indices) with ``values``; each must differ from the original."""
    if len(positions) != len(values):
        raise CorruptionError("positions and values differ in length")
    if len(set(positions)) != len(positions):
        raise CorruptionError("repeated position")
    out = list(word)
    for p, v in zip(positions, values):
        if not 0 <= p < len(out):
            raise CorruptionError(f"position {p} out of range [0, {len(out)})")
        v = _norm(code, v)
        if v == _norm(code, out[p]):
            raise CorruptionError(f"value at position {p} equals the original")
        out[p] = v
    return out


def corrupt_random(code: LinearCode, word: Sequence, e: int, rng: random.Random) -> tuple[list, list[int]]:
    """Change ``e`` uniformly chosen positions by uniform nonzero differences."""
    n = len(word)
    if not 0 <= e <= n:
        raise CorruptionError(f"need 0 <= e <= n, got e={e}")
    positions = sorted(rng.sample(range(n), e))
    out = list(word)
    for p in positions:
        out[p] = _shift(code, _norm(code, out[p]), _random_nonzero_symbol(code, rng))
    return out, positions
