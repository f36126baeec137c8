"""Clear-value semantics of the non-linear building blocks.

Both backends evaluate comparison, argmax, truncation, public division
and clamping through these functions: the ideal backend calls them on
the values it holds, and the shared backend's dealer calls them on the
value it reconstructs from submitted shares.  Keeping one implementation
is what makes the two backends bit-identical by construction.
"""

from __future__ import annotations

import numpy as np

from privote import fixring


def signed(a: np.ndarray) -> np.ndarray:
    return np.asarray(a, dtype=np.uint64).view(np.int64)


def compare_pos(a: np.ndarray) -> np.ndarray:
    """1 where the signed value is strictly positive, else 0."""
    return (signed(a) > 0).astype(np.uint64)


def argmax_onehot_rows(a: np.ndarray) -> np.ndarray:
    """Row-wise one-hot of the maximum; ties break to the lowest index."""
    s = signed(a)
    if s.ndim == 1:
        s = s[None, :]
        squeeze = True
    else:
        squeeze = False
    idx = np.argmax(s, axis=1)
    out = np.zeros(s.shape, dtype=np.uint64)
    out[np.arange(s.shape[0]), idx] = 1
    return out[0] if squeeze else out


def truncate(a: np.ndarray, shift: int, mode: str, rng: np.random.Generator) -> np.ndarray:
    return fixring.truncate_array(a, mode=mode, rng=rng, shift=shift)


def div_to_fixed(a: np.ndarray, divisor: int, f: int) -> np.ndarray:
    """round(signed(a) * 2^f / divisor) as a ring element (half rounds up)."""
    x = signed(a).astype(np.float64) * (1 << f) / divisor
    return np.floor(x + 0.5).astype(np.int64).view(np.uint64)


def clamp_signed(a: np.ndarray, bound: int) -> tuple[np.ndarray, int]:
    """Clip the signed view to [-bound, bound]; returns (result, #clipped)."""
    s = signed(a)
    clipped = np.clip(s, -bound, bound)
    n_hit = int(np.count_nonzero(clipped != s))
    return clipped.view(np.uint64).copy(), n_hit
