"""Pure-numpy kernels for arithmetic in Z_2^64.

Fallback implementation used when the compiled extension is unavailable.
numpy's unsigned integer ops wrap modulo 2^64, which is exactly ring
semantics, so these are correct as well as reasonably fast.
"""

import numpy as np

_U64 = np.uint64


def ring_matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Matrix product of uint64 arrays, wrapping mod 2^64."""
    return np.matmul(a.astype(_U64, copy=False), b.astype(_U64, copy=False))


def trunc_shift(v: np.ndarray, shift: int) -> np.ndarray:
    """Arithmetic right shift of the two's-complement signed view."""
    return (v.view(np.int64) >> np.int64(shift)).view(_U64)
