"""Fixed-point encoding of reals into the ring Z_2^64.

Every value the secure engine touches is an unsigned 64-bit ring element
interpreted as a two's-complement signed integer with ``f`` fractional
bits.  Addition is exact ring addition; multiplication of two fixed-point
values produces ``2f`` fractional bits and must be rescaled with
:func:`truncate` (or its array form) afterwards.

Two truncation modes exist.  Deterministic truncation is an arithmetic
right shift (floor division of the signed value) and is bit-reproducible
everywhere; probabilistic truncation rounds down or up with probability
proportional to the discarded remainder, so it is unbiased but off by at
most one LSB from the deterministic result.

The array kernels (wrapping matmul, arithmetic shift) come from the
compiled extension when it is installed, with a numpy fallback otherwise;
``USING_COMPILED_KERNELS`` records which one is active.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

if os.environ.get("PRIVOTE_PURE_PYTHON"):
    from privote import _ringref as _kernels

    USING_COMPILED_KERNELS = False
else:
    try:
        from privote import _ringcore as _kernels  # type: ignore[no-redef]

        USING_COMPILED_KERNELS = True
    except ImportError:
        from privote import _ringref as _kernels  # type: ignore[no-redef]

        USING_COMPILED_KERNELS = False

RING_BITS = 64
RING_MOD = 1 << RING_BITS
RING_MASK = RING_MOD - 1
SIGN_BIT = 1 << (RING_BITS - 1)

DETERMINISTIC = "deterministic"
PROBABILISTIC = "probabilistic"


class FixedPointOverflow(OverflowError):
    """Raised when a real value falls outside the representable range."""


@dataclass(frozen=True)
class FixedPointParams:
    """Ring width and fractional precision. The engine fixes ell at 64."""

    ell: int = 64
    f: int = 16

    def __post_init__(self):
        if self.ell != RING_BITS:
            raise ValueError(f"ring width is fixed at {RING_BITS} bits")
        if not 0 < self.f < self.ell:
            raise ValueError("fractional bits must satisfy 0 < f < ell")

    @property
    def scale(self) -> int:
        return 1 << self.f

    @property
    def max_magnitude(self) -> float:
        """Largest representable |x|: 2^(ell - f - 1)."""
        return float(1 << (self.ell - self.f - 1))


DEFAULT_PARAMS = FixedPointParams()


def to_signed(v: int) -> int:
    """Two's-complement signed interpretation of a ring element."""
    v &= RING_MASK
    return v - RING_MOD if v >= SIGN_BIT else v


def from_signed(s: int) -> int:
    """Reduce a signed integer into [0, 2^64)."""
    return s & RING_MASK


def encode(x: float, params: FixedPointParams = DEFAULT_PARAMS) -> int:
    """Encode a real as round-to-nearest(x * 2^f) mod 2^64.

    Ties round away from zero.  Raises :class:`FixedPointOverflow` when
    |x| is not below 2^(ell - f - 1).
    """
    if not abs(x) < params.max_magnitude:
        raise FixedPointOverflow(
            f"|{x}| exceeds representable magnitude {params.max_magnitude}"
        )
    scaled = x * params.scale
    if scaled >= 0:
        r = int(np.floor(scaled + 0.5))
    else:
        r = int(np.ceil(scaled - 0.5))
    return from_signed(r)


def decode(v: int, params: FixedPointParams = DEFAULT_PARAMS) -> float:
    """Inverse of :func:`encode`, exact up to the 2^-f grid."""
    return to_signed(v) / params.scale


def truncate(
    v: int,
    mode: str = DETERMINISTIC,
    params: FixedPointParams = DEFAULT_PARAMS,
    rng: np.random.Generator | None = None,
) -> int:
    """Rescale a double-precision product (2f fractional bits) back to f.

    Deterministic mode floors the signed value divided by 2^f.
    Probabilistic mode rounds to floor or floor+1 with probability equal
    to the discarded fractional remainder over 2^f.
    """
    s = to_signed(v)
    q = s >> params.f
    if mode == DETERMINISTIC:
        return from_signed(q)
    if mode == PROBABILISTIC:
        if rng is None:
            rng = np.random.default_rng()
        rem = s & (params.scale - 1)
        if rng.random() < rem / params.scale:
            q += 1
        return from_signed(q)
    raise ValueError(f"unknown truncation mode: {mode!r}")


# ---------------------------------------------------------------------------
# Vectorised forms over uint64 ndarrays.

def encode_array(x, params: FixedPointParams = DEFAULT_PARAMS) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if not np.all(np.abs(x) < params.max_magnitude):
        raise FixedPointOverflow("array contains values outside the representable range")
    scaled = x * params.scale
    r = np.where(scaled >= 0, np.floor(scaled + 0.5), np.ceil(scaled - 0.5))
    return r.astype(np.int64).view(np.uint64).reshape(x.shape)


def decode_array(v, params: FixedPointParams = DEFAULT_PARAMS) -> np.ndarray:
    v = np.asarray(v, dtype=np.uint64)
    return v.view(np.int64).astype(np.float64) / params.scale


def truncate_array(
    v,
    mode: str = DETERMINISTIC,
    params: FixedPointParams = DEFAULT_PARAMS,
    rng: np.random.Generator | None = None,
    shift: int | None = None,
) -> np.ndarray:
    """Array form of :func:`truncate`; ``shift`` overrides the default f."""
    v = np.asarray(v, dtype=np.uint64)
    s = params.f if shift is None else shift
    q = _kernels.trunc_shift(v, s)
    if mode == DETERMINISTIC:
        return q
    if mode == PROBABILISTIC:
        if rng is None:
            rng = np.random.default_rng()
        rem = (v & np.uint64((1 << s) - 1)).astype(np.float64)
        bump = rng.random(v.shape) < rem / (1 << s)
        return ring_add(q, bump.astype(np.uint64))
    raise ValueError(f"unknown truncation mode: {mode!r}")


def ring_add(a, b) -> np.ndarray:
    return np.add(a, b, dtype=np.uint64)


def ring_sub(a, b) -> np.ndarray:
    return np.subtract(a, b, dtype=np.uint64)


def ring_neg(a) -> np.ndarray:
    return np.negative(np.asarray(a, dtype=np.uint64))


def ring_mul(a, b) -> np.ndarray:
    """Elementwise product mod 2^64 (fractional bits add up)."""
    return np.multiply(a, b, dtype=np.uint64)


def ring_matmul(a, b) -> np.ndarray:
    """Matrix product mod 2^64 via the active kernel backend."""
    return _kernels.ring_matmul(
        np.ascontiguousarray(a, dtype=np.uint64),
        np.ascontiguousarray(b, dtype=np.uint64),
    )


def random_ring_array(shape, rng: np.random.Generator) -> np.ndarray:
    """Uniform elements of Z_2^64."""
    return rng.integers(0, RING_MOD, size=shape, dtype=np.uint64)
