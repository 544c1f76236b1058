"""Pinned counter-based pseudorandom generator.

Every random draw in this package comes from one fixed, published 64-bit
construction: the splitmix64 finalizer (Steele/Lea/Flood; Vigna's reference
implementation) driven in counter mode.  The mapping from ``(seed, counter)``
to a 64-bit word is part of the package's external contract -- it produces the
same bits on every platform, Python version, and numpy version, so sampled
graphs are reproducible bit for bit.

Definitions, with all arithmetic mod 2**64:

    GAMMA = 0x9E3779B97F4A7C15                    golden-ratio increment
    mix64(z):
        z ^= z >> 30;  z *= 0xBF58476D1CE4E5B9
        z ^= z >> 27;  z *= 0x94D049BB133111EB
        z ^= z >> 31
    word(seed, c)    = mix64(seed + (c + 1) * GAMMA)      for c = 0, 1, 2, ...
    uniform(seed, c) = (word(seed, c) >> 11) * 2.0**-53   in [0, 1)
    derive_seed(seed, j) = mix64((seed ^ SALT) + (j + 1) * GAMMA)
        with SALT = 0xD1B54A32D192ED03

``derive_seed`` keys independent sub-streams (per-trial seeds, resampling
attempts) off a master seed; the xor salt keeps the derivation stream disjoint
from the uniform stream of the same seed.  Graph samplers consume uniforms in
row-major upper-triangle order: edge (i, j) with i < j reads counter
``i*(2n - i - 1)//2 + (j - i - 1)``.
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15
SEED_SALT = 0xD1B54A32D192ED03

_INV_2_53 = 1.0 / 9007199254740992.0  # 2**-53


def mix64(z: int) -> int:
    """Scalar splitmix64 finalizer (pure Python, exact 64-bit semantics)."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return (z ^ (z >> 31)) & MASK64


def derive_seed(seed: int, index: int) -> int:
    """Sub-seed for stream ``index`` of a master seed (see module docstring)."""
    if index < 0:
        raise ValueError("stream index must be nonnegative")
    base = ((seed & MASK64) ^ SEED_SALT) + (index + 1) * GAMMA
    return mix64(base & MASK64)


def _mix64_array(z: np.ndarray) -> np.ndarray:
    z = z.astype(np.uint64, copy=True)
    z ^= z >> np.uint64(30)
    z *= np.uint64(0xBF58476D1CE4E5B9)
    z ^= z >> np.uint64(27)
    z *= np.uint64(0x94D049BB133111EB)
    z ^= z >> np.uint64(31)
    return z


def words(seed: int, count: int, start: int = 0) -> np.ndarray:
    """64-bit words at counters ``start .. start+count-1`` of stream ``seed``."""
    c = np.arange(start + 1, start + count + 1, dtype=np.uint64)
    base = np.uint64(seed & MASK64) + c * np.uint64(GAMMA)
    return _mix64_array(base)


def uniforms(seed: int, count: int, start: int = 0) -> np.ndarray:
    """Uniform [0, 1) doubles at consecutive counters of stream ``seed``."""
    w = words(seed, count, start)
    return (w >> np.uint64(11)).astype(np.float64) * _INV_2_53


def uniform_block(seeds: np.ndarray, count: int) -> np.ndarray:
    """Uniforms for many streams at once: row t equals ``uniforms(seeds[t], count)``."""
    s = np.asarray(seeds, dtype=np.uint64).reshape(-1, 1)
    c = np.arange(1, count + 1, dtype=np.uint64).reshape(1, -1)
    base = s + c * np.uint64(GAMMA)
    w = _mix64_array(base)
    return (w >> np.uint64(11)).astype(np.float64) * _INV_2_53
