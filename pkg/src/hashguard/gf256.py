"""Arithmetic in GF(2^8) modulo x^8 + x^4 + x^3 + x + 1.

Scalar functions work on Python ints in 0..255. The ``*_array`` variants
accept numpy uint8 arrays of any shape and are what the hash kernels use.
"""

import numpy as np

POLY = 0x11B
REDUCTION = 0x1B


def gf_add(a: int, b: int) -> int:
    return a ^ b


def xtime(a: int) -> int:
    """Multiply by x, reducing modulo the field polynomial (branch-free)."""
    return ((a << 1) ^ (REDUCTION & -(a >> 7))) & 0xFF


def gf_mul(a: int, b: int) -> int:
    """Branch-free shift-and-add product of two field elements.

    Always runs eight iterations; the conditional add is a mask, not a jump.
    """
    a &= 0xFF
    r = 0
    for _ in range(8):
        r ^= a & -(b & 1)
        a = xtime(a)
        b >>= 1
    return r


def gf_pow(a: int, e: int) -> int:
    r = 1
    while e:
        if e & 1:
            r = gf_mul(r, a)
        a = gf_mul(a, a)
        e >>= 1
    return r


def xtime_array(a: np.ndarray) -> np.ndarray:
    a = np.asarray(a, dtype=np.uint8)
    return (a << 1) ^ ((a >> 7) * np.uint8(REDUCTION))


def mul_const_array(c: int, a: np.ndarray) -> np.ndarray:
    """Multiply every element of ``a`` by the constant ``c`` via an xtime chain."""
    a = np.asarray(a, dtype=np.uint8)
    out = np.zeros_like(a)
    while c:
        if c & 1:
            out ^= a
        a = xtime_array(a)
        c >>= 1
    return out


def mul_table() -> np.ndarray:
    """Full 256x256 product table (used by tests and the self-test only)."""
    a = np.arange(256, dtype=np.uint8)
    return np.stack([mul_const_array(c, a) for c in range(256)])
