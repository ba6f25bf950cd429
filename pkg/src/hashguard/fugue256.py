"""Fugue-256.

The 30-word state is a uint32 array of shape (..., 30); leading axes are
batch dimensions. Words enter and leave the 16-byte Super-Mix vector
big-endian: vector index ``4*j + b`` is byte b (most significant first) of
word S_j.
"""

import numpy as np

from .aes_core import SBOX
from .gf256 import xtime_array

N_WORDS = 30
ROTATIONS = (3, 14, 15)

IV256 = (0xE952BDDE, 0x6671135F, 0xE0D4F668, 0xD2B0B594,
         0xF96C621D, 0xFBF929DE, 0x9149E899, 0x34F8C248)

# Super-Mix matrix, entries in hex
SUPER_MIX = np.array([
    [1, 4, 7, 1, 1, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0],
    [0, 1, 0, 0, 1, 1, 4, 7, 0, 1, 0, 0, 0, 1, 0, 0],
    [0, 0, 1, 0, 0, 0, 1, 0, 7, 1, 1, 4, 0, 0, 1, 0],
    [0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 1, 4, 7, 1, 1],
    [0, 0, 0, 0, 0, 4, 7, 1, 1, 0, 0, 0, 1, 0, 0, 0],
    [0, 1, 0, 0, 0, 0, 0, 0, 1, 0, 4, 7, 0, 1, 0, 0],
    [0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 0, 0, 7, 1, 0, 4],
    [4, 7, 1, 0, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 0],
    [0, 0, 0, 0, 7, 0, 0, 0, 6, 4, 7, 1, 7, 0, 0, 0],
    [0, 7, 0, 0, 0, 0, 0, 0, 0, 7, 0, 0, 1, 6, 4, 7],
    [7, 1, 6, 4, 0, 0, 7, 0, 0, 0, 0, 0, 0, 0, 7, 0],
    [0, 0, 0, 7, 4, 7, 1, 6, 0, 0, 0, 7, 0, 0, 0, 0],
    [0, 0, 0, 0, 4, 0, 0, 0, 4, 0, 0, 0, 5, 4, 7, 1],
    [1, 5, 4, 7, 0, 0, 0, 0, 0, 4, 0, 0, 0, 4, 0, 0],
    [0, 0, 4, 0, 7, 1, 5, 4, 0, 0, 0, 0, 0, 0, 4, 0],
    [0, 0, 0, 4, 0, 0, 0, 4, 4, 7, 1, 5, 0, 0, 0, 0],
], dtype=np.uint8)


def _gather_plan(matrix: np.ndarray) -> np.ndarray:
    """Index table for the xtime-chain product.

    The input is expanded to [x, 2x, 4x] (48 bytes) plus one zero byte at
    index 48. Row r of the plan lists which of those 49 bytes XOR together
    to give output r; short rows are padded with the zero byte.
    """
    if matrix.max() > 7:
        raise ValueError("xtime plan only covers coefficients up to 7")
    terms = [[16 * b + c for c in range(16) for b in range(3) if (matrix[r, c] >> b) & 1]
             for r in range(16)]
    width = max(len(t) for t in terms)
    return np.array([t + [48] * (width - len(t)) for t in terms], dtype=np.intp)


_SUPER_MIX_PLAN = _gather_plan(SUPER_MIX)


def words_to_bytes(words: np.ndarray) -> np.ndarray:
    """(..., 4) uint32 -> (..., 16) uint8, big-endian per word."""
    w = np.asarray(words, dtype=np.uint32)
    shifts = np.array([24, 16, 8, 0], dtype=np.uint32)
    return ((w[..., :, None] >> shifts) & 0xFF).astype(np.uint8).reshape(w.shape[:-1] + (16,))


def bytes_to_words(b: np.ndarray) -> np.ndarray:
    b = np.asarray(b, dtype=np.uint32).reshape(np.shape(b)[:-1] + (4, 4))
    return (b[..., 0] << 24) | (b[..., 1] << 16) | (b[..., 2] << 8) | b[..., 3]


def super_mix(x: np.ndarray) -> np.ndarray:
    """Multiply 16-byte vectors (last axis) by the Super-Mix matrix."""
    x = np.asarray(x, dtype=np.uint8)
    x2 = xtime_array(x)
    x4 = xtime_array(x2)
    zero = np.zeros(x.shape[:-1] + (1,), dtype=np.uint8)
    expanded = np.concatenate([x, x2, x4, zero], axis=-1)
    return np.bitwise_xor.reduce(expanded[..., _SUPER_MIX_PLAN], axis=-1)


def initial_state() -> np.ndarray:
    s = np.zeros(N_WORDS, dtype=np.uint32)
    s[22:] = IV256
    return s


def tix(s: np.ndarray, m) -> np.ndarray:
    s = np.array(s, dtype=np.uint32, copy=True)
    s[..., 10] ^= s[..., 0]
    s[..., 0] = m
    s[..., 8] ^= s[..., 0]
    s[..., 1] ^= s[..., 24]
    return s


def ror(s: np.ndarray, r: int) -> np.ndarray:
    """Rotate the word array right: new S[(i + r) mod 30] = old S[i]."""
    if r not in ROTATIONS:
        raise ValueError(f"rotation must be one of {ROTATIONS}, got {r}")
    return np.roll(s, r, axis=-1)


def cmix(s: np.ndarray) -> np.ndarray:
    s = np.array(s, dtype=np.uint32, copy=True)
    s[..., 0:3] ^= s[..., 4:7]
    s[..., 15:18] ^= s[..., 4:7]
    return s


def sbox_layer(s: np.ndarray) -> np.ndarray:
    """First half of SMIX: AES S-box on the 16 bytes of S_0..S_3."""
    s = np.array(s, dtype=np.uint32, copy=True)
    s[..., 0:4] = bytes_to_words(SBOX[words_to_bytes(s[..., 0:4])])
    return s


def supermix_layer(s: np.ndarray) -> np.ndarray:
    """Second half of SMIX: Super-Mix over S_0..S_3, written back in place."""
    s = np.array(s, dtype=np.uint32, copy=True)
    s[..., 0:4] = bytes_to_words(super_mix(words_to_bytes(s[..., 0:4])))
    return s


def smix(s: np.ndarray) -> np.ndarray:
    return supermix_layer(sbox_layer(s))


def sub_round(s: np.ndarray) -> np.ndarray:
    return smix(cmix(ror(s, 3)))


def fugue_round(s: np.ndarray, m) -> np.ndarray:
    """Round R: TIX followed by two (ROR3, CMIX, SMIX) sub-rounds."""
    return sub_round(sub_round(tix(s, m)))


def pad(message: bytes, bit_length: int | None = None) -> list[int]:
    """Message words m_1..m_t: zero-fill to a word boundary, then the 64-bit bit length."""
    if bit_length is None:
        bit_length = 8 * len(message)
    if bit_length > 8 * len(message) or bit_length < 0:
        raise ValueError("bit_length exceeds message")
    nbytes, nbits = divmod(bit_length, 8)
    data = bytearray(message[:nbytes])
    if nbits:
        data.append(message[nbytes] & (0xFF << (8 - nbits)) & 0xFF)
    data += bytes(-len(data) % 4)
    data += bit_length.to_bytes(8, "big")
    return [int.from_bytes(data[i:i + 4], "big") for i in range(0, len(data), 4)]


def fold_step(s: np.ndarray, second: int) -> np.ndarray:
    """Finalization XOR pair: S_4 ^= S_0 and S_second ^= S_0."""
    s = np.array(s, dtype=np.uint32, copy=True)
    s[..., 4] ^= s[..., 0]
    s[..., second] ^= s[..., 0]
    return s


def finalize(s: np.ndarray) -> np.ndarray:
    for _ in range(10):
        s = sub_round(s)
    for _ in range(13):
        s = smix(ror(fold_step(s, 15), 15))
        s = smix(ror(fold_step(s, 16), 14))
    return fold_step(s, 15)


OUTPUT_WORDS = (1, 2, 3, 4, 15, 16, 17, 18)


def digest_from_state(s: np.ndarray) -> bytes:
    return b"".join(int(s[i]).to_bytes(4, "big") for i in OUTPUT_WORDS)


def fugue_hash(message: bytes, bit_length: int | None = None) -> bytes:
    s = initial_state()
    for m in pad(message, bit_length):
        s = fugue_round(s, m)
    return digest_from_state(finalize(s))
