"""ECHO-256: Compress_512 chaining with 256-bit output.

State layout: an EchoState is a uint8 array of shape (..., 16, 16). Axis -2
indexes the sixteen 128-bit words, word ``n = 4*col + row`` of the 4x4 word
matrix (column 0 is the chaining value, columns 1-3 the message). Axis -1
holds each word's bytes in AES order, which is also the byte order of the
word in the message stream.
"""

from dataclasses import dataclass

import numpy as np

from .aes_core import SHIFT_ROWS_INDEX, aes_round, mix_columns_along

BLOCK_BYTES = 192
BLOCK_BITS = BLOCK_BYTES * 8
H_SIZE = 256
N_BIG_ROUNDS = 8
# pad bit + 16-bit H_size + 128-bit length must fit after the message bits
_TAIL_BYTES = 18

MASK128 = (1 << 128) - 1


@dataclass(frozen=True)
class EchoParams:
    """Per-compression parameters: 128-bit salt and the block's bit counter."""

    salt: bytes = bytes(16)
    counter: int = 0
    h_size: int = H_SIZE

    def __post_init__(self):
        if len(self.salt) != 16:
            raise ValueError("salt must be 16 bytes")
        if self.h_size != H_SIZE:
            raise ValueError("only ECHO-256 is implemented")
        if not 0 <= self.counter <= MASK128:
            raise ValueError("counter out of range")


def word_to_int(word) -> int:
    return int.from_bytes(bytes(np.asarray(word, dtype=np.uint8)), "little")


def int_to_word(value: int) -> np.ndarray:
    return np.frombuffer((value & MASK128).to_bytes(16, "little"), dtype=np.uint8).copy()


def to_byte_matrix(s: np.ndarray) -> np.ndarray:
    """4-row, 64-column byte view used by BIG.MixColumns.

    Byte column ``16*col + b`` holds byte b of the four words in word column col.
    """
    s = np.asarray(s, dtype=np.uint8)
    cols = s.reshape(s.shape[:-2] + (4, 4, 16))  # (..., col, row, byte)
    return np.swapaxes(cols, -3, -2).reshape(s.shape[:-2] + (4, 64))


def from_byte_matrix(m: np.ndarray) -> np.ndarray:
    m = np.asarray(m, dtype=np.uint8)
    rows = m.reshape(m.shape[:-2] + (4, 4, 16))  # (..., row, col, byte)
    return np.swapaxes(rows, -3, -2).reshape(m.shape[:-2] + (16, 16))


def initial_chaining_value() -> np.ndarray:
    return np.tile(int_to_word(H_SIZE), (4, 1))


def round_keys(params: EchoParams, round_index: int) -> tuple[np.ndarray, np.ndarray]:
    """Keys for the two AES rounds of every word in one BIG.SubWords.

    The first key of word n is the 128-bit counter ``C + 16*round + n``
    (little-endian); the second key is the salt.
    """
    base = params.counter + 16 * round_index
    k1 = np.stack([int_to_word(base + n) for n in range(16)])
    k2 = np.broadcast_to(np.frombuffer(params.salt, dtype=np.uint8), (16, 16))
    return k1, k2


def big_subwords(s: np.ndarray, params: EchoParams, round_index: int) -> np.ndarray:
    k1, k2 = round_keys(params, round_index)
    return aes_round(aes_round(s, k1), k2)


def big_shiftrows(s: np.ndarray) -> np.ndarray:
    # same index map as AES ShiftRows, applied to words instead of bytes
    return s[..., SHIFT_ROWS_INDEX, :]


def big_mixcolumns(s: np.ndarray) -> np.ndarray:
    cols = s.reshape(s.shape[:-2] + (4, 4, 16))
    return mix_columns_along(cols, -2).reshape(s.shape)


def big_final(initial: np.ndarray, final_state: np.ndarray) -> np.ndarray:
    """Feed-forward and fold: v_j = XOR over k of initial[4k+j] ^ final[4k+j]."""
    x = np.asarray(initial) ^ np.asarray(final_state)
    x = x.reshape(x.shape[:-2] + (4, 4, 16))
    return x[..., 0, :, :] ^ x[..., 1, :, :] ^ x[..., 2, :, :] ^ x[..., 3, :, :]


def assemble_state(v_prev: np.ndarray, m: np.ndarray) -> np.ndarray:
    v_prev = np.asarray(v_prev, dtype=np.uint8)
    m = np.asarray(m, dtype=np.uint8)
    batch = np.broadcast_shapes(v_prev.shape[:-2], m.shape[:-2])
    v_prev = np.broadcast_to(v_prev, batch + (4, 16))
    m = np.broadcast_to(m, batch + (12, 16))
    return np.concatenate([v_prev, m], axis=-2)


def compress512(v_prev: np.ndarray, m: np.ndarray, params: EchoParams) -> np.ndarray:
    """One Compress_512 call: v_prev (..., 4, 16), m (..., 12, 16) -> (..., 4, 16)."""
    initial = assemble_state(v_prev, m)
    s = initial
    for r in range(N_BIG_ROUNDS):
        s = big_mixcolumns(big_shiftrows(big_subwords(s, params, r)))
    return big_final(initial, s)


def pad_and_split(message: bytes, bit_length: int | None = None):
    """Pad a message and cut it into 1536-bit blocks.

    ``bit_length`` allows messages that end mid-byte (bits are taken MSB
    first, as in the NIST KAT files). Returns a list of ``(block, counter)``
    pairs where ``block`` is a (12, 16) uint8 array and ``counter`` the value
    of C_i for that compression: the number of message bits hashed up to and
    including that block, or 0 for a block holding no message bits.
    """
    if bit_length is None:
        bit_length = 8 * len(message)
    if bit_length > 8 * len(message) or bit_length < 0:
        raise ValueError("bit_length exceeds message")
    if bit_length >= 1 << 128:
        raise ValueError("message too long for the 128-bit counter")

    full = bit_length // BLOCK_BITS
    blocks = []
    for i in range(full):
        chunk = message[i * BLOCK_BYTES:(i + 1) * BLOCK_BYTES]
        blocks.append((bytes(chunk), (i + 1) * BLOCK_BITS))

    rem_bits = bit_length - full * BLOCK_BITS
    nbytes, nbits = divmod(rem_bits, 8)
    tail = bytearray(message[full * BLOCK_BYTES:full * BLOCK_BYTES + nbytes])
    last = message[full * BLOCK_BYTES + nbytes] if nbits else 0
    z = 0x80 >> nbits
    tail.append(((last & -z) | z) & 0xFF)
    counter = bit_length if rem_bits else 0

    if len(tail) > BLOCK_BYTES - _TAIL_BYTES:
        blocks.append((bytes(tail.ljust(BLOCK_BYTES, b"\0")), counter))
        tail = bytearray()
        counter = 0
    tail = tail.ljust(BLOCK_BYTES - _TAIL_BYTES, b"\0")
    tail += H_SIZE.to_bytes(2, "little") + bit_length.to_bytes(16, "little")
    blocks.append((bytes(tail), counter))

    return [(np.frombuffer(b, dtype=np.uint8).reshape(12, 16).copy(), c) for b, c in blocks]


def digest_from_chaining(v: np.ndarray) -> bytes:
    return bytes(np.asarray(v[:2], dtype=np.uint8).reshape(-1))


def echo_hash(message: bytes, salt: bytes = bytes(16), bit_length: int | None = None) -> bytes:
    v = initial_chaining_value()
    for block, counter in pad_and_split(message, bit_length):
        v = compress512(v, block, EchoParams(salt=salt, counter=counter))
    return digest_from_chaining(v)
