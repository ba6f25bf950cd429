"""Predicted-signature checks for ECHO-256.

Checks and where they sit:

* ``mc_ark``: per AES round, the column flag XOR_r(in ^ k ^ out) over
  MixColumns input, round key and AddRoundKey output.
* ``shift_rows`` / ``big_shift_rows``: recompute the permutation through an
  independent index map and compare.
* ``big_mix_columns``: per sub-matrix j, XOR_r(in ^ out) over its four byte
  columns of the 4x64 view.
* ``big_final_parity``: predicted parity of each chaining word from the
  previous chaining value, the message words and the eighth BIG.MixColumns
  output, against the parity of the produced word.

All of them are zero/consistent in fault-free operation because MixColumns
preserves the XOR of each column and every other step is a permutation or XOR.
"""

from dataclasses import dataclass

import numpy as np

from . import echo256
from .aes_core import add_round_key, mix_columns, shift_rows, sub_bytes
from .echo256 import EchoParams
from .signature import Boundary, Hook, Recorder, SignatureReport, tap

_BYTE_PARITY = np.array([bin(i).count("1") & 1 for i in range(256)], dtype=np.uint8)


@dataclass(frozen=True)
class GuardConfig:
    """flag_width: bits kept from each 32-bit column flag (XOR-folded).
    parity: "word" (one bit per 128-bit word) or "byte" (one bit per byte)."""

    flag_width: int = 32
    parity: str = "word"

    def __post_init__(self):
        if not 1 <= self.flag_width <= 32:
            raise ValueError("flag_width must be in 1..32")
        if self.parity not in ("word", "byte"):
            raise ValueError("parity must be 'word' or 'byte'")


def pack_flag(flag: np.ndarray) -> np.ndarray:
    """(..., 4) column-flag bytes -> (...,) 32-bit value, column c in bits 8c..8c+7."""
    f = np.asarray(flag, dtype=np.uint32)
    return f[..., 0] | (f[..., 1] << 8) | (f[..., 2] << 16) | (f[..., 3] << 24)


def compress_flag(flag: np.ndarray, n: int) -> np.ndarray:
    """XOR-fold the 32 flag bits into n bits; bit j lands on position j mod n."""
    if not 1 <= n <= 32:
        raise ValueError(f"compression width must be in 1..32, got {n}")
    v = pack_flag(flag)
    mask = np.uint32((1 << n) - 1)
    out = np.zeros_like(v)
    for shift in range(0, 32, n):
        out ^= (v >> np.uint32(shift)) & mask
    return out


def mc_ark_flag(inp: np.ndarray, key: np.ndarray, out: np.ndarray) -> np.ndarray:
    """E_c for c = 0..3: XOR over the rows of in ^ k ^ out; shape (..., 4)."""
    d = (np.asarray(inp) ^ np.asarray(key) ^ np.asarray(out)).reshape(np.shape(out)[:-1] + (4, 4))
    return np.bitwise_xor.reduce(d, axis=-1)


def big_mc_flags(inp: np.ndarray, out: np.ndarray) -> np.ndarray:
    """Flags of the 16 sub-matrices of BIG.MixColumns; shape (..., 16, 4)."""
    d = echo256.to_byte_matrix(np.asarray(inp) ^ np.asarray(out))
    col_sums = np.bitwise_xor.reduce(d, axis=-2)  # (..., 64)
    return col_sums.reshape(col_sums.shape[:-1] + (16, 4))


def _rotate_rows(grid: np.ndarray) -> np.ndarray:
    # grid axes (..., row, col, ...): row r rotated left by r
    return np.stack([np.roll(grid[..., r, :], -r, axis=-1) for r in range(4)], axis=-2)


def shiftrows_check(inp: np.ndarray, out: np.ndarray) -> np.ndarray:
    """Per AES state: does ``out`` equal ShiftRows(inp)?"""
    grid = np.swapaxes(np.asarray(inp).reshape(np.shape(inp)[:-1] + (4, 4)), -1, -2)
    expect = np.swapaxes(_rotate_rows(grid), -1, -2).reshape(np.shape(inp))
    return np.all(expect == out, axis=-1)


def big_shiftrows_check(inp: np.ndarray, out: np.ndarray) -> np.ndarray:
    """Per word of an EchoState: is it where BIG.ShiftRows should have put it?"""
    inp = np.asarray(inp)
    grid = np.swapaxes(inp.reshape(inp.shape[:-2] + (4, 4, 16)), -2, -3)  # (..., row, col, byte)
    moved = np.stack([np.roll(grid[..., r, :, :], -r, axis=-2) for r in range(4)], axis=-3)
    expect = np.swapaxes(moved, -2, -3).reshape(inp.shape)
    return np.all(expect == out, axis=-1)


def parity(words: np.ndarray, granularity: str = "word") -> np.ndarray:
    """P over 128-bit words (last axis = 16 bytes): (...) for "word", (..., 16) for "byte"."""
    p = _BYTE_PARITY[np.asarray(words, dtype=np.uint8)]
    if granularity == "byte":
        return p
    return np.bitwise_xor.reduce(p, axis=-1)


def predicted_final_parity(v_prev, m, a, granularity: str = "word") -> np.ndarray:
    """Predicted parities of v^0..v^3 after BIG.Final.

    P(v^j) = P(v^j_prev) ^ XOR_k P(A^{4k+j}) ^ XOR_{k<3} P(M^{4k+j}),
    with M the twelve message words and A the eighth BIG.MixColumns output.
    """
    pv = parity(v_prev, granularity)
    pa = parity(np.asarray(a).reshape(np.shape(a)[:-2] + (4, 4, 16)), granularity)
    pm = parity(np.asarray(m).reshape(np.shape(m)[:-2] + (3, 4, 16)), granularity)
    return pv ^ np.bitwise_xor.reduce(pa, axis=-3 if granularity == "byte" else -2) \
        ^ np.bitwise_xor.reduce(pm, axis=-3 if granularity == "byte" else -2)


def final_parity_mismatch(v_prev, m, a, v_next, granularity: str = "word") -> np.ndarray:
    """Per chaining word: True where predicted and actual parity differ; shape (..., 4)."""
    diff = predicted_final_parity(v_prev, m, a, granularity) ^ parity(v_next, granularity)
    return diff.astype(bool) if granularity == "word" else diff.any(axis=-1)


def big_final_parity_check(v_prev, m, a, v_next, granularity: str = "word"):
    """True when every chaining word's parity matches its prediction."""
    return ~final_parity_mismatch(v_prev, m, a, v_next, granularity).any(axis=-1)


def guarded_compress512(v_prev, m, params: EchoParams, config: GuardConfig | None = None,
                        hook: Hook | None = None, block: int = 0,
                        recorder: Recorder | None = None):
    """Compress_512 with every check evaluated at its boundary.

    ``hook`` sees (and may replace) every transformation output, which is how
    faults get injected; checks always read the post-hook values. Returns
    ``(v_next, report)``; v_next is bit-identical to ``compress512`` when the
    hook leaves values alone.
    """
    config = config or GuardConfig()
    initial = echo256.assemble_state(v_prev, m)
    batch = initial.shape[:-2]
    rec = recorder or Recorder(batch, hook)

    def flagged(flag):
        return compress_flag(flag, config.flag_width) != 0

    s = initial
    for r in range(echo256.N_BIG_ROUNDS):
        keys = echo256.round_keys(params, r)
        for a, k in enumerate(keys):
            sb = tap(hook, Boundary("sub_bytes", block, r, a), sub_bytes(s))
            sr = tap(hook, Boundary("shift_rows", block, r, a), shift_rows(sb))
            rec.record("shift_rows", Boundary("shift_rows", block, r, a), ~shiftrows_check(sb, sr))
            mc = tap(hook, Boundary("mix_columns", block, r, a), mix_columns(sr))
            s = tap(hook, Boundary("add_round_key", block, r, a), add_round_key(mc, k))
            rec.record("mc_ark", Boundary("add_round_key", block, r, a),
                       flagged(mc_ark_flag(sr, k, s)))
        pre = s
        s = tap(hook, Boundary("big_shift_rows", block, r, 0), echo256.big_shiftrows(s))
        rec.record("big_shift_rows", Boundary("big_shift_rows", block, r, 0),
                   ~big_shiftrows_check(pre, s))
        pre = s
        s = tap(hook, Boundary("big_mix_columns", block, r, 0), echo256.big_mixcolumns(s))
        rec.record("big_mix_columns", Boundary("big_mix_columns", block, r, 0),
                   flagged(big_mc_flags(pre, s)))

    final_boundary = Boundary("big_final", block, echo256.N_BIG_ROUNDS, 0)
    v_next = tap(hook, final_boundary, echo256.big_final(initial, s))
    rec.record("big_final_parity", final_boundary,
               final_parity_mismatch(initial[..., :4, :], initial[..., 4:, :], s, v_next,
                                     config.parity))
    return v_next, rec.report


def guarded_echo_hash(message: bytes, salt: bytes = bytes(16), bit_length: int | None = None,
                      config: GuardConfig | None = None, hook: Hook | None = None,
                      batch_shape: tuple = ()):
    """Full ECHO-256 with all checks. Returns ``(digest, report)``.

    With a non-empty ``batch_shape`` the computation is replicated (so a hook
    can corrupt each copy differently) and ``digest`` is a (..., 32) uint8
    array instead of bytes.
    """
    v = np.broadcast_to(echo256.initial_chaining_value(), tuple(batch_shape) + (4, 16))
    rec = Recorder(tuple(batch_shape), hook)
    for i, (block, counter) in enumerate(echo256.pad_and_split(message, bit_length)):
        v, _ = guarded_compress512(v, block, EchoParams(salt=salt, counter=counter),
                                   config, hook, block=i, recorder=rec)
    digest = np.asarray(v[..., :2, :]).reshape(tuple(batch_shape) + (32,))
    if not batch_shape:
        digest = bytes(digest)
    return digest, rec.report
