"""Predicted-signature checks for Fugue-256.

The word-wide signature sigma is the XOR of all 30 state words. TIX moves
sigma by exactly the pre-TIX S_24 and rotations/CMIX leave it alone, so the
TIX-ROR3-CMIX prefix of a round is checked against sigma ^ S_24, while the
second ROR3-CMIX and the finalization's XOR/rotate steps are checked for
sigma preservation. Super-Mix is checked by its byte-wide parity, which by
the column sums of the matrix equals {03} * (I_0 ^ I_5 ^ I_10 ^ I_15).

The S-box half of SMIX is not checked; its output is the trusted input of
the Super-Mix check.
"""

import numpy as np

from . import fugue256 as fg
from .gf256 import xtime_array
from .signature import Boundary, Hook, Recorder, tap

# finalization sigma checks are reported apart from the per-round ones
CHECK_KINDS = ("trc", "sigma", "supermix", "final_sigma")


def sigma(s: np.ndarray) -> np.ndarray:
    return np.bitwise_xor.reduce(np.asarray(s, dtype=np.uint32), axis=-1)


def trc_predict(pre_state: np.ndarray) -> np.ndarray:
    pre_state = np.asarray(pre_state, dtype=np.uint32)
    return sigma(pre_state) ^ pre_state[..., 24]


def trc_check(pre_state: np.ndarray, m):
    """Run TIX, ROR3, CMIX and compare the signature. Returns (post_state, raised)."""
    post = fg.cmix(fg.ror(fg.tix(pre_state, m), 3))
    return post, sigma(post) != trc_predict(pre_state)


def supermix_parity_predict(inp: np.ndarray) -> np.ndarray:
    inp = np.asarray(inp, dtype=np.uint8)
    t = inp[..., 0] ^ inp[..., 5] ^ inp[..., 10] ^ inp[..., 15]
    return t ^ xtime_array(t)


def supermix_check(inp: np.ndarray, out: np.ndarray) -> np.ndarray:
    """True when the byte-fold of ``out`` matches the prediction from ``inp``."""
    fold = np.bitwise_xor.reduce(np.asarray(out, dtype=np.uint8), axis=-1)
    return fold == supermix_parity_predict(inp)


def column_sums(matrix: np.ndarray) -> np.ndarray:
    return np.bitwise_xor.reduce(np.asarray(matrix, dtype=np.uint8), axis=0)


class _Pipeline:
    """Runs Fugue steps with taps and checks; shared by round and finalization."""

    def __init__(self, hook: Hook | None, rec: Recorder):
        self.hook = hook
        self.rec = rec

    def step(self, stage, block, rnd, sub, fn, s):
        return tap(self.hook, Boundary(stage, block, rnd, sub), fn(s))

    def smix(self, s, block, rnd, sub):
        sb = self.step("sbox", block, rnd, sub, fg.sbox_layer, s)
        s = self.step("supermix", block, rnd, sub, fg.supermix_layer, sb)
        ok = supermix_check(fg.words_to_bytes(sb[..., 0:4]), fg.words_to_bytes(s[..., 0:4]))
        self.rec.record("supermix", Boundary("supermix", block, rnd, sub), ~ok[..., None])
        return s

    def sigma_segment(self, s, kind, block, rnd, sub, steps, predicted=None):
        """Apply ``steps`` [(stage, fn)] and check sigma against the prediction."""
        if predicted is None:
            predicted = sigma(s)
        for stage, fn in steps:
            s = self.step(stage, block, rnd, sub, fn, s)
        self.rec.record(kind, Boundary(stage, block, rnd, sub), (sigma(s) != predicted)[..., None])
        return s

    def round(self, s, m, block):
        pred = trc_predict(s)
        s = self.sigma_segment(s, "trc", block, 0, 0, [
            ("tix", lambda x: fg.tix(x, m)),
            ("ror3", lambda x: fg.ror(x, 3)),
            ("cmix", fg.cmix),
        ], predicted=pred)
        s = self.smix(s, block, 0, 0)
        s = self.sigma_segment(s, "sigma", block, 0, 1, [
            ("ror3", lambda x: fg.ror(x, 3)),
            ("cmix", fg.cmix),
        ])
        return self.smix(s, block, 0, 1)

    def finalize(self, s, block):
        for k in range(10):
            s = self.sigma_segment(s, "final_sigma", block, k, 0, [
                ("ror3", lambda x: fg.ror(x, 3)),
                ("cmix", fg.cmix),
            ])
            s = self.smix(s, block, k, 0)
        for k in range(10, 23):
            s = self.sigma_segment(s, "final_sigma", block, k, 0, [
                ("fold", lambda x: fg.fold_step(x, 15)),
                ("ror15", lambda x: fg.ror(x, 15)),
            ])
            s = self.smix(s, block, k, 0)
            s = self.sigma_segment(s, "final_sigma", block, k, 1, [
                ("fold", lambda x: fg.fold_step(x, 16)),
                ("ror14", lambda x: fg.ror(x, 14)),
            ])
            s = self.smix(s, block, k, 1)
        return self.sigma_segment(s, "final_sigma", block, 23, 0, [
            ("fold", lambda x: fg.fold_step(x, 15)),
        ])


def guarded_round(s: np.ndarray, m, hook: Hook | None = None, block: int = 0,
                  recorder: Recorder | None = None):
    """Round R with the TRC, sigma and Super-Mix checks. Returns (state, report)."""
    s = np.asarray(s, dtype=np.uint32)
    rec = recorder or Recorder(s.shape[:-1], hook)
    return _Pipeline(hook, rec).round(s, m, block), rec.report


def guarded_finalize(s: np.ndarray, hook: Hook | None = None, block: int = 0,
                     recorder: Recorder | None = None):
    s = np.asarray(s, dtype=np.uint32)
    rec = recorder or Recorder(s.shape[:-1], hook)
    return _Pipeline(hook, rec).finalize(s, block), rec.report


def guarded_fugue_hash(message: bytes, bit_length: int | None = None, hook: Hook | None = None,
                       batch_shape: tuple = ()):
    """Fugue-256 with all checks. Returns ``(digest, report)``; see guarded_echo_hash."""
    batch_shape = tuple(batch_shape)
    s = np.broadcast_to(fg.initial_state(), batch_shape + (fg.N_WORDS,))
    rec = Recorder(batch_shape, hook)
    pipe = _Pipeline(hook, rec)
    words = fg.pad(message, bit_length)
    for i, m in enumerate(words):
        s = pipe.round(s, m, i)
    s = pipe.finalize(s, len(words))
    out = s[..., list(fg.OUTPUT_WORDS)]
    if not batch_shape:
        return fg.digest_from_state(s), rec.report
    digest = fg.words_to_bytes(out.reshape(batch_shape + (2, 4))).reshape(batch_shape + (32,))
    return digest, rec.report
