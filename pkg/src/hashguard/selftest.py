"""Static and randomized identity suites behind ``hashguard selftest``.

Every suite compares the production code against an independent recomputation
or a pinned constant; a failing suite means a check could fire on fault-free
data (or miss by construction) and campaign numbers would be meaningless.
"""

from dataclasses import dataclass

import numpy as np

from . import echo256, fugue256
from .aes_core import mix_columns
from .echo256 import EchoParams
from .echo_guard import big_final_parity_check, big_mc_flags
from .fugue_guard import column_sums, sigma, supermix_parity_predict
from .gf256 import mul_table

EXPECTED_COLUMN_SUMS = np.array([3 if c in (0, 5, 10, 15) else 0 for c in range(16)],
                                dtype=np.uint8)


@dataclass(frozen=True)
class SuiteResult:
    name: str
    passed: bool
    cases: int
    seed: int
    detail: str = ""


def schoolbook_mul(a: int, b: int) -> int:
    """Carry-less product followed by long division by x^8+x^4+x^3+x+1."""
    p = 0
    for i in range(8):
        if (b >> i) & 1:
            p ^= a << i
    for bit in range(14, 7, -1):
        if (p >> bit) & 1:
            p ^= 0x11B << (bit - 8)
    return p


def suite_gf256(seed: int, samples: int) -> SuiteResult:
    table = mul_table()
    oracle = np.array([[schoolbook_mul(a, b) for b in range(256)] for a in range(256)],
                      dtype=np.uint8)
    bad = int(np.count_nonzero(table != oracle))
    return SuiteResult("gf256 oracle agreement", bad == 0, 65536, seed,
                       f"{bad} mismatching pairs" if bad else "")


def suite_mix_columns(seed: int, samples: int) -> SuiteResult:
    rng = np.random.default_rng(seed)
    s = rng.integers(0, 256, size=(samples, 16), dtype=np.uint8)
    out = mix_columns(s)
    lhs = np.bitwise_xor.reduce(s.reshape(-1, 4, 4), axis=-1)
    rhs = np.bitwise_xor.reduce(out.reshape(-1, 4, 4), axis=-1)
    bad = int(np.count_nonzero(np.any(lhs != rhs, axis=-1)))
    return SuiteResult("MixColumns column sums", bad == 0, samples, seed,
                       f"{bad} states broke the identity" if bad else "")


def suite_supermix_columns(seed: int, samples: int, matrix=None) -> SuiteResult:
    matrix = fugue256.SUPER_MIX if matrix is None else np.asarray(matrix, dtype=np.uint8)
    got = column_sums(matrix)
    ok = bool(np.array_equal(got, EXPECTED_COLUMN_SUMS))
    return SuiteResult("Super-Mix column sums", ok, 1, seed,
                       "" if ok else f"got {got.tolist()}")


def suite_trc(seed: int, samples: int) -> SuiteResult:
    rng = np.random.default_rng(seed)
    s = rng.integers(0, 1 << 32, size=(samples, 30), dtype=np.uint32)
    m = rng.integers(0, 1 << 32, size=(samples,), dtype=np.uint32)
    post = fugue256.cmix(fugue256.ror(fugue256.tix(s, m), 3))
    bad = int(np.count_nonzero(sigma(post) != (sigma(s) ^ s[:, 24])))
    return SuiteResult("TIX-ROR3-CMIX signature", bad == 0, samples, seed,
                       f"{bad} states broke the identity" if bad else "")


def suite_supermix_parity(seed: int, samples: int) -> SuiteResult:
    rng = np.random.default_rng(seed)
    x = rng.integers(0, 256, size=(samples, 16), dtype=np.uint8)
    fold = np.bitwise_xor.reduce(fugue256.super_mix(x), axis=-1)
    bad = int(np.count_nonzero(fold != supermix_parity_predict(x)))
    return SuiteResult("Super-Mix predicted parity", bad == 0, samples, seed,
                       f"{bad} inputs broke the identity" if bad else "")


def suite_big_final_parity(seed: int, samples: int) -> SuiteResult:
    rng = np.random.default_rng(seed)
    n = max(1, samples // 100)
    v = rng.integers(0, 256, size=(n, 4, 16), dtype=np.uint8)
    m = rng.integers(0, 256, size=(n, 12, 16), dtype=np.uint8)
    params = EchoParams(salt=bytes(rng.integers(0, 256, 16, dtype=np.uint8)),
                        counter=int(rng.integers(0, 1 << 62)))
    initial = echo256.assemble_state(v, m)
    s = initial
    bad_mc = 0
    for r in range(echo256.N_BIG_ROUNDS):
        s = echo256.big_shiftrows(echo256.big_subwords(s, params, r))
        out = echo256.big_mixcolumns(s)
        bad_mc += int(np.count_nonzero(big_mc_flags(s, out)))
        s = out
    v_next = echo256.big_final(initial, s)
    bad = int(np.count_nonzero(~big_final_parity_check(v, m, s, v_next))) + bad_mc
    return SuiteResult("BIG.MixColumns flags and BIG.Final parity", bad == 0, n, seed,
                       f"{bad} compressions raised a flag" if bad else "")


SUITES = (suite_gf256, suite_mix_columns, suite_supermix_columns, suite_trc,
          suite_supermix_parity, suite_big_final_parity)


def run_selftest(seed: int = 1, samples: int = 10_000, matrix=None) -> list[SuiteResult]:
    results = []
    for i, suite in enumerate(SUITES):
        if suite is suite_supermix_columns:
            results.append(suite(seed + i, samples, matrix))
        else:
            results.append(suite(seed + i, samples))
    return results
