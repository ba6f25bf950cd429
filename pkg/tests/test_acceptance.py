"""Acceptance criteria, one verdict line each (shown in the pytest summary).

Thresholds are pinned here; none of them is tuned to the measured numbers.
"""

import time

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES, DATA
from hashguard import echo256
from hashguard import fugue256 as fg
from hashguard.echo256 import EchoParams, compress512, echo_hash
from hashguard.echo_guard import final_parity_mismatch, guarded_compress512
from hashguard.faultsim import CampaignConfig, run_campaign, single_bit_sweep
from hashguard.fugue_guard import column_sums, sigma, supermix_parity_predict
from hashguard.kat import read_kat

SEED = 20240611
KAT_MIN_ENTRIES = 64
IDENTITY_SAMPLES = 100_000
GUARDED_SAMPLES = 10_000
PARITY_SAMPLES = 1_000
CAMPAIGN_FAULTS = 80_000
COVERAGE_FLOOR = 0.99
CAMPAIGN_SECONDS = 300.0
FALSE_ALARM_CEILING = 0.01


def verdict(number, name, ok, detail):
    ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] {number}. {name}: {detail}")
    assert ok, detail


@pytest.fixture(scope="module")
def campaigns():
    out = {}
    for alg in ("echo256", "fugue256"):
        t0 = time.perf_counter()
        report = run_campaign(CampaignConfig(alg, model="multiple", persistence="transient",
                                             count=CAMPAIGN_FAULTS, seed=SEED))
        out[alg] = (report, time.perf_counter() - t0)
    return out


def test_1_kat_conformance():
    details, ok = [], True
    for alg, fn in (("echo256", echo_hash), ("fugue256", fg.fugue_hash)):
        entries = read_kat(DATA / f"{alg}_kat.txt")
        good = sum(fn(e.message, bit_length=e.bit_length) == e.md for e in entries)
        first = all(fn(e.message, bit_length=e.bit_length) == e.md
                    for e in entries[:KAT_MIN_ENTRIES])
        ok &= first and len(entries) >= KAT_MIN_ENTRIES
        details.append(f"{alg} {good}/{len(entries)}")
    verdict(1, "KAT conformance", ok, ", ".join(details))


def test_2_trc_identity():
    rng = np.random.default_rng(SEED)
    s = rng.integers(0, 1 << 32, size=(IDENTITY_SAMPLES, 30), dtype=np.uint32)
    m = rng.integers(0, 1 << 32, size=IDENTITY_SAMPLES, dtype=np.uint32)
    post = fg.cmix(fg.ror(fg.tix(s, m), 3))
    bad = int(np.count_nonzero(sigma(post) != sigma(s) ^ s[:, 24]))
    verdict(2, "TIX-ROR3-CMIX signature identity", bad == 0,
            f"{bad} mismatches over {IDENTITY_SAMPLES} (state, m) pairs")


def test_3_supermix_identity():
    rng = np.random.default_rng(SEED + 1)
    x = rng.integers(0, 256, size=(IDENTITY_SAMPLES, 16), dtype=np.uint8)
    fold = np.bitwise_xor.reduce(fg.super_mix(x), axis=-1)
    bad = int(np.count_nonzero(fold != supermix_parity_predict(x)))
    sums = column_sums(fg.SUPER_MIX).tolist()
    pattern = sums == [3 if c in (0, 5, 10, 15) else 0 for c in range(16)]
    verdict(3, "Super-Mix predicted parity", bad == 0 and pattern,
            f"{bad} mismatches over {IDENTITY_SAMPLES} inputs; column sums {sums}")


def test_4_no_false_positives():
    rng = np.random.default_rng(SEED + 2)
    v = rng.integers(0, 256, size=(GUARDED_SAMPLES, 4, 16), dtype=np.uint8)
    m = rng.integers(0, 256, size=(GUARDED_SAMPLES, 12, 16), dtype=np.uint8)
    params = EchoParams(salt=bytes(rng.integers(0, 256, 16, dtype=np.uint8)), counter=1536)
    out, report = guarded_compress512(v, m, params)
    fired = {k: int(np.count_nonzero(r)) for k, r in report.by_check.items()}
    ok = fired["mc_ark"] == 0 and fired["big_mix_columns"] == 0 and \
        np.array_equal(out, compress512(v, m, params))
    verdict(4, "fault-free guarded compressions", ok,
            f"{GUARDED_SAMPLES} compressions, flags fired per check {fired}")


def test_5_big_final_parity():
    rng = np.random.default_rng(SEED + 3)
    params = EchoParams(counter=3072)
    v = rng.integers(0, 256, size=(PARITY_SAMPLES, 4, 16), dtype=np.uint8)
    m = rng.integers(0, 256, size=(PARITY_SAMPLES, 12, 16), dtype=np.uint8)
    initial = echo256.assemble_state(v, m)
    a = initial
    for r in range(echo256.N_BIG_ROUNDS):
        a = echo256.big_mixcolumns(echo256.big_shiftrows(echo256.big_subwords(a, params, r)))
    clean_fail = int(np.count_nonzero(
        final_parity_mismatch(v, m, a, echo256.big_final(initial, a)).any(axis=-1)))

    faulty = np.repeat(a[:1], 2048, axis=0)
    for b in range(2048):
        faulty[b, b // 128, (b // 8) % 16] ^= 1 << (b % 8)
    v_next = echo256.big_final(initial[0], faulty)
    caught = int(np.count_nonzero(final_parity_mismatch(v[0], m[0], a[0], v_next).any(axis=-1)))
    verdict(5, "BIG.Final parity", clean_fail == 0 and caught == 2048,
            f"{clean_fail}/{PARITY_SAMPLES} fault-free failures, "
            f"{caught}/2048 single-bit flips of the eighth BIG.MixColumns output caught")


@pytest.mark.parametrize("alg", ["echo256", "fugue256"])
def test_6_campaign_coverage(campaigns, alg):
    report, seconds = campaigns[alg]
    ok = report.coverage is not None and report.coverage > COVERAGE_FLOOR and \
        seconds < CAMPAIGN_SECONDS
    verdict(6, f"{alg} {CAMPAIGN_FAULTS} multiple-bit transient faults", ok,
            f"coverage {report.coverage:.5f} ({report.detected_effective}/{report.effective} "
            f"effective), {seconds:.1f}s")


@pytest.mark.parametrize("alg", ["echo256", "fugue256"])
def test_7_single_fault_floor(alg):
    t0 = time.perf_counter()
    faults, effective, detected = single_bit_sweep(alg, b"single-bit sweep", block=0)
    caught = int(np.count_nonzero(detected & effective))
    scope = "one compression" if alg == "echo256" else "one round"
    verdict(7, f"{alg} exhaustive single-bit sweep ({scope})", caught == int(effective.sum()),
            f"{caught}/{int(effective.sum())} effective of {len(faults)} activated faults "
            f"detected, {time.perf_counter() - t0:.1f}s")


@pytest.mark.parametrize("alg", ["echo256", "fugue256"])
def test_8_false_alarms(campaigns, alg):
    report, _ = campaigns[alg]
    d = report.to_dict()
    both = "false_alarm_ratio" in d and "false_alarm_ratio_activated" in d
    ok = both and report.false_alarm_ratio < FALSE_ALARM_CEILING
    verdict(8, f"{alg} false-alarm ratios", ok,
            f"per injected {report.false_alarm_ratio:.5f}, "
            f"per activated {report.false_alarm_ratio_activated:.5f}")


def test_9_hardware_table_not_reproduced():
    ACCEPTANCE_LINES.append("[N/A ] 9. ASIC area/frequency/throughput table: not reproducible "
                            "in software; no substitute measurement is claimed")
