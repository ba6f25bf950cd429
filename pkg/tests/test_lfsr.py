import pytest
from hypothesis import given
from hypothesis import strategies as st

from hashguard.lfsr import PERIOD, POLYNOMIAL, Lfsr, LfsrState, lfsr_next, step, trial_seed


def recurrence_bits(seed: int, n: int) -> list[int]:
    """s[k+32] = s[k] ^ s[k+1] ^ s[k+2] ^ s[k+22], with s[0..31] the seed bits."""
    s = [(seed >> i) & 1 for i in range(32)]
    while len(s) < n:
        k = len(s) - 32
        s.append(s[k] ^ s[k + 1] ^ s[k + 2] ^ s[k + 22])
    return s[:n]


def polymulmod(a: int, b: int, m: int) -> int:
    deg = m.bit_length() - 1
    r = 0
    while b:
        if b & 1:
            r ^= a
        b >>= 1
        a <<= 1
        if a >> deg & 1:
            a ^= m
    return r


def polypow(e: int, m: int) -> int:
    r, x = 1, 2
    while e:
        if e & 1:
            r = polymulmod(r, x, m)
        x = polymulmod(x, x, m)
        e >>= 1
    return r


def test_polynomial_is_primitive():
    assert polypow(PERIOD, POLYNOMIAL) == 1
    for q in (3, 5, 17, 257, 65537):
        assert PERIOD % q == 0
        assert polypow(PERIOD // q, POLYNOMIAL) != 1


def test_words_match_bit_serial_recurrence():
    bits = recurrence_bits(1, 32 * 12)
    state = LfsrState(1)
    for i in range(12):
        state, word = lfsr_next(state)
        assert word == sum(b << j for j, b in enumerate(bits[32 * i:32 * i + 32]))


def test_deterministic():
    a, b = Lfsr(0xACE1), Lfsr(0xACE1)
    assert [a.word() for _ in range(100)] == [b.word() for _ in range(100)]


def test_no_repeat_within_a_million_steps():
    seen = set()
    reg = 1
    for _ in range(1_000_000):
        assert reg not in seen and reg != 0
        seen.add(reg)
        reg = step(reg)


def test_zero_register_rejected():
    with pytest.raises(ValueError):
        LfsrState(0)
    with pytest.raises(ValueError):
        LfsrState(1 << 32)
    assert Lfsr(0).state.register == 1


@given(st.integers(1, 10_000))
def test_below_range(n):
    rng = Lfsr(n)
    for _ in range(20):
        assert 0 <= rng.below(n) < n


def test_below_rejects_nonpositive():
    with pytest.raises(ValueError):
        Lfsr(1).below(0)


def test_bytes_length():
    assert len(Lfsr(3).bytes(0)) == 0
    assert len(Lfsr(3).bytes(13)) == 13


def test_trial_seeds_distinct_and_nonzero():
    seeds = [trial_seed(1, i) for i in range(10_000)]
    assert len(set(seeds)) == len(seeds)
    assert all(0 < s < 1 << 32 for s in seeds)
    assert trial_seed(1, 5) != trial_seed(2, 5)
