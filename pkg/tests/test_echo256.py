import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import DATA
from hashguard import echo256
from hashguard.aes_core import aes_round, mix_columns
from hashguard.echo256 import (EchoParams, big_final, big_mixcolumns, big_shiftrows, big_subwords,
                               compress512, echo_hash, from_byte_matrix, pad_and_split,
                               round_keys, to_byte_matrix)
from hashguard.echo_guard import big_mc_flags
from hashguard.kat import read_kat

KAT = read_kat(DATA / "echo256_kat.txt")


def rand_state(rng, *batch):
    return rng.integers(0, 256, size=batch + (16, 16), dtype=np.uint8)


def test_empty_message_digest():
    assert echo_hash(b"").hex().upper() == KAT[0].md.hex().upper()
    assert KAT[0].bit_length == 0


@pytest.mark.parametrize("entry", KAT, ids=lambda e: f"len{e.bit_length}")
def test_kat(entry):
    assert echo_hash(entry.message, bit_length=entry.bit_length) == entry.md


def test_compress512_reference_vectors():
    vectors = json.loads((DATA / "compress512_vectors.json").read_text())["vectors"]
    for v in vectors:
        v_prev = np.frombuffer(bytes.fromhex(v["v_prev"]), np.uint8).reshape(4, 16)
        m = np.frombuffer(bytes.fromhex(v["m"]), np.uint8).reshape(12, 16)
        out = compress512(v_prev, m, EchoParams(counter=v["counter"]))
        assert bytes(out).hex() == v["v_next"]


@pytest.mark.parametrize("bits", [0, 1, 7, 8, 1383, 1384, 1385, 1391, 1392, 1400, 1535, 1536,
                                  1537, 3000, 3072, 4607])
def test_block_count(bits):
    msg = bytes((bits + 7) // 8)
    blocks = pad_and_split(msg, bits)
    # message bits + pad bit rounded up to a byte, then 2 + 16 trailer bytes
    expect = math.ceil((8 * math.ceil((bits + 1) / 8) + 144) / 1536)
    assert len(blocks) == expect


def test_padding_examples():
    assert len(pad_and_split(b"")) == 1
    assert len(pad_and_split(bytes(192))) == 2
    blocks = pad_and_split(b"\xab")
    block, counter = blocks[0]
    flat = bytes(block.reshape(-1))
    assert flat[0] == 0xAB and flat[1] == 0x80
    assert flat[174:176] == (256).to_bytes(2, "little")
    assert flat[176:] == (8).to_bytes(16, "little")
    assert counter == 8


def test_counters():
    blocks = pad_and_split(bytes(400))
    assert [c for _, c in blocks] == [1536, 3072, 3200]
    # tail that spills into an extra block: the extra block holds no message bits
    blocks = pad_and_split(bytes(180))
    assert [c for _, c in blocks] == [1440, 0]


def test_partial_byte_padding():
    block, _ = pad_and_split(b"\xff", 3)[0]
    assert block.reshape(-1)[0] == 0b11110000
    with pytest.raises(ValueError):
        pad_and_split(b"", 1)


def test_byte_matrix_round_trip(rng):
    s = rand_state(rng, 5)
    assert np.array_equal(from_byte_matrix(to_byte_matrix(s)), s)
    m = to_byte_matrix(s[0])
    assert m.shape == (4, 64)
    # byte b of word (row r, col c) sits at row r, column 16c + b
    assert m[2, 16 * 3 + 5] == s[0, 4 * 3 + 2, 5]


def test_round_keys_counter_and_salt():
    salt = bytes(range(16))
    k1, k2 = round_keys(EchoParams(salt=salt, counter=(1 << 64) - 3), 2)
    for n in range(16):
        assert int.from_bytes(bytes(k1[n]), "little") == (1 << 64) - 3 + 32 + n
        assert bytes(k2[n]) == salt


def test_big_subwords_is_two_aes_rounds(rng):
    s = rand_state(rng)
    params = EchoParams(salt=bytes(rng.integers(0, 256, 16, dtype=np.uint8)), counter=12345)
    out = big_subwords(s, params, 3)
    k1, k2 = round_keys(params, 3)
    for n in range(16):
        assert np.array_equal(out[n], aes_round(aes_round(s[n], k1[n]), k2[n]))
    assert not np.array_equal(out, s)


def test_big_subwords_equal_words_equal_keys(rng):
    s = np.broadcast_to(rng.integers(0, 256, 16, dtype=np.uint8), (16, 16)).copy()
    a = big_subwords(s, EchoParams(), 0)
    b = big_subwords(s, EchoParams(), 0)
    assert np.array_equal(a, b)


def test_big_shiftrows(rng):
    s = rand_state(rng)
    out = big_shiftrows(s)
    for col in range(4):
        for row in range(4):
            assert np.array_equal(out[4 * col + row], s[4 * ((col + row) % 4) + row])
    assert np.array_equal(out[0::4], s[0::4])
    same = np.broadcast_to(s[0], (16, 16))
    assert np.array_equal(big_shiftrows(same), same)


def test_big_mixcolumns_column_oracle(rng):
    s = rand_state(rng)
    out = to_byte_matrix(big_mixcolumns(s))
    view = to_byte_matrix(s)
    for j in range(16):
        block = view[:, 4 * j:4 * j + 4].T.reshape(-1)  # four columns as one AES state
        assert np.array_equal(out[:, 4 * j:4 * j + 4].T.reshape(-1), mix_columns(block))
    assert not big_mixcolumns(np.zeros((16, 16), np.uint8)).any()
    flat = np.full((16, 16), 0x3C, np.uint8)
    assert np.array_equal(big_mixcolumns(flat), flat)


def test_big_final_fold_oracle(rng):
    a, b = rand_state(rng, 2)
    v = big_final(a, b)
    for j in range(4):
        expect = np.zeros(16, np.uint8)
        for k in range(4):
            expect ^= a[4 * k + j] ^ b[4 * k + j]
        assert np.array_equal(v[j], expect)
    d, e = rand_state(rng, 2)
    assert np.array_equal(big_final(a ^ d, b ^ e), big_final(a, b) ^ big_final(d, e))
    assert not big_final(np.zeros((16, 16), np.uint8), np.zeros((16, 16), np.uint8)).any()


def test_compress512_batched_matches_single(rng):
    v = rng.integers(0, 256, size=(3, 4, 16), dtype=np.uint8)
    m = rng.integers(0, 256, size=(3, 12, 16), dtype=np.uint8)
    params = EchoParams(counter=99)
    batched = compress512(v, m, params)
    for i in range(3):
        assert np.array_equal(batched[i], compress512(v[i], m[i], params))


def test_compress512_avalanche(rng):
    v = rng.integers(0, 256, size=(4, 16), dtype=np.uint8)
    m = rng.integers(0, 256, size=(12, 16), dtype=np.uint8)
    params = EchoParams(counter=1536)
    base = compress512(v, m, params)
    flips = np.repeat(m[None], 1000, axis=0)
    pos = rng.choice(12 * 16 * 8, size=1000, replace=False)
    for i, p in enumerate(pos):
        flips[i, p // 128, (p // 8) % 16] ^= 1 << (p % 8)
    out = compress512(v, flips, params)
    assert np.all(np.any(out != base, axis=(-1, -2)))


def test_column_sums_hold_every_round_of_kat_runs():
    for entry in KAT[::40]:
        v = echo256.initial_chaining_value()
        for block, counter in pad_and_split(entry.message, entry.bit_length):
            params = EchoParams(counter=counter)
            s = echo256.assemble_state(v, block)
            initial = s
            for r in range(echo256.N_BIG_ROUNDS):
                s = big_shiftrows(big_subwords(s, params, r))
                out = big_mixcolumns(s)
                assert not big_mc_flags(s, out).any()
                s = out
            v = big_final(initial, s)
        assert echo256.digest_from_chaining(v) == entry.md


def test_salt_changes_digest():
    assert echo_hash(b"abc") == echo_hash(b"abc", salt=bytes(16))
    assert echo_hash(b"abc") != echo_hash(b"abc", salt=b"\x01" + bytes(15))


@settings(max_examples=25, deadline=None)
@given(st.binary(max_size=300), st.data())
def test_single_bit_change_changes_digest(msg, data):
    if not msg:
        return
    bit = data.draw(st.integers(0, 8 * len(msg) - 1))
    flipped = bytearray(msg)
    flipped[bit // 8] ^= 0x80 >> (bit % 8)
    assert echo_hash(msg) != echo_hash(bytes(flipped))
    assert echo_hash(msg) == echo_hash(msg)


def test_params_validation():
    with pytest.raises(ValueError):
        EchoParams(salt=bytes(15))
    with pytest.raises(ValueError):
        EchoParams(h_size=512)
    with pytest.raises(ValueError):
        EchoParams(counter=-1)
