"""32-bit external-feedback (Fibonacci) LFSR used to draw fault vectors.

Characteristic polynomial x^32 + x^22 + x^2 + x + 1 (primitive, so the
register cycles through all 2^32 - 1 nonzero states). Bit i of the register
holds s[n + i] of the sequence and the recurrence is

    s[n + 32] = s[n] ^ s[n + 1] ^ s[n + 2] ^ s[n + 22]
"""

from dataclasses import dataclass

TAPS = (0, 1, 2, 22)
POLYNOMIAL = (1 << 32) | (1 << 22) | (1 << 2) | (1 << 1) | 1
PERIOD = (1 << 32) - 1
_MASK = 0xFFFFFFFF


@dataclass(frozen=True)
class LfsrState:
    register: int

    def __post_init__(self):
        if not 0 < self.register <= _MASK:
            raise ValueError("LFSR register must be a nonzero 32-bit value")


def step(register: int) -> int:
    """Advance the register one bit."""
    fb = (register ^ (register >> 1) ^ (register >> 2) ^ (register >> 22)) & 1
    return (register >> 1) | (fb << 31)


def lfsr_next(state: LfsrState) -> tuple[LfsrState, int]:
    """Emit the next 32 sequence bits (first emitted in bit 0) and advance.

    The 32 bits about to leave the register are exactly the current
    register contents; 32 single steps then refill it.
    """
    reg = state.register
    word = reg
    for _ in range(32):
        reg = step(reg)
    return LfsrState(reg), word


class Lfsr:
    """Mutable convenience wrapper with a few draw helpers."""

    def __init__(self, seed: int):
        # a zero master seed is mapped to 1; LfsrState itself rejects zero
        self.state = LfsrState((seed & _MASK) or 1)

    def word(self) -> int:
        self.state, w = lfsr_next(self.state)
        return w

    def below(self, n: int) -> int:
        """Draw an integer in [0, n) by multiply-shift on one 32-bit word."""
        if n <= 0:
            raise ValueError("n must be positive")
        if n > 1 << 32:
            return ((self.word() << 32) | self.word()) * n >> 64
        return (self.word() * n) >> 32

    def bytes(self, n: int) -> bytes:
        out = bytearray()
        while len(out) < n:
            out += self.word().to_bytes(4, "little")
        return bytes(out[:n])


def trial_seed(master_seed: int, index: int) -> int:
    """Independent per-trial register derived from the master seed.

    The trial index is scrambled (odd-multiplier hash), XORed into the master
    seed and the result is pushed through 64 LFSR steps so neighbouring trials
    do not share leading output bits.
    """
    mixed = (master_seed ^ ((index + 1) * 0x9E3779B1)) & _MASK
    mixed ^= mixed >> 16
    mixed = (mixed * 0x85EBCA6B) & _MASK
    mixed ^= mixed >> 13
    reg = mixed or 1
    for _ in range(64):
        reg = step(reg)
    return reg
