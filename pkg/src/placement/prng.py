"""
Deterministic 64-bit number generation shared by ASURA and the baselines.

Everything here is SplitMix64: one tiny, portable generator whose output is
bit-exact across platforms and whose initialization costs a single assignment,
so a fresh generator per datum (and per cascade level) is cheap.
"""

from typing import Iterator, Union

MASK64 = 0xFFFFFFFFFFFFFFFF
GOLDEN_GAMMA = 0x9E3779B97F4A7C15
MIX_MUL_1 = 0xBF58476D1CE4E5B9
MIX_MUL_2 = 0x94D049BB133111EB
FLOAT_SCALE = 1.0 / (1 << 53)

Seed = int


def rotl64(x: int, k: int) -> int:
    """Rotate a 64-bit value left by ``k`` bits."""
    return ((x << k) | (x >> (64 - k))) & MASK64


def mix64(state: int) -> int:
    """One SplitMix64 round started from ``state``."""
    z = (state + GOLDEN_GAMMA) & MASK64
    z = ((z ^ (z >> 30)) * MIX_MUL_1) & MASK64
    z = ((z ^ (z >> 27)) * MIX_MUL_2) & MASK64
    return z ^ (z >> 31)


def seed_from(datum_id: int, salt: int) -> Seed:
    """
    Mix a datum id and a salt into a generator seed.

    Two SplitMix64 rounds over ``datum_id XOR rotl(salt, 32)``; flipping any
    input bit flips about half of the output bits.
    """
    return mix64(mix64((datum_id ^ rotl64(salt & MASK64, 32)) & MASK64))


class Generator:
    """
    SplitMix64 generator.

    The state is owned by the instance; two generators built from the same
    seed produce identical sequences.
    """

    __slots__ = ("state",)

    def __init__(self, seed: Seed):
        self.state = seed & MASK64

    def next_integer(self) -> int:
        """Advance and return a full-width 64-bit integer."""
        self.state = s = (self.state + GOLDEN_GAMMA) & MASK64
        z = ((s ^ (s >> 30)) * MIX_MUL_1) & MASK64
        z = ((z ^ (z >> 27)) * MIX_MUL_2) & MASK64
        return z ^ (z >> 31)

    def next_uniform(self) -> float:
        """Advance and return a float in [0.0, 1.0) built from the top 53 bits."""
        return (self.next_integer() >> 11) * FLOAT_SCALE

    def __iter__(self) -> Iterator[float]:
        while True:
            yield self.next_uniform()


def integer_at(seed: Seed, index: int) -> int:
    """
    The ``index``-th (0-based) output of ``Generator(seed).next_integer()``.

    SplitMix64's state is a plain counter, so any position of the stream can
    be read without generating the ones before it.
    """
    return mix64((seed + index * GOLDEN_GAMMA) & MASK64)


def key_to_id(key: Union[str, bytes]) -> int:
    """
    Fold a string key into a 64-bit datum id.

    The UTF-8 bytes are zero-padded to a multiple of 8 and folded 8 bytes at a
    time (little endian) through ``seed_from``, starting from the byte length.
    """
    data = key.encode("utf-8") if isinstance(key, str) else bytes(key)
    acc = len(data)
    padded = data + b"\x00" * (-len(data) % 8)
    for offset in range(0, len(padded), 8):
        acc = seed_from(acc, int.from_bytes(padded[offset:offset + 8], "little"))
    return acc


def synthetic_ids(count: int, seed: int = 0) -> Iterator[int]:
    """Reproducible corpus of ``count`` datum ids: sequential integers mixed with ``seed``."""
    for i in range(count):
        yield seed_from(i, seed)
