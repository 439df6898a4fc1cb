"""
SplitMix64 pseudo-random stream.

The generator state is a 64-bit integer advanced by the golden-ratio increment
0x9E3779B97F4A7C15; each output is the state passed through the standard
SplitMix64 finalizer (xor-shift 30, multiply 0xBF58476D1CE4E5B9, xor-shift 27,
multiply 0x94D049BB133111EB, xor-shift 31). Uniform doubles take the top 53
bits of an output: u = (x >> 11) * 2**-53, so u lies in [0, 1).

Sub-streams for benchmark trials are derived with ``derive_seed``: starting
from the root seed, every key k is folded in as
``state = finalize(state ^ (k * GOLDEN mod 2**64))``.
Any implementation following these rules reproduces the same instances.
"""
import math

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15


def _finalize(z: int) -> int:
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def derive_seed(seed: int, *keys: int) -> int:
    state = seed & MASK64
    for key in keys:
        state = _finalize(state ^ ((key * GOLDEN) & MASK64))
    return state


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + GOLDEN) & MASK64
        return _finalize(self.state)

    def uniform(self) -> float:
        return (self.next_u64() >> 11) * 2.0 ** -53

    def exponential(self) -> float:
        # 1 - u lies in (0, 1], so the logarithm is finite
        return -math.log(1.0 - self.uniform())
