"""Seedable random stream: SplitMix64 seeding a xoshiro256** generator.

Both algorithms are public-domain and fully specified, so any independent
implementation fed the same 64-bit seed reproduces the stream bit for bit.
All in-game randomness (enemy walks, level generation) flows through one
``Rng`` so replays are exact.
"""

from __future__ import annotations

_MASK64 = (1 << 64) - 1


def splitmix64(state: int) -> tuple[int, int]:
    """One SplitMix64 step; returns (next_state, output)."""
    state = (state + 0x9E3779B97F4A7C15) & _MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return state, z ^ (z >> 31)


def _rotl(x: int, k: int) -> int:
    return ((x << k) | (x >> (64 - k))) & _MASK64


class Rng:
    """xoshiro256** stream whose four state words are seeded via SplitMix64.

    The state round-trips through :meth:`state` / :meth:`from_state` so a
    saved session resumes mid-stream without perturbing the sequence.
    """

    __slots__ = ("_s",)

    def __init__(self, seed: int) -> None:
        sm = seed & _MASK64
        words = []
        for _ in range(4):
            sm, word = splitmix64(sm)
            words.append(word)
        self._s = words

    def next_u64(self) -> int:
        s0, s1, s2, s3 = self._s
        result = (_rotl((s1 * 5) & _MASK64, 7) * 9) & _MASK64
        t = (s1 << 17) & _MASK64
        s2 ^= s0
        s3 ^= s1
        s1 ^= s2
        s0 ^= s3
        s2 ^= t
        s3 = _rotl(s3, 45)
        self._s = [s0, s1, s2, s3]
        return result

    def randrange(self, n: int) -> int:
        """Uniform integer in [0, n).

        Rejection sampling below the largest multiple of n, so the result is
        unbiased and the draw rule is reproducible from this description.
        """
        if n <= 0:
            raise ValueError(f"randrange bound must be positive, got {n}")
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            u = self.next_u64()
            if u < limit:
                return u % n

    def choice(self, seq):
        if not seq:
            raise ValueError("choice from empty sequence")
        return seq[self.randrange(len(seq))]

    def uniform(self, lo: float, hi: float) -> float:
        """Float in [lo, hi): top 53 bits of one draw scaled to [0, 1)."""
        unit = (self.next_u64() >> 11) * 2.0**-53
        return lo + (hi - lo) * unit

    def shuffle(self, items: list) -> None:
        """In-place Fisher-Yates, back to front."""
        for i in range(len(items) - 1, 0, -1):
            j = self.randrange(i + 1)
            items[i], items[j] = items[j], items[i]

    def state(self) -> tuple[int, int, int, int]:
        return tuple(self._s)

    @classmethod
    def from_state(cls, words) -> "Rng":
        if len(words) != 4:
            raise ValueError("rng state must be four 64-bit words")
        rng = cls.__new__(cls)
        rng._s = [int(w) & _MASK64 for w in words]
        return rng

    def clone(self) -> "Rng":
        return Rng.from_state(self._s)
