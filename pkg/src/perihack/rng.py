"""Deterministic game randomness.

Every die roll, shuffle and draw in a match comes from one `GameRng` stream so
that a (seed, action sequence) pair always replays to the identical game. The
generator is splitmix64 with multiply-shift range reduction: pure integer
arithmetic, identical on every platform, and the state is a single integer
that can be snapshotted into a game state or a JSON transcript.
"""

from __future__ import annotations

_MASK64 = 0xFFFFFFFFFFFFFFFF
_GAMMA = 0x9E3779B97F4A7C15


def splitmix64_next(state: int) -> tuple[int, int]:
    """Advance one splitmix64 step; returns (new_state, output word)."""
    state = (state + _GAMMA) & _MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return state, z ^ (z >> 31)


class GameRng:
    """Seeded stream used by the rules engine.

    Range reduction is the multiply-shift trick: `(word * n) >> 64`. The bias
    is at most n / 2**64, far below anything a d20 game can observe, and it
    keeps the compiled and pure kernels bit-for-bit identical.
    """

    __slots__ = ("_state",)

    def __init__(self, seed: int) -> None:
        self._state = seed & _MASK64

    @property
    def state(self) -> int:
        return self._state

    @classmethod
    def from_state(cls, state: int) -> "GameRng":
        rng = cls(0)
        rng._state = state & _MASK64
        return rng

    def next_u64(self) -> int:
        self._state, word = splitmix64_next(self._state)
        return word

    def randrange(self, n: int) -> int:
        if n <= 0:
            raise ValueError("randrange() requires n >= 1")
        return (self.next_u64() * n) >> 64

    def randint(self, a: int, b: int) -> int:
        return a + self.randrange(b - a + 1)

    def d20(self) -> int:
        return self.randrange(20) + 1

    def choice(self, seq):
        if not seq:
            raise IndexError("choice() on empty sequence")
        return seq[self.randrange(len(seq))]

    def random(self) -> float:
        return self.next_u64() / 2**64

    def shuffle(self, items: list) -> None:
        for i in range(len(items) - 1, 0, -1):
            j = self.randrange(i + 1)
            items[i], items[j] = items[j], items[i]

    def spawn(self, salt: int) -> "GameRng":
        """Derive an independent stream, e.g. one per AI policy."""
        return GameRng(self.next_u64() ^ (salt & _MASK64))
