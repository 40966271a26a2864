"""Pure-Python dice-resolution kernel.

Fallback for `perihack._resolution` (the Cython build of the same functions).
`perihack.kernels` picks whichever is importable; both must stay bit-for-bit
identical, which the parity tests enforce.

An attack roll succeeds when

    roll + attack_bonus > 10 + defense_bonus + repeat_penalty

with the roll uniform over 1..20, so the success chance is the clamped count
of winning faces divided by 20.
"""

from __future__ import annotations

from .rng import splitmix64_next

BACKEND = "python"


def winning_faces(attack_bonus: int, defense_bonus: int, repeat: int = 0) -> int:
    faces = 20 - (10 + defense_bonus + repeat - attack_bonus)
    if faces < 0:
        return 0
    if faces > 20:
        return 20
    return faces


def success_probability(attack_bonus: int, defense_bonus: int, repeat: int = 0) -> float:
    return winning_faces(attack_bonus, defense_bonus, repeat) / 20.0


def simulate_successes(
    attack_bonus: int, defense_bonus: int, repeat: int, n: int, seed: int
) -> int:
    """Count successes over n seeded d20 resolutions.

    Uses the same splitmix64 + multiply-shift d20 as the engine's GameRng, so
    a Monte-Carlo batch here is exactly n engine die draws.
    """
    state = seed & 0xFFFFFFFFFFFFFFFF
    threshold = 10 + defense_bonus + repeat - attack_bonus
    hits = 0
    for _ in range(n):
        state, word = splitmix64_next(state)
        roll = ((word * 20) >> 64) + 1
        if roll > threshold:
            hits += 1
    return hits


def probability_grid(
    min_bonus: int, max_bonus: int, repeat: int = 0
) -> list[list[float]]:
    """Success probability for every (attack_bonus, defense_bonus) pair.

    Rows iterate attack bonus, columns defense bonus, both over
    [min_bonus, max_bonus] inclusive.
    """
    span = range(min_bonus, max_bonus + 1)
    return [[success_probability(a, d, repeat) for d in span] for a in span]
