"""Dice kernel checks against an independent face-enumeration oracle."""

from __future__ import annotations

from hypothesis import given, strategies as st

from perihack import kernels
from perihack import _resolution_py as pure
from perihack.rng import GameRng


def enumerated_probability(attack_bonus: int, defense_bonus: int, repeat: int) -> float:
    """Oracle: walk all 20 faces and count the winners."""
    wins = 0
    for roll in range(1, 21):
        if roll + attack_bonus > 10 + defense_bonus + repeat:
            wins += 1
    return wins / 20


def test_closed_form_matches_enumeration_over_grid():
    for a in range(-5, 11):
        for d in range(-5, 11):
            for repeat in (0, 1):
                assert kernels.success_probability(a, d, repeat) == enumerated_probability(
                    a, d, repeat
                )


def test_spot_values():
    assert kernels.success_probability(0, 0, 0) == 0.5
    assert kernels.success_probability(3, 2, 0) == 0.55
    assert kernels.success_probability(-10, 10, 0) == 0.0


@given(
    st.integers(min_value=-30, max_value=30),
    st.integers(min_value=-30, max_value=30),
    st.integers(min_value=0, max_value=1),
)
def test_closed_form_matches_enumeration_everywhere(a, d, repeat):
    assert kernels.success_probability(a, d, repeat) == enumerated_probability(a, d, repeat)


@given(
    st.integers(min_value=-20, max_value=20),
    st.integers(min_value=-20, max_value=20),
)
def test_monotonicity(a, d):
    p = kernels.success_probability(a, d, 0)
    assert kernels.success_probability(a + 1, d, 0) >= p
    assert kernels.success_probability(a, d + 1, 0) <= p
    assert kernels.success_probability(a, d, 1) <= p


def test_probability_bounds_and_ties_lose():
    # attack_total == defense_total must not count as a win: with a == d and
    # repeat 0 the threshold face (exactly 10 + d - a = 10) loses.
    for a in range(-5, 11):
        p = kernels.success_probability(a, a, 0)
        assert p == 0.5  # faces 11..20 shifted by equal bonuses still lose ties
        assert 0.0 <= p <= 1.0


def test_pure_and_selected_backends_agree():
    for a in (-5, -1, 0, 2, 7, 10):
        for d in (-5, 0, 3, 10):
            assert kernels.success_probability(a, d, 0) == pure.success_probability(a, d, 0)
            assert kernels.winning_faces(a, d, 1) == pure.winning_faces(a, d, 1)
            got = kernels.simulate_successes(a, d, 0, 2000, seed=17)
            assert got == pure.simulate_successes(a, d, 0, 2000, seed=17)
    assert kernels.probability_grid(-3, 3) == pure.probability_grid(-3, 3)


def test_simulator_uses_the_engine_die():
    """The Monte-Carlo kernel must draw the same d20 stream as GameRng."""
    seed = 20260809
    rng = GameRng(seed)
    a, d = 3, 2
    expected = sum(1 for _ in range(5000) if rng.d20() + a > 10 + d)
    assert pure.simulate_successes(a, d, 0, 5000, seed) == expected
    assert kernels.simulate_successes(a, d, 0, 5000, seed) == expected


def test_monte_carlo_tracks_closed_form():
    for a, d in [(0, 0), (3, 2), (-5, 10), (10, -5), (2, 5)]:
        p = kernels.success_probability(a, d, 0)
        hits = kernels.simulate_successes(a, d, 0, 10_000, seed=4242 + a * 31 + d)
        assert abs(hits / 10_000 - p) < 0.02
