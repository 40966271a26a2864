from __future__ import annotations

from dataclasses import replace

import pytest

from perihack.catalog import (
    AttackCardSpec,
    Counter,
    DefenseCardSpec,
    LocationSpec,
    Prerequisite,
    Satisfier,
    ScenarioCatalog,
    WinConditionSpec,
    default_catalog,
)
from perihack.engine import GameState


@pytest.fixture(scope="session")
def stock():
    return default_catalog()


def attack(id, bonus=0, targets=("site",), prereq=None, binding="any", copies=3, kind="attack"):
    prerequisite = None
    if prereq is not None:
        if isinstance(prereq, str):
            prereq = [prereq]
        prerequisite = Prerequisite(tuple(prereq), binding)
    return AttackCardSpec(
        id=id,
        name=id,
        copies=copies,
        attack_bonus=bonus,
        targets=tuple(targets),
        prerequisite=prerequisite,
        kind=kind,
    )


def defense(id, deck="IC", cost=1, placements=("site",), counters=(), special="none", copies=1):
    return DefenseCardSpec(
        id=id,
        name=id,
        deck=deck,
        cost=cost,
        placements=tuple(placements) if deck == "IC" else (),
        counters=tuple(Counter(a, b) for a, b in counters),
        special=special,
        copies=copies,
    )


def location(id, kind="network-node", ic_slots=3):
    return LocationSpec(id=id, name=id, kind=kind, ic_slots=ic_slots)


def condition(id, *satisfiers):
    return WinConditionSpec(
        id=id,
        title=id,
        satisfiers=tuple(Satisfier(a, tuple(locs)) for a, locs in satisfiers),
    )


def make_catalog(locations_, attacks, defenses=(), conditions=(), gc_slots=3):
    return ScenarioCatalog(
        locations=tuple(locations_),
        attack_cards=tuple(attacks),
        defense_cards=tuple(defenses),
        win_conditions=tuple(conditions),
        gc_slots=gc_slots,
    )


@pytest.fixture
def mini():
    """Tiny scenario: a sure-hit attack, a sure-miss attack, and one chain."""
    return make_catalog(
        [location("site"), location("door", kind="physical-premise")],
        [
            attack("smash", bonus=15, targets=("site",)),  # always succeeds
            attack("fizzle", bonus=-15, targets=("site",)),  # never succeeds
            attack("sneak", bonus=15, targets=("door",)),
            attack("follow-up", bonus=15, targets=("site",), prereq="sneak"),
            attack("swap", copies=5, targets=(), kind="swap", bonus=0),
        ],
        [
            defense("shield", counters=(("smash", 2),)),
            defense("global-shield", deck="GC", cost=3, counters=(("smash", 2),)),
            defense("trap", special="honeypot", counters=()),
        ],
        [
            condition("wc-smash", ("smash", ("site",))),
            condition("wc-chain", ("follow-up", ("site",))),
        ],
    )


def stack_deck(state: GameState, top_ids) -> GameState:
    """Reorder the deck so the given card ids sit on top; multiset unchanged."""
    deck = list(state.attack_deck)
    top = []
    for card_id in top_ids:
        deck.remove(card_id)
        top.append(card_id)
    return replace(state, attack_deck=tuple(top + deck))
