"""Redaction: no hidden identifier may cross to the other team's view."""

from __future__ import annotations

import json

from perihack.actions import Pass, PlayAttack
from perihack.engine import (
    GameConfig,
    apply_action,
    blue_setup,
    choose_win_condition,
    new_game,
    red_setup,
)
from perihack.views import hidden_ic_ids, player_view

from conftest import stack_deck

SETUP = [
    ("gc-awareness", None),
    ("ic-2fa", "pc-1"),
    ("ic-db-honeypot", "database"),
    ("ic-decoy", "pc-2"),
]


def _game(stock, seed=21, top=None):
    state = new_game(stock, GameConfig(seed=seed))
    state = blue_setup(state, SETUP)
    if top:
        state = stack_deck(state, top)
    state = red_setup(state)
    return choose_win_condition(state, "wc-database-breach")


def test_blue_view_hides_hand_and_condition(stock):
    state = _game(stock)
    view = player_view(state, "blue")
    assert view.red_hand is None
    assert view.chosen_win_condition is None
    assert view.play_counts is None
    assert view.hand_count == 5
    wire = json.dumps(view.to_wire())
    assert "wc-database-breach" not in wire


def test_blue_view_shows_own_placements_face_up(stock):
    state = _game(stock)
    view = player_view(state, "blue")
    assert view.ic_placements["pc-1"] == [{"card": "ic-2fa", "revealed": False}]
    assert view.gc_placements == ("gc-awareness",)


def test_red_view_shows_hand_and_condition_but_not_ics(stock):
    state = _game(stock)
    view = player_view(state, "red")
    assert view.red_hand == state.red_hand
    assert view.chosen_win_condition == "wc-database-breach"
    for entries in view.ic_placements.values():
        for entry in entries:
            assert entry["card"] is None and entry["revealed"] is False
    wire = json.dumps(view.to_wire())
    for hidden in hidden_ic_ids(state):
        assert hidden not in wire


def test_red_view_reveals_only_triggered_ics(stock):
    state = _game(stock, top=["phishing", "sqli", "tailgating", "mitm", "zero-day"])
    # force a roll-independent reveal by playing phishing into 2FA
    state, events = apply_action(state, PlayAttack("phishing", "pc-1"))
    assert events[0]["revealed"] == ["ic-2fa"]
    view = player_view(state, "red")
    assert view.ic_placements["pc-1"] == [{"card": "ic-2fa", "revealed": True}]
    # the honeypot and decoy stay hidden
    assert view.ic_placements["database"] == [{"card": None, "revealed": False}]
    assert view.ic_placements["pc-2"] == [{"card": None, "revealed": False}]
    wire = json.dumps(view.to_wire())
    assert "ic-db-honeypot" not in wire and "ic-decoy" not in wire
    assert "ic-2fa" in wire


def _mini_game(mini, purchases, top):
    state = new_game(mini, GameConfig(seed=31))
    state = blue_setup(state, purchases)
    state = stack_deck(state, top)
    state = red_setup(state)
    return choose_win_condition(state, "wc-smash")


def test_blue_sees_failed_attack_identity_only_via_honeypot(mini):
    # "fizzle" can never land (-15), and the honeypot counters nothing,
    # so its only effect is capturing the attacker's tooling on the miss.
    state = _mini_game(mini, [("trap", "site")], ["fizzle", "smash", "smash", "sneak", "fizzle"])
    state, events = apply_action(state, PlayAttack("fizzle", "site"))
    assert events[0]["success"] is False
    assert events[0]["honeypot"] is True
    assert events[0]["revealed"] == []  # a zero counter keeps the trap face-down
    resolved = [
        e for e in player_view(state, "blue").events if e["type"] == "attack_resolved"
    ][-1]
    assert resolved["card"] == "fizzle"


def test_blue_does_not_learn_failed_attack_identity_without_honeypot(mini):
    state = _mini_game(mini, [], ["fizzle", "smash", "smash", "sneak", "fizzle"])
    state, events = apply_action(state, PlayAttack("fizzle", "site"))
    assert events[0]["success"] is False
    resolved = [
        e for e in player_view(state, "blue").events if e["type"] == "attack_resolved"
    ][-1]
    assert resolved["card"] is None
    assert "attack_bonus" not in resolved
    assert resolved["roll"] == events[0]["roll"]  # dice are public
    red_resolved = [
        e for e in player_view(state, "red").events if e["type"] == "attack_resolved"
    ][-1]
    assert red_resolved["card"] == "fizzle"
    assert "honeypot" not in red_resolved


def test_blue_sees_successful_attack_identity(mini):
    state = _mini_game(mini, [], ["smash", "fizzle", "smash", "sneak", "fizzle"])
    state, events = apply_action(state, PlayAttack("smash", "site"))
    assert events[0]["success"] is True
    resolved = [
        e for e in player_view(state, "blue").events if e["type"] == "attack_resolved"
    ][-1]
    assert resolved["card"] == "smash"


def test_red_events_redact_blue_setup_details(stock):
    state = _game(stock)
    red_events = player_view(state, "red").events
    setup = next(e for e in red_events if e["type"] == "blue_setup_done")
    assert "purchases" not in setup
    assert setup["gc"] == ["gc-awareness"]
    assert setup["ic_counts"] == {"database": 1, "pc-1": 1, "pc-2": 1}
    blue_setup_event = next(
        e for e in player_view(state, "blue").events if e["type"] == "blue_setup_done"
    )
    assert len(blue_setup_event["purchases"]) == len(SETUP)


def test_nobody_sees_deck_order_or_seed(stock):
    state = _game(stock)
    for team in ("red", "blue"):
        created = player_view(state, team).events[0]
        assert created["type"] == "game_created"
        assert "deck" not in created
        assert "seed" not in created["config"]
        dealt = next(e for e in player_view(state, team).events if e["type"] == "hand_dealt")
        assert "reinserted" not in dealt


def test_condition_revealed_to_blue_at_game_end(stock):
    state = _game(stock, seed=23)
    while state.phase != "finished":
        state, _ = apply_action(state, Pass())
    view = player_view(state, "blue")
    assert view.chosen_win_condition == "wc-database-breach"
    finish = view.events[-1]
    assert finish["type"] == "game_finished"
    assert finish["condition"] == "wc-database-breach"


def test_views_are_pure(stock):
    state = _game(stock)
    digest_before = json.dumps(state.events[-1], sort_keys=True)
    player_view(state, "red")
    player_view(state, "blue")
    assert json.dumps(state.events[-1], sort_keys=True) == digest_before
