"""Team-specific projections of the game state.

What each side may see:

* Blue sees every placement it made and both budgets, but never red's hand
  nor the chosen win condition. Failed attacks show up as anonymous probes
  (location, roll and totals, no card identity) unless a honeypot at the
  target captured the attacker's tooling; successful attacks are always
  identified. Cards red discards or draws stay hidden.
* Red sees its own hand, the face-up companywide cards, both budgets, and of
  the face-down defenses only the ones that revealed themselves by
  contributing to a resolution; everything else is a card back.
* Nobody sees the deck order, the RNG seed, or where set-aside swap cards
  were slipped back in.

The same redaction rules shape both in-process `PlayerView`s and every event
payload the server puts on the wire.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import engine
from .actions import Action, action_to_wire
from .engine import FINISHED, GameState


def _public_config(config: dict) -> dict:
    out = dict(config)
    out.pop("seed", None)
    return out


def redact_event(event: dict, team: str) -> dict:
    """Project one authoritative event onto what `team` may learn from it."""
    kind = event["type"]
    base = {"seq": event["seq"], "type": kind}

    if kind == "game_created":
        base["config"] = _public_config(event["config"])
        base["catalog_digest"] = event["catalog_digest"]
        return base

    if kind == "blue_setup_done":
        if team == engine.BLUE:
            out = dict(event)
            return out
        for key in ("cost", "budget_granted", "blue_budget", "gc", "ic_counts"):
            base[key] = event[key]
        return base

    if kind == "hand_dealt":
        base["redrawn_swaps"] = event["redrawn_swaps"]
        base["deck_count"] = event["deck_count"]
        if team == engine.RED:
            base["cards"] = event["cards"]
        else:
            base["count"] = len(event["cards"])
        return base

    if kind == "win_condition_chosen":
        if team == engine.RED:
            base["condition"] = event["condition"]
        return base

    if kind == "attack_resolved":
        out = dict(event)
        if team == engine.BLUE:
            if not event["success"] and not event["honeypot"]:
                out["card"] = None
                out.pop("attack_bonus", None)
        else:
            out.pop("honeypot", None)
        return out

    if kind == "cards_bought":
        if team == engine.RED:
            return dict(event)
        for key in ("round", "count", "cost", "red_budget", "deck_count"):
            base[key] = event[key]
        base["discard_count"] = len(event["discards"])
        return base

    if kind == "swap_performed":
        if team == engine.RED:
            return dict(event)
        base["round"] = event["round"]
        base["deck_count"] = event["deck_count"]
        return base

    if kind == "blue_reinforced":
        if team == engine.BLUE:
            return dict(event)
        base["round"] = event["round"]
        base["location"] = event["location"]
        return base

    # round_started / round_ended / turn_passed / win_declared / game_finished
    return dict(event)


def redact_events(events, team: str, since: int = 0) -> list[dict]:
    return [redact_event(e, team) for e in events if e["seq"] > since]


@dataclass
class PlayerView:
    team: str
    phase: str
    winner: str | None
    round_index: int
    rounds_total: int
    to_move: str | None
    red_budget: int
    blue_budget: int
    deck_count: int
    discard_count: int
    gc_placements: tuple[str, ...]
    ic_placements: dict  # location -> list of {"card": id | None, "revealed": bool}
    hand_count: int
    red_hand: tuple[str, ...] | None
    discard: tuple[str, ...] | None
    chosen_win_condition: str | None
    success_history: tuple[tuple[str, str, int], ...]
    play_counts: dict | None
    legal_actions: list[Action]
    events: list[dict]
    catalog: object  # shared ScenarioCatalog; not serialized

    def to_wire(self, since: int = 0) -> dict:
        return {
            "team": self.team,
            "phase": self.phase,
            "winner": self.winner,
            "round_index": self.round_index,
            "rounds_total": self.rounds_total,
            "to_move": self.to_move,
            "red_budget": self.red_budget,
            "blue_budget": self.blue_budget,
            "deck_count": self.deck_count,
            "discard_count": self.discard_count,
            "gc_placements": list(self.gc_placements),
            "ic_placements": self.ic_placements,
            "hand_count": self.hand_count,
            "red_hand": list(self.red_hand) if self.red_hand is not None else None,
            "discard": list(self.discard) if self.discard is not None else None,
            "chosen_win_condition": self.chosen_win_condition,
            "success_history": [
                {"attack": a, "location": l, "round": r}
                for a, l, r in self.success_history
            ],
            "play_counts": self.play_counts,
            "legal_actions": [action_to_wire(a) for a in self.legal_actions],
            "events": [e for e in self.events if e["seq"] > since],
        }


def player_view(state: GameState, team: str) -> PlayerView:
    """Redacted projection of the state for one team. Pure."""
    if team not in (engine.RED, engine.BLUE):
        raise ValueError(f"unknown team {team!r}")
    is_red = team == engine.RED
    finished = state.phase == FINISHED

    ic_view: dict = {}
    for loc, placements in state.ic_placements.items():
        entries = []
        for p in placements:
            if is_red and not p.revealed:
                entries.append({"card": None, "revealed": False})
            else:
                entries.append({"card": p.card_id, "revealed": p.revealed})
        ic_view[loc] = entries

    condition = state.chosen_win_condition
    if not is_red and not finished:
        condition = None

    return PlayerView(
        team=team,
        phase=state.phase,
        winner=state.winner,
        round_index=state.round_index,
        rounds_total=state.config.rounds,
        to_move=engine.to_move(state),
        red_budget=state.red_budget,
        blue_budget=state.blue_budget,
        deck_count=len(state.attack_deck),
        discard_count=len(state.discard),
        gc_placements=state.gc_placements,
        ic_placements=ic_view,
        hand_count=len(state.red_hand),
        red_hand=state.red_hand if is_red else None,
        discard=state.discard if is_red else None,
        chosen_win_condition=condition,
        success_history=state.success_history,
        play_counts=dict(state.play_counts) if is_red else None,
        legal_actions=engine.legal_actions(state, team),
        events=redact_events(state.events, team),
        catalog=state.catalog,
    )


def hidden_ic_ids(state: GameState) -> set[str]:
    """IC card ids placed but never revealed anywhere; must not reach red."""
    placed_hidden: set[str] = set()
    revealed: set[str] = set()
    for placements in state.ic_placements.values():
        for p in placements:
            (revealed if p.revealed else placed_hidden).add(p.card_id)
    return placed_hidden - revealed
