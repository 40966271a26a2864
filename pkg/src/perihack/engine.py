"""Authoritative game state machine.

Owns setup, the round loop, legal-move generation, d20 attack resolution,
win detection and the append-only event log. States are treated as immutable:
every operation returns a fresh state and never touches its input, so a
rejected action provably leaves the game unchanged and any state can be
snapshotted or replayed.

Resolution rule: an attack at a location succeeds when

    roll + attack bonus > 10 + applicable defense bonuses + repeat penalty

where the applicable defenses are the face-up companywide cards plus the
face-down cards at the target location, and the repeat penalty is +1 once an
attack type has been played before. Ties lose: the defender holds.
"""

from __future__ import annotations

import hashlib
import json
from collections import Counter as _Counter
from dataclasses import dataclass, field, replace
from itertools import combinations

from . import kernels
from .actions import (
    Action,
    BlueSetup,
    BuyCards,
    BuyDefense,
    ChooseWinCondition,
    DeclareWin,
    Pass,
    PlayAttack,
    Purchase,
    SwapCard,
)
from .catalog import ScenarioCatalog
from .rng import GameRng

BLUE_SETUP = "blue-setup"
RED_SETUP = "red-setup"
CHOOSE_WIN = "choose-win-condition"
ROUND = "round"
FINISHED = "finished"

RED = "red"
BLUE = "blue"


class EngineError(Exception):
    pass


class IllegalActionError(EngineError):
    """Action rejected; the input state is untouched."""

    def __init__(self, code: str, message: str) -> None:
        self.code = code
        self.message = message
        super().__init__(f"{code}: {message}")


class DeckExhaustedError(EngineError):
    """The deck cannot supply the initial hand; catalog misconfiguration."""


@dataclass(frozen=True)
class GameConfig:
    rounds: int = 10
    blue_budget: int = 10
    red_budget: int = 5
    attack_card_price: int = 1
    hand_limit: int = 5
    seed: int = 0
    blue_midgame_purchases: bool = False

    def validate(self) -> None:
        if self.rounds < 0:
            raise ValueError("rounds must be >= 0")
        if self.hand_limit < 1:
            raise ValueError("hand_limit must be >= 1")
        if self.blue_budget < 0 or self.red_budget < 0:
            raise ValueError("budgets must be >= 0")
        if self.attack_card_price < 0:
            raise ValueError("attack_card_price must be >= 0")

    def to_dict(self) -> dict:
        return {
            "rounds": self.rounds,
            "blue_budget": self.blue_budget,
            "red_budget": self.red_budget,
            "attack_card_price": self.attack_card_price,
            "hand_limit": self.hand_limit,
            "seed": self.seed,
            "blue_midgame_purchases": self.blue_midgame_purchases,
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "GameConfig":
        cfg = cls(**obj)
        cfg.validate()
        return cfg


@dataclass(frozen=True)
class IcPlacement:
    card_id: str
    revealed: bool = False


@dataclass(frozen=True)
class ResolutionOutcome:
    roll: int
    attack_bonus: int
    defense_bonus: int
    repeat_penalty_applied: int
    attack_total: int
    defense_total: int
    success: bool
    revealed_defenses: tuple[str, ...]


@dataclass(frozen=True)
class GameState:
    catalog: ScenarioCatalog = field(repr=False)
    config: GameConfig
    phase: str
    winner: str | None = None
    round_index: int = 0
    round_attack_used: bool = False
    round_aux_used: bool = False
    blue_reinforce_used: bool = False
    gc_placements: tuple[str, ...] = ()
    ic_placements: dict = field(default_factory=dict)  # location -> tuple[IcPlacement]
    red_hand: tuple[str, ...] = ()
    attack_deck: tuple[str, ...] = ()
    discard: tuple[str, ...] = ()
    red_budget: int = 0
    blue_budget: int = 0
    chosen_win_condition: str | None = None
    success_history: tuple[tuple[str, str, int], ...] = ()  # (attack, location, round)
    play_counts: dict = field(default_factory=dict)
    events: tuple[dict, ...] = ()
    rng_state: int = 0

    def ics_at(self, location: str) -> tuple[IcPlacement, ...]:
        return self.ic_placements.get(location, ())

    def achieved(self) -> frozenset[tuple[str, str]]:
        return frozenset((a, l) for a, l, _ in self.success_history)


# --- event plumbing -----------------------------------------------------------


def _emit(state_events: tuple, new_events: list, kind: str, **fields) -> None:
    seq = len(state_events) + len(new_events) + 1
    event = {"seq": seq, "type": kind}
    event.update(fields)
    new_events.append(event)


def _commit(state: GameState, new_events: list, **changes) -> GameState:
    changes["events"] = state.events + tuple(new_events)
    return replace(state, **changes)


# --- game construction --------------------------------------------------------


def new_game(catalog: ScenarioCatalog, config: GameConfig) -> GameState:
    """Start a match: shuffle the attacker deck and open blue's setup phase."""
    config.validate()
    rng = GameRng(config.seed)
    deck = catalog.attack_deck_cards()
    rng.shuffle(deck)
    events: list[dict] = []
    _emit(
        (),
        events,
        "game_created",
        config=config.to_dict(),
        catalog_digest=catalog.digest(),
        deck=list(deck),
    )
    return GameState(
        catalog=catalog,
        config=config,
        phase=BLUE_SETUP,
        attack_deck=tuple(deck),
        red_budget=config.red_budget,
        blue_budget=config.blue_budget,
        events=tuple(events),
        rng_state=rng.state,
    )


# --- shared validation helpers -------------------------------------------------


def _require_phase(state: GameState, phase: str) -> None:
    if state.phase != phase:
        raise IllegalActionError(
            "phase-mismatch", f"requires phase {phase}, game is in {state.phase}"
        )


def _prereq_met(state: GameState, card, location: str) -> bool:
    prereq = card.prerequisite
    if prereq is None:
        return True
    achieved = state.success_history
    for dep_id in prereq.any_of:
        if prereq.binding == "same-location":
            for attack, loc, _ in achieved:
                if attack == dep_id and loc == location:
                    return True
        else:
            for attack, _, _ in achieved:
                if attack == dep_id:
                    return True
    return False


def _satisfying_entry(state: GameState) -> tuple[str, str, int] | None:
    """First success-history entry fulfilling the chosen win condition."""
    if state.chosen_win_condition is None:
        return None
    cond = state.catalog.win_condition_by_id.get(state.chosen_win_condition)
    if cond is None:
        return None
    for entry in state.success_history:
        attack, location, _ = entry
        for sat in cond.satisfiers:
            if attack == sat.attack and location in sat.locations:
                return entry
    return None


def _placed_copies(state: GameState, defense_id: str) -> int:
    count = state.gc_placements.count(defense_id)
    for placements in state.ic_placements.values():
        count += sum(1 for p in placements if p.card_id == defense_id)
    return count


def _needed_discards(state: GameState, count: int) -> int:
    return max(0, len(state.red_hand) - state.config.hand_limit + count)


def _is_multisubset(sub: tuple[str, ...], of: tuple[str, ...]) -> bool:
    need = _Counter(sub)
    have = _Counter(of)
    return all(have[k] >= v for k, v in need.items())


def _first_swap_card(state: GameState) -> str | None:
    for card_id in state.red_hand:
        if state.catalog.attack_by_id[card_id].kind == "swap":
            return card_id
    return None


# --- legal move generation ------------------------------------------------------


def legal_actions(state: GameState, team: str) -> list[Action]:
    """Exactly the actions `apply_action` would accept for this team now.

    Setup purchases are combinatorial, so the blue-setup phase yields no
    enumeration here; `BlueSetup` actions are validated on submission.
    """
    if state.phase == CHOOSE_WIN and team == RED:
        return [ChooseWinCondition(w.id) for w in state.catalog.win_conditions]
    if state.phase != ROUND:
        return []

    if team == BLUE:
        if not state.config.blue_midgame_purchases or state.blue_reinforce_used:
            return []
        acts: list[Action] = []
        for card in state.catalog.ic_cards:
            if card.cost > state.blue_budget:
                continue
            remaining = card.copies - _placed_copies(state, card.id)
            if remaining <= 0:
                continue
            for loc in card.placements:
                slots = state.catalog.location_by_id[loc].ic_slots
                if len(state.ics_at(loc)) < slots:
                    acts.append(BuyDefense(card.id, loc))
        return acts

    if team != RED:
        return []

    acts = []
    if not state.round_attack_used:
        seen: set[str] = set()
        for card_id in state.red_hand:
            if card_id in seen:
                continue
            seen.add(card_id)
            card = state.catalog.attack_by_id[card_id]
            if card.kind != "attack":
                continue
            for loc in card.targets:
                if _prereq_met(state, card, loc):
                    acts.append(PlayAttack(card_id, loc))

    if not state.round_aux_used:
        swap_card = _first_swap_card(state)
        if swap_card is not None and state.attack_deck:
            rest = list(state.red_hand)
            rest.remove(swap_card)
            for card_id in sorted(set(rest)):
                acts.append(SwapCard(card_id))
        price = state.config.attack_card_price
        for count in (1, 2):
            if count > len(state.attack_deck) or price * count > state.red_budget:
                continue
            needed = _needed_discards(state, count)
            if needed == 0:
                acts.append(BuyCards(count))
                continue
            combos = {
                tuple(sorted(c))
                for c in combinations(state.red_hand, needed)
            }
            for discards in sorted(combos):
                acts.append(BuyCards(count, discards))

    if _satisfying_entry(state) is not None:
        acts.append(DeclareWin())
    acts.append(Pass())
    return acts


# --- resolution -----------------------------------------------------------------


def resolve_attack(
    state: GameState, card_id: str, location: str, roll: int
) -> ResolutionOutcome:
    """Evaluate one attack roll against the defenses in place. Pure."""
    if not 1 <= roll <= 20:
        raise ValueError("roll must be in 1..20")
    card = state.catalog.attack_by_id.get(card_id)
    if card is None or card.kind != "attack":
        raise ValueError(f"not a playable attack: {card_id!r}")
    if location not in card.targets:
        raise ValueError(f"{card_id} cannot target {location}")

    counter_maps = state.catalog.counter_maps
    defense_bonus = 0
    for gc_id in state.gc_placements:
        defense_bonus += counter_maps[gc_id].get(card_id, 0)
    newly_revealed: list[str] = []
    for placement in state.ics_at(location):
        bonus = counter_maps[placement.card_id].get(card_id, 0)
        if bonus:
            defense_bonus += bonus
            if not placement.revealed:
                newly_revealed.append(placement.card_id)

    repeat = 1 if state.play_counts.get(card_id, 0) > 0 else 0
    attack_total = roll + card.attack_bonus
    defense_total = 10 + defense_bonus + repeat
    return ResolutionOutcome(
        roll=roll,
        attack_bonus=card.attack_bonus,
        defense_bonus=defense_bonus,
        repeat_penalty_applied=repeat,
        attack_total=attack_total,
        defense_total=defense_total,
        success=attack_total > defense_total,
        revealed_defenses=tuple(newly_revealed),
    )


def attack_success_probability(
    attack_bonus: int, defense_bonus: int, repeat: bool = False
) -> float:
    """Fraction of d20 faces winning the resolution inequality."""
    return kernels.success_probability(attack_bonus, defense_bonus, int(repeat))


# --- action application -----------------------------------------------------------


def apply_action(state: GameState, action: Action) -> tuple[GameState, list[dict]]:
    """Validate and apply one action; returns (new state, new events).

    Raises IllegalActionError without mutating anything on rejection.
    """
    if isinstance(action, BlueSetup):
        return _apply_blue_setup(state, action)
    if isinstance(action, ChooseWinCondition):
        return _apply_choose_win(state, action)
    if isinstance(action, BuyDefense):
        return _apply_buy_defense(state, action)
    if isinstance(action, PlayAttack):
        return _apply_play_attack(state, action)
    if isinstance(action, SwapCard):
        return _apply_swap(state, action)
    if isinstance(action, BuyCards):
        return _apply_buy_cards(state, action)
    if isinstance(action, DeclareWin):
        return _apply_declare_win(state, action)
    if isinstance(action, Pass):
        return _apply_pass(state, action)
    raise IllegalActionError("unknown-action", f"unsupported action {action!r}")


def _apply_blue_setup(state: GameState, action: BlueSetup) -> tuple[GameState, list]:
    _require_phase(state, BLUE_SETUP)
    catalog = state.catalog
    gc_picks: list[str] = []
    ic_picks: list[tuple[str, str]] = []
    bought = _Counter()
    total_cost = 0
    grant = 0

    for purchase in action.purchases:
        card = catalog.defense_by_id.get(purchase.defense_id)
        if card is None:
            raise IllegalActionError(
                "unknown-card", f"no defense card {purchase.defense_id!r}"
            )
        total_cost += card.cost
        if card.deck == "GC":
            if purchase.location is not None:
                raise IllegalActionError(
                    "illegal-placement", f"{card.id} is companywide; no location allowed"
                )
            if card.id in gc_picks:
                raise IllegalActionError("duplicate-gc", f"{card.id} already picked")
            gc_picks.append(card.id)
            if len(gc_picks) > catalog.gc_slots:
                raise IllegalActionError(
                    "too-many-gcs", f"board has only {catalog.gc_slots} GC slots"
                )
            if card.special == "extra-budget":
                grant += 5
        else:
            loc = purchase.location
            if loc is None or loc not in card.placements:
                raise IllegalActionError(
                    "illegal-placement", f"{card.id} cannot be placed at {loc!r}"
                )
            ic_picks.append((card.id, loc))
        bought[card.id] += 1
        if bought[card.id] > card.copies:
            raise IllegalActionError(
                "copies-exceeded",
                f"only {card.copies} cop{'y' if card.copies == 1 else 'ies'} of {card.id}",
            )

    per_location = _Counter(loc for _, loc in ic_picks)
    for loc, count in per_location.items():
        slots = catalog.location_by_id[loc].ic_slots
        if count > slots:
            raise IllegalActionError(
                "illegal-placement", f"{loc} has only {slots} defense slots"
            )

    if total_cost > state.blue_budget + grant:
        raise IllegalActionError(
            "over-budget",
            f"setup costs {total_cost}, budget is {state.blue_budget}"
            + (f" + {grant} granted" if grant else ""),
        )

    ic_placements = dict(state.ic_placements)
    for card_id, loc in ic_picks:
        ic_placements[loc] = ic_placements.get(loc, ()) + (IcPlacement(card_id),)

    remaining = state.blue_budget + grant - total_cost
    events: list[dict] = []
    _emit(
        state.events,
        events,
        "blue_setup_done",
        purchases=[{"card": p.defense_id, "location": p.location} for p in action.purchases],
        cost=total_cost,
        budget_granted=grant,
        blue_budget=remaining,
        gc=list(gc_picks),
        ic_counts={loc: len(p) for loc, p in sorted(ic_placements.items())},
    )
    new = _commit(
        state,
        events,
        phase=RED_SETUP,
        gc_placements=tuple(gc_picks),
        ic_placements=ic_placements,
        blue_budget=remaining,
    )
    return new, events


def blue_setup(state: GameState, purchases) -> GameState:
    """Spend blue's budget on GC and IC cards; advances to red's setup."""
    purchases = tuple(
        p if isinstance(p, Purchase) else Purchase(*p) for p in purchases
    )
    new, _ = apply_action(state, BlueSetup(purchases))
    return new


def red_setup(state: GameState) -> GameState:
    """Deal red's opening hand of playable cards.

    Swap cards drawn during the deal do not count; they are set aside and
    slipped back into the remaining deck at uniformly random positions.
    """
    _require_phase(state, RED_SETUP)
    catalog = state.catalog
    rng = GameRng.from_state(state.rng_state)
    deck = list(state.attack_deck)
    hand: list[str] = []
    set_aside: list[str] = []
    while len(hand) < state.config.hand_limit and deck:
        card_id = deck.pop(0)
        if catalog.attack_by_id[card_id].kind == "swap":
            set_aside.append(card_id)
        else:
            hand.append(card_id)
    if len(hand) < state.config.hand_limit:
        raise DeckExhaustedError(
            f"deck ran out after {len(hand)} playable cards; "
            f"the catalog cannot fill a hand of {state.config.hand_limit}"
        )
    reinserted = []
    for card_id in set_aside:
        pos = rng.randrange(len(deck) + 1) if deck else 0
        deck.insert(pos, card_id)
        reinserted.append({"card": card_id, "position": pos})

    events: list[dict] = []
    _emit(
        state.events,
        events,
        "hand_dealt",
        cards=list(hand),
        redrawn_swaps=len(set_aside),
        reinserted=reinserted,
        deck_count=len(deck),
    )
    return _commit(
        state,
        events,
        phase=CHOOSE_WIN,
        red_hand=tuple(hand),
        attack_deck=tuple(deck),
        rng_state=rng.state,
    )


def _apply_choose_win(
    state: GameState, action: ChooseWinCondition
) -> tuple[GameState, list]:
    if state.phase != CHOOSE_WIN:
        if state.chosen_win_condition is not None:
            raise IllegalActionError("already-chosen", "win condition already set")
        _require_phase(state, CHOOSE_WIN)
    if action.condition_id not in state.catalog.win_condition_by_id:
        raise IllegalActionError(
            "unknown-condition", f"no win condition {action.condition_id!r}"
        )
    events: list[dict] = []
    _emit(state.events, events, "win_condition_chosen", condition=action.condition_id)
    changes: dict = {"chosen_win_condition": action.condition_id}
    if state.config.rounds == 0:
        _emit(
            state.events,
            events,
            "game_finished",
            winner=BLUE,
            reason="rounds-exhausted",
            condition=action.condition_id,
            rounds_played=0,
        )
        changes.update(phase=FINISHED, winner=BLUE)
    else:
        _emit(state.events, events, "round_started", round=1)
        changes.update(phase=ROUND, round_index=1)
    return _commit(state, events, **changes), events


def choose_win_condition(state: GameState, condition_id: str) -> GameState:
    new, _ = apply_action(state, ChooseWinCondition(condition_id))
    return new


def _end_round(state: GameState, changes: dict, events: list) -> None:
    rnd = state.round_index
    _emit(state.events, events, "round_ended", round=rnd)
    if rnd >= state.config.rounds:
        _emit(
            state.events,
            events,
            "game_finished",
            winner=BLUE,
            reason="rounds-exhausted",
            condition=state.chosen_win_condition,
            rounds_played=rnd,
        )
        changes.update(phase=FINISHED, winner=BLUE)
    else:
        _emit(state.events, events, "round_started", round=rnd + 1)
        changes.update(
            round_index=rnd + 1,
            round_attack_used=False,
            round_aux_used=False,
            blue_reinforce_used=False,
        )


def _apply_play_attack(state: GameState, action: PlayAttack) -> tuple[GameState, list]:
    _require_phase(state, ROUND)
    if state.round_attack_used:
        raise IllegalActionError("attack-spent", "one attack per round")
    if action.card_id not in state.red_hand:
        raise IllegalActionError("unknown-card", f"{action.card_id!r} is not in hand")
    card = state.catalog.attack_by_id[action.card_id]
    if card.kind != "attack":
        raise IllegalActionError("not-an-attack", f"{card.id} cannot be played as an attack")
    if action.location not in card.targets:
        raise IllegalActionError(
            "illegal-target", f"{card.id} cannot target {action.location}"
        )
    if not _prereq_met(state, card, action.location):
        needed = " or ".join(card.prerequisite.any_of)
        raise IllegalActionError(
            "prerequisite-not-met",
            f"{card.id} needs a prior successful {needed}"
            + (" here" if card.prerequisite.binding == "same-location" else ""),
        )

    rng = GameRng.from_state(state.rng_state)
    roll = rng.d20()
    outcome = resolve_attack(state, action.card_id, action.location, roll)

    hand = list(state.red_hand)
    hand.remove(action.card_id)
    honeypot = any(
        state.catalog.defense_by_id[p.card_id].special == "honeypot"
        for p in state.ics_at(action.location)
    )
    ic_placements = state.ic_placements
    if outcome.revealed_defenses:
        updated = []
        revealed = set(outcome.revealed_defenses)
        for placement in state.ics_at(action.location):
            if placement.card_id in revealed and not placement.revealed:
                placement = replace(placement, revealed=True)
            updated.append(placement)
        ic_placements = dict(state.ic_placements)
        ic_placements[action.location] = tuple(updated)

    history = state.success_history
    if outcome.success:
        history = history + ((action.card_id, action.location, state.round_index),)
    play_counts = dict(state.play_counts)
    play_counts[action.card_id] = play_counts.get(action.card_id, 0) + 1

    events: list[dict] = []
    _emit(
        state.events,
        events,
        "attack_resolved",
        round=state.round_index,
        card=action.card_id,
        location=action.location,
        roll=outcome.roll,
        attack_bonus=outcome.attack_bonus,
        defense_bonus=outcome.defense_bonus,
        repeat_penalty=outcome.repeat_penalty_applied,
        attack_total=outcome.attack_total,
        defense_total=outcome.defense_total,
        success=outcome.success,
        revealed=list(outcome.revealed_defenses),
        honeypot=honeypot and not outcome.success,
    )
    changes: dict = {
        "red_hand": tuple(hand),
        "discard": state.discard + (action.card_id,),
        "ic_placements": ic_placements,
        "success_history": history,
        "play_counts": play_counts,
        "round_attack_used": True,
        "rng_state": rng.state,
    }
    if state.round_aux_used:
        _end_round(state, changes, events)
    return _commit(state, events, **changes), events


def _apply_swap(state: GameState, action: SwapCard) -> tuple[GameState, list]:
    _require_phase(state, ROUND)
    if state.round_aux_used:
        raise IllegalActionError("aux-spent", "already swapped or bought this round")
    swap_card = _first_swap_card(state)
    if swap_card is None:
        raise IllegalActionError("no-swap-card", "no swap card in hand")
    if not state.attack_deck:
        raise IllegalActionError("deck-empty", "cannot draw a replacement")
    rest = list(state.red_hand)
    rest.remove(swap_card)
    if action.discard_id not in rest:
        raise IllegalActionError(
            "unknown-card", f"{action.discard_id!r} is not in hand to swap away"
        )
    rest.remove(action.discard_id)
    deck = list(state.attack_deck)
    drawn = deck.pop(0)
    rest.append(drawn)

    events: list[dict] = []
    _emit(
        state.events,
        events,
        "swap_performed",
        round=state.round_index,
        discarded=action.discard_id,
        drawn=drawn,
        deck_count=len(deck),
    )
    changes: dict = {
        "red_hand": tuple(rest),
        "attack_deck": tuple(deck),
        "discard": state.discard + (swap_card, action.discard_id),
        "round_aux_used": True,
    }
    if state.round_attack_used:
        _end_round(state, changes, events)
    return _commit(state, events, **changes), events


def _apply_buy_cards(state: GameState, action: BuyCards) -> tuple[GameState, list]:
    _require_phase(state, ROUND)
    if state.round_aux_used:
        raise IllegalActionError("aux-spent", "already swapped or bought this round")
    if not 1 <= action.count <= 2:
        raise IllegalActionError("bad-count", "may buy one or two cards")
    if action.count > len(state.attack_deck):
        raise IllegalActionError("deck-empty", "not enough cards left in the deck")
    cost = state.config.attack_card_price * action.count
    if cost > state.red_budget:
        raise IllegalActionError(
            "over-budget", f"{action.count} card(s) cost {cost}, budget is {state.red_budget}"
        )
    needed = _needed_discards(state, action.count)
    if len(action.discards) != needed:
        raise IllegalActionError(
            "hand-limit",
            f"buying {action.count} with {len(state.red_hand)} in hand requires "
            f"exactly {needed} discard(s) (limit {state.config.hand_limit})",
        )
    if not _is_multisubset(action.discards, state.red_hand):
        raise IllegalActionError("unknown-card", "declared discards are not all in hand")

    hand = list(state.red_hand)
    for card_id in action.discards:
        hand.remove(card_id)
    deck = list(state.attack_deck)
    drawn = [deck.pop(0) for _ in range(action.count)]
    hand.extend(drawn)

    events: list[dict] = []
    _emit(
        state.events,
        events,
        "cards_bought",
        round=state.round_index,
        count=action.count,
        cost=cost,
        cards=list(drawn),
        discards=list(action.discards),
        red_budget=state.red_budget - cost,
        deck_count=len(deck),
    )
    changes: dict = {
        "red_hand": tuple(hand),
        "attack_deck": tuple(deck),
        "discard": state.discard + tuple(action.discards),
        "red_budget": state.red_budget - cost,
        "round_aux_used": True,
    }
    if state.round_attack_used:
        _end_round(state, changes, events)
    return _commit(state, events, **changes), events


def _apply_declare_win(state: GameState, action: DeclareWin) -> tuple[GameState, list]:
    _require_phase(state, ROUND)
    entry = _satisfying_entry(state)
    if entry is None:
        raise IllegalActionError(
            "not-satisfied", "the chosen win condition has no fulfilling success yet"
        )
    events: list[dict] = []
    _emit(
        state.events,
        events,
        "win_declared",
        round=state.round_index,
        condition=state.chosen_win_condition,
        satisfier={"attack": entry[0], "location": entry[1], "round": entry[2]},
        chain=[
            {"attack": a, "location": l, "round": r} for a, l, r in state.success_history
        ],
    )
    _emit(
        state.events,
        events,
        "game_finished",
        winner=RED,
        reason="win-declared",
        condition=state.chosen_win_condition,
        rounds_played=state.round_index,
    )
    return _commit(state, events, phase=FINISHED, winner=RED), events


def _apply_pass(state: GameState, action: Pass) -> tuple[GameState, list]:
    _require_phase(state, ROUND)
    events: list[dict] = []
    _emit(state.events, events, "turn_passed", round=state.round_index, team=RED)
    changes: dict = {}
    _end_round(state, changes, events)
    return _commit(state, events, **changes), events


def _apply_buy_defense(state: GameState, action: BuyDefense) -> tuple[GameState, list]:
    _require_phase(state, ROUND)
    if not state.config.blue_midgame_purchases:
        raise IllegalActionError(
            "variant-disabled", "mid-game blue purchases are not enabled"
        )
    if state.blue_reinforce_used:
        raise IllegalActionError("aux-spent", "blue already reinforced this round")
    card = state.catalog.defense_by_id.get(action.defense_id)
    if card is None:
        raise IllegalActionError("unknown-card", f"no defense card {action.defense_id!r}")
    if card.deck != "IC":
        raise IllegalActionError(
            "illegal-placement", "companywide cards are fixed after setup"
        )
    if _placed_copies(state, card.id) >= card.copies:
        raise IllegalActionError("copies-exceeded", f"no copies of {card.id} left")
    loc = action.location
    if loc is None or loc not in card.placements:
        raise IllegalActionError(
            "illegal-placement", f"{card.id} cannot be placed at {loc!r}"
        )
    if len(state.ics_at(loc)) >= state.catalog.location_by_id[loc].ic_slots:
        raise IllegalActionError("illegal-placement", f"{loc} has no free defense slot")
    if card.cost > state.blue_budget:
        raise IllegalActionError(
            "over-budget", f"{card.id} costs {card.cost}, budget is {state.blue_budget}"
        )
    ic_placements = dict(state.ic_placements)
    ic_placements[loc] = ic_placements.get(loc, ()) + (IcPlacement(card.id),)
    events: list[dict] = []
    _emit(
        state.events,
        events,
        "blue_reinforced",
        round=state.round_index,
        card=card.id,
        location=loc,
        cost=card.cost,
        blue_budget=state.blue_budget - card.cost,
    )
    new = _commit(
        state,
        events,
        ic_placements=ic_placements,
        blue_budget=state.blue_budget - card.cost,
        blue_reinforce_used=True,
    )
    return new, events


# --- inspection -----------------------------------------------------------------


def check_win(state: GameState) -> str | None:
    """red / blue once the game is decided, otherwise None."""
    return state.winner if state.phase == FINISHED else None


def to_move(state: GameState) -> str | None:
    if state.phase == BLUE_SETUP:
        return BLUE
    if state.phase in (CHOOSE_WIN, ROUND):
        return RED
    return None


def card_conservation_ok(state: GameState) -> bool:
    counts = _Counter(state.attack_deck)
    counts.update(state.red_hand)
    counts.update(state.discard)
    expected = {c.id: c.copies for c in state.catalog.attack_cards}
    return counts == _Counter(expected)


def state_digest(state: GameState) -> str:
    """Hash of the observable game state (RNG internals excluded)."""
    doc = {
        "phase": state.phase,
        "winner": state.winner,
        "round_index": state.round_index,
        "round_attack_used": state.round_attack_used,
        "round_aux_used": state.round_aux_used,
        "gc": list(state.gc_placements),
        "ics": {
            loc: [{"card": p.card_id, "revealed": p.revealed} for p in placements]
            for loc, placements in sorted(state.ic_placements.items())
        },
        "hand": list(state.red_hand),
        "deck": list(state.attack_deck),
        "discard": list(state.discard),
        "red_budget": state.red_budget,
        "blue_budget": state.blue_budget,
        "condition": state.chosen_win_condition,
        "history": [list(e) for e in state.success_history],
        "play_counts": dict(sorted(state.play_counts.items())),
        "event_count": len(state.events),
    }
    canon = json.dumps(doc, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode("utf-8")).hexdigest()


# --- transcript replay ------------------------------------------------------------


class ReplayError(EngineError):
    pass


def replay_events(catalog: ScenarioCatalog, events: list[dict]) -> GameState:
    """Re-execute a recorded event transcript and return the final state.

    The transcript's decision events are mapped back to actions and driven
    through the live engine with the recorded seed; the regenerated event
    stream must match the transcript exactly.
    """
    if not events or events[0].get("type") != "game_created":
        raise ReplayError("transcript must start with game_created")
    config = GameConfig.from_dict(events[0]["config"])
    state = new_game(catalog, config)

    for event in events[1:]:
        kind = event.get("type")
        if kind in ("round_started", "round_ended", "game_finished"):
            continue  # emitted automatically, verified below
        if kind == "hand_dealt":
            state = red_setup(state)
            continue
        if kind == "blue_setup_done":
            action: Action = BlueSetup(
                tuple(Purchase(p["card"], p["location"]) for p in event["purchases"])
            )
        elif kind == "win_condition_chosen":
            action = ChooseWinCondition(event["condition"])
        elif kind == "attack_resolved":
            action = PlayAttack(event["card"], event["location"])
        elif kind == "cards_bought":
            action = BuyCards(event["count"], tuple(event["discards"]))
        elif kind == "swap_performed":
            action = SwapCard(event["discarded"])
        elif kind == "win_declared":
            action = DeclareWin()
        elif kind == "turn_passed":
            action = Pass()
        elif kind == "blue_reinforced":
            action = BuyDefense(event["card"], event["location"])
        else:
            raise ReplayError(f"unknown event type {kind!r}")
        try:
            state, _ = apply_action(state, action)
        except EngineError as exc:
            raise ReplayError(f"transcript action rejected at seq {event.get('seq')}: {exc}")

    if list(state.events) != list(events):
        raise ReplayError("regenerated event stream diverges from the transcript")
    return state
