"""Machine players.

Three policies, named in CLI flags and session requests by id:

* ``random``     — uniform over the legal actions (either seat).
* ``greedy-red`` — chases the chosen win condition along the shortest
  remaining prerequisite chain, buying or swapping toward missing cards.
* ``budget-blue``— spends the whole setup budget on the best
  attacks-countered-per-coin value, then scatters decoys.

All policies are stateless between calls and fully deterministic given
(view, descriptor, rng state). They only ever return actions the engine
lists as legal. None of this is part of the board game itself; the
heuristics exist to exercise the engine and to give a human an opponent.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import chains
from .actions import (
    Action,
    BlueSetup,
    BuyCards,
    ChooseWinCondition,
    DeclareWin,
    Pass,
    PlayAttack,
    Purchase,
    SwapCard,
)
from .engine import attack_success_probability
from .rng import GameRng
from .views import PlayerView

RED_POLICY_IDS = ("random", "greedy-red")
BLUE_POLICY_IDS = ("random", "budget-blue")
POLICY_IDS = ("random", "greedy-red", "budget-blue")


@dataclass(frozen=True)
class PolicyDescriptor:
    id: str
    parameters: dict = field(default_factory=dict)


def descriptor(policy_id: str, **parameters) -> PolicyDescriptor:
    if policy_id not in POLICY_IDS:
        raise ValueError(f"unknown policy {policy_id!r}; known: {', '.join(POLICY_IDS)}")
    return PolicyDescriptor(policy_id, parameters)


# --- red ----------------------------------------------------------------------


def decide_red(view: PlayerView, desc: PolicyDescriptor, rng: GameRng) -> Action:
    legal = view.legal_actions
    if not legal:
        raise ValueError("red has no legal action to pick")
    if desc.id == "random":
        return rng.choice(legal)
    if desc.id != "greedy-red":
        raise ValueError(f"{desc.id!r} cannot play the red seat")

    exploration = desc.parameters.get("exploration", 0.0)
    if exploration and rng.random() < exploration:
        return rng.choice(legal)

    if view.phase == "choose-win-condition":
        return _greedy_choose_condition(view, legal)
    return _greedy_round_action(view, legal)


def _greedy_choose_condition(view: PlayerView, legal: list[Action]) -> Action:
    """Prefer short chains, then chains the opening hand already stocks."""
    catalog = view.catalog
    hand = set(view.red_hand or ())
    best = None
    for action in legal:
        assert isinstance(action, ChooseWinCondition)
        cond = catalog.win_condition_by_id[action.condition_id]
        for sat in cond.satisfiers:
            for loc in sat.locations:
                chain = chains.remaining_chain_to(catalog, sat.attack, loc, frozenset())
                if chain is None:
                    continue
                in_hand = sum(1 for play in chain if play[0] in hand)
                key = (len(chain), -in_hand, action.condition_id)
                if best is None or key < best[0]:
                    best = (key, action)
    return best[1] if best else legal[0]


def _known_defense(view: PlayerView, card_id: str, location: str) -> int:
    """Defense bonus red can see: face-up GCs plus revealed ICs at the target."""
    catalog = view.catalog
    bonus = 0
    for gc_id in view.gc_placements:
        bonus += catalog.counter_maps[gc_id].get(card_id, 0)
    for entry in view.ic_placements.get(location, ()):
        if entry["card"] is not None:
            bonus += catalog.counter_maps[entry["card"]].get(card_id, 0)
    return bonus


def _greedy_round_action(view: PlayerView, legal: list[Action]) -> Action:
    catalog = view.catalog
    achieved = frozenset((a, l) for a, l, _ in view.success_history)
    condition = view.chosen_win_condition

    for action in legal:
        if isinstance(action, DeclareWin):
            return action

    chain = (
        chains.remaining_chain(catalog, condition, achieved)
        if condition is not None
        else None
    )

    attacks = [a for a in legal if isinstance(a, PlayAttack)]
    if attacks and chain:
        baseline = len(chain)
        best = None
        for action in attacks:
            after = chains.remaining_chain(
                catalog, condition, achieved | {(action.card_id, action.location)}
            )
            if after is None or len(after) >= baseline:
                continue
            repeat = bool((view.play_counts or {}).get(action.card_id, 0))
            prob = attack_success_probability(
                catalog.attack_by_id[action.card_id].attack_bonus,
                _known_defense(view, action.card_id, action.location),
                repeat,
            )
            key = (len(after), -prob, action.card_id, action.location)
            if best is None or key < best[0]:
                best = (key, action)
        if best is not None:
            return best[1]

    # The next chain card is missing: buy (preferring two) or swap toward it.
    chain_cards = {play[0] for play in chain} if chain else set()
    hand = list(view.red_hand or ())

    def uselessness(card_id: str) -> tuple:
        return (card_id in chain_cards, card_id)  # False sorts first: junk first

    buys = [a for a in legal if isinstance(a, BuyCards)]
    if chain and chain[0][0] not in hand and buys:
        max_count = max(a.count for a in buys)
        best_buy = min(
            (a for a in buys if a.count == max_count),
            key=lambda a: tuple(sorted(uselessness(d) for d in a.discards)),
        )
        if all(not uselessness(d)[0] for d in best_buy.discards):
            return best_buy

    swaps = [a for a in legal if isinstance(a, SwapCard)]
    if chain and chain[0][0] not in hand and swaps:
        junk = [a for a in swaps if a.discard_id not in chain_cards]
        if junk:
            return min(junk, key=lambda a: a.discard_id)

    # Nothing advances the plan this turn: spend a card the plan does not
    # need anyway, so the pressure (and the defender's uncertainty) stays up.
    spare = [a for a in attacks if a.card_id not in chain_cards]
    if spare:
        return min(
            spare,
            key=lambda a: (
                -attack_success_probability(
                    catalog.attack_by_id[a.card_id].attack_bonus,
                    _known_defense(view, a.card_id, a.location),
                    bool((view.play_counts or {}).get(a.card_id, 0)),
                ),
                a.card_id,
                a.location,
            ),
        )

    return Pass()


# --- blue ---------------------------------------------------------------------


def decide_blue_setup(view: PlayerView, desc: PolicyDescriptor, rng: GameRng) -> Action:
    if view.phase != "blue-setup":
        raise ValueError("decide_blue_setup outside the blue setup phase")
    if view.blue_budget == 0:
        return BlueSetup(())  # no coins: not even free bluff cards go down
    if desc.id == "random":
        return _random_blue_setup(view, rng)
    if desc.id != "budget-blue":
        raise ValueError(f"{desc.id!r} cannot play the blue seat")
    return _budget_blue_setup(view)


def _setup_candidates(view: PlayerView):
    """(card, location-or-None) pairs purchasable at setup, one per copy."""
    catalog = view.catalog
    out = []
    for card in catalog.defense_cards:
        if card.deck == "GC":
            out.extend([(card, None)] * card.copies)
        else:
            for loc in card.placements:
                out.extend([(card, loc)] * card.copies)
    return out


def _random_blue_setup(view: PlayerView, rng: GameRng) -> Action:
    catalog = view.catalog
    candidates = _setup_candidates(view)
    rng.shuffle(candidates)
    budget = view.blue_budget
    gc_taken: set[str] = set()
    copies_taken: dict[str, int] = {}
    slots_taken: dict[str, int] = {}
    purchases: list[Purchase] = []
    for card, loc in candidates:
        if rng.random() < 0.5:
            continue
        if card.cost > budget:
            continue
        if copies_taken.get(card.id, 0) >= card.copies:
            continue
        if loc is None:
            if card.id in gc_taken or len(gc_taken) >= catalog.gc_slots:
                continue
            gc_taken.add(card.id)
        else:
            slots = catalog.location_by_id[loc].ic_slots
            if slots_taken.get(loc, 0) >= slots:
                continue
            slots_taken[loc] = slots_taken.get(loc, 0) + 1
        copies_taken[card.id] = copies_taken.get(card.id, 0) + 1
        budget -= card.cost
        if card.special == "extra-budget":
            budget += 5
        purchases.append(Purchase(card.id, loc))
    return BlueSetup(tuple(purchases))


def _budget_blue_setup(view: PlayerView) -> Action:
    catalog = view.catalog
    budget = view.blue_budget
    purchases: list[Purchase] = []
    gc_taken: set[str] = set()
    copies_taken: dict[str, int] = {}
    slots_taken: dict[str, int] = {}

    def take(card, loc) -> None:
        nonlocal budget
        purchases.append(Purchase(card.id, loc))
        copies_taken[card.id] = copies_taken.get(card.id, 0) + 1
        budget -= card.cost
        if loc is None:
            gc_taken.add(card.id)
        else:
            slots_taken[loc] = slots_taken.get(loc, 0) + 1

    # Free budget first: the advisory grant outvalues its own cost.
    for card in catalog.gc_cards:
        if card.special == "extra-budget" and card.cost <= budget and catalog.gc_slots:
            take(card, None)
            budget += 5
            break

    targeting: dict[str, set[str]] = {loc.id: set() for loc in catalog.locations}
    for attack in catalog.attack_cards:
        for loc in attack.targets:
            targeting[loc].add(attack.id)

    while True:
        best = None
        for card in catalog.defense_cards:
            if card.cost > budget or card.cost == 0:
                continue
            if copies_taken.get(card.id, 0) >= card.copies:
                continue
            countered = {k.attack for k in card.counters}
            if card.deck == "GC":
                if card.id in gc_taken or len(gc_taken) >= catalog.gc_slots:
                    continue
                coverage = len(countered)
                if coverage == 0:
                    continue
                key = (-coverage / card.cost, card.cost, card.id, "")
                if best is None or key < best[0]:
                    best = (key, card, None)
            else:
                for loc in card.placements:
                    if slots_taken.get(loc, 0) >= catalog.location_by_id[loc].ic_slots:
                        continue
                    covered_here = countered & targeting[loc]
                    already = {
                        p.defense_id
                        for p in purchases
                        if p.location == loc
                    }
                    if card.id in already:
                        continue  # one of a kind per spot is enough
                    coverage = len(covered_here)
                    if coverage == 0:
                        continue
                    key = (-coverage / card.cost, card.cost, card.id, loc)
                    if best is None or key < best[0]:
                        best = (key, card, loc)
        if best is None:
            break
        take(best[1], best[2])

    # Leftovers go to bluff: scatter free decoys on the emptiest spots.
    decoys = [c for c in catalog.ic_cards if c.special == "decoy" and c.cost <= budget]
    for card in decoys:
        while copies_taken.get(card.id, 0) < card.copies:
            open_spots = [
                loc
                for loc in card.placements
                if slots_taken.get(loc, 0) < catalog.location_by_id[loc].ic_slots
            ]
            if not open_spots or card.cost > budget:
                break
            loc = min(open_spots, key=lambda l: (slots_taken.get(l, 0), l))
            take(card, loc)

    return BlueSetup(tuple(purchases))


def decide_blue_round(view: PlayerView, desc: PolicyDescriptor, rng: GameRng) -> Action | None:
    """Mid-game blue move (variant flag only); None means act later/never."""
    legal = view.legal_actions
    if not legal:
        return None
    if desc.id == "random":
        return rng.choice(legal)
    return None  # budget-blue commits everything at setup
