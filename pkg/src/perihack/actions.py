"""Player actions and their JSON wire format.

One action per player intention; the acting team is implied by the game
phase. The wire codec is shared by the game server and the match records.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Union


@dataclass(frozen=True)
class Purchase:
    defense_id: str
    location: str | None = None  # None for companywide GC cards


@dataclass(frozen=True)
class BlueSetup:
    purchases: tuple[Purchase, ...]


@dataclass(frozen=True)
class ChooseWinCondition:
    condition_id: str


@dataclass(frozen=True)
class PlayAttack:
    card_id: str
    location: str


@dataclass(frozen=True)
class SwapCard:
    # The hand card traded away; the swap card itself is consumed implicitly.
    discard_id: str


@dataclass(frozen=True)
class BuyCards:
    count: int
    discards: tuple[str, ...] = ()


@dataclass(frozen=True)
class DeclareWin:
    pass


@dataclass(frozen=True)
class Pass:
    pass


@dataclass(frozen=True)
class BuyDefense:
    """Mid-game blue reinforcement; only legal with the variant flag on."""

    defense_id: str
    location: str | None = None


Action = Union[
    BlueSetup,
    ChooseWinCondition,
    PlayAttack,
    SwapCard,
    BuyCards,
    DeclareWin,
    Pass,
    BuyDefense,
]

_WIRE_TYPES = {
    BlueSetup: "blue-setup",
    ChooseWinCondition: "choose-win-condition",
    PlayAttack: "play-attack",
    SwapCard: "swap-card",
    BuyCards: "buy-cards",
    DeclareWin: "declare-win",
    Pass: "pass",
    BuyDefense: "buy-defense",
}


class ActionDecodeError(ValueError):
    pass


def action_to_wire(action: Action) -> dict:
    kind = _WIRE_TYPES.get(type(action))
    if kind is None:
        raise TypeError(f"not an action: {action!r}")
    if isinstance(action, BlueSetup):
        return {
            "type": kind,
            "purchases": [
                {"card": p.defense_id, "location": p.location} for p in action.purchases
            ],
        }
    if isinstance(action, ChooseWinCondition):
        return {"type": kind, "condition": action.condition_id}
    if isinstance(action, PlayAttack):
        return {"type": kind, "card": action.card_id, "location": action.location}
    if isinstance(action, SwapCard):
        return {"type": kind, "discard": action.discard_id}
    if isinstance(action, BuyCards):
        return {"type": kind, "count": action.count, "discards": list(action.discards)}
    if isinstance(action, BuyDefense):
        return {"type": kind, "card": action.defense_id, "location": action.location}
    return {"type": kind}


def _field(obj: dict, key: str, types) -> Any:
    if key not in obj:
        raise ActionDecodeError(f"action missing field {key!r}")
    value = obj[key]
    if not isinstance(value, types):
        raise ActionDecodeError(f"action field {key!r} has the wrong type")
    return value


def action_from_wire(obj: Any) -> Action:
    if not isinstance(obj, dict):
        raise ActionDecodeError("action must be a JSON object")
    kind = obj.get("type")
    if kind == "blue-setup":
        raw = _field(obj, "purchases", list)
        purchases = []
        for entry in raw:
            if not isinstance(entry, dict):
                raise ActionDecodeError("purchase entries must be objects")
            card = entry.get("card")
            location = entry.get("location")
            if not isinstance(card, str) or not (
                location is None or isinstance(location, str)
            ):
                raise ActionDecodeError("bad purchase entry")
            purchases.append(Purchase(card, location))
        return BlueSetup(tuple(purchases))
    if kind == "choose-win-condition":
        return ChooseWinCondition(_field(obj, "condition", str))
    if kind == "play-attack":
        return PlayAttack(_field(obj, "card", str), _field(obj, "location", str))
    if kind == "swap-card":
        return SwapCard(_field(obj, "discard", str))
    if kind == "buy-cards":
        count = _field(obj, "count", int)
        discards = obj.get("discards", [])
        if not isinstance(discards, list) or not all(
            isinstance(d, str) for d in discards
        ):
            raise ActionDecodeError("discards must be a list of card ids")
        return BuyCards(count, tuple(discards))
    if kind == "declare-win":
        return DeclareWin()
    if kind == "pass":
        return Pass()
    if kind == "buy-defense":
        location = obj.get("location")
        if not (location is None or isinstance(location, str)):
            raise ActionDecodeError("bad location")
        return BuyDefense(_field(obj, "card", str), location)
    raise ActionDecodeError(f"unknown action type {kind!r}")
