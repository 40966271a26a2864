"""Scenario catalog: the data-driven definition of one hacking scenario.

A catalog bundles the board locations, the attacker's deck, both defender
decks, and the win conditions. Catalogs are immutable after construction and
shared freely between concurrent games. The default scenario ships embedded
(``perihack/data/default.json``) and as ``catalog/default.json`` at the repo
root; the two files are byte-identical.

Catalog files are strict JSON: a ``schema_version`` field is required and
unknown keys are rejected so typos fail loudly instead of silently changing
the game.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from importlib import resources
from typing import Any, Iterable

SCHEMA_VERSION = 1

LOCATION_KINDS = ("physical-premise", "network-node")
ATTACK_KINDS = ("attack", "swap")
DEFENSE_DECKS = ("GC", "IC")
SPECIALS = ("none", "extra-budget", "honeypot", "decoy")
BINDINGS = ("any", "same-location")


class CatalogError(Exception):
    """Base for catalog loading/validation failures; carries a field path."""

    def __init__(self, path: str, message: str) -> None:
        self.path = path
        self.message = message
        super().__init__(f"{path}: {message}" if path else message)


class CatalogParseError(CatalogError):
    """Malformed document: bad JSON, wrong types, unknown or missing keys."""


class CatalogReferenceError(CatalogError):
    """An id does not resolve within the catalog."""


class CatalogCycleError(CatalogError):
    """Prerequisite references form a loop."""


class CatalogCountError(CatalogError):
    """A count field is out of range (copies < 1, slots < 0, ...)."""


@dataclass(frozen=True)
class Violation:
    kind: str  # "reference" | "cycle" | "count" | "structure" | "reachability"
    path: str
    message: str

    _EXC = {
        "reference": CatalogReferenceError,
        "cycle": CatalogCycleError,
        "count": CatalogCountError,
    }

    def to_error(self) -> CatalogError:
        return self._EXC.get(self.kind, CatalogError)(self.path, self.message)


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def __iter__(self):
        return iter(self.violations)

    def summary(self) -> str:
        if self.ok:
            return "catalog valid"
        return "\n".join(f"[{v.kind}] {v.path}: {v.message}" for v in self.violations)


@dataclass(frozen=True)
class LocationSpec:
    id: str
    name: str
    kind: str
    ic_slots: int


@dataclass(frozen=True)
class Prerequisite:
    """Gate on playing an attack: one prior success from `any_of` is needed.

    `binding` is "any" (a success anywhere counts) or "same-location" (the
    prior success must be at the location now being attacked).
    """

    any_of: tuple[str, ...]
    binding: str = "any"


@dataclass(frozen=True)
class AttackCardSpec:
    id: str
    name: str
    copies: int
    attack_bonus: int
    targets: tuple[str, ...]
    prerequisite: Prerequisite | None = None
    kind: str = "attack"


@dataclass(frozen=True)
class Counter:
    attack: str
    bonus: int


@dataclass(frozen=True)
class DefenseCardSpec:
    id: str
    name: str
    deck: str
    cost: int
    placements: tuple[str, ...]
    counters: tuple[Counter, ...]
    special: str = "none"
    copies: int = 1

    def bonus_against(self, attack_id: str) -> int:
        for counter in self.counters:
            if counter.attack == attack_id:
                return counter.bonus
        return 0


@dataclass(frozen=True)
class Satisfier:
    attack: str
    locations: tuple[str, ...]


@dataclass(frozen=True)
class WinConditionSpec:
    id: str
    title: str
    satisfiers: tuple[Satisfier, ...]


@dataclass(frozen=True)
class ScenarioCatalog:
    locations: tuple[LocationSpec, ...]
    attack_cards: tuple[AttackCardSpec, ...]
    defense_cards: tuple[DefenseCardSpec, ...]
    win_conditions: tuple[WinConditionSpec, ...]
    gc_slots: int = 3
    schema_version: int = SCHEMA_VERSION

    # Lookup tables, derived once; excluded from equality.
    location_by_id: dict = field(init=False, repr=False, compare=False)
    attack_by_id: dict = field(init=False, repr=False, compare=False)
    defense_by_id: dict = field(init=False, repr=False, compare=False)
    win_condition_by_id: dict = field(init=False, repr=False, compare=False)
    counter_maps: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "location_by_id", {l.id: l for l in self.locations})
        object.__setattr__(self, "attack_by_id", {c.id: c for c in self.attack_cards})
        object.__setattr__(self, "defense_by_id", {c.id: c for c in self.defense_cards})
        object.__setattr__(
            self, "win_condition_by_id", {w.id: w for w in self.win_conditions}
        )
        object.__setattr__(
            self,
            "counter_maps",
            {c.id: {k.attack: k.bonus for k in c.counters} for c in self.defense_cards},
        )

    @property
    def gc_cards(self) -> list[DefenseCardSpec]:
        return [c for c in self.defense_cards if c.deck == "GC"]

    @property
    def ic_cards(self) -> list[DefenseCardSpec]:
        return [c for c in self.defense_cards if c.deck == "IC"]

    def attack_deck_cards(self) -> list[str]:
        """The full attacker deck as a flat list of card ids (copies expanded)."""
        deck: list[str] = []
        for card in self.attack_cards:
            deck.extend([card.id] * card.copies)
        return deck

    def to_document(self) -> dict:
        return _catalog_to_document(self)

    def to_json(self) -> str:
        return json.dumps(self.to_document(), indent=2, sort_keys=False) + "\n"

    def digest(self) -> str:
        canon = json.dumps(self.to_document(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canon.encode("utf-8")).hexdigest()


# --- document parsing -------------------------------------------------------


def _expect(value: Any, types, path: str) -> Any:
    if not isinstance(value, types) or isinstance(value, bool) and bool not in (
        types if isinstance(types, tuple) else (types,)
    ):
        names = (
            "/".join(t.__name__ for t in types)
            if isinstance(types, tuple)
            else types.__name__
        )
        raise CatalogParseError(path, f"expected {names}, got {type(value).__name__}")
    return value


def _take(obj: dict, path: str, required: Iterable[str], optional: Iterable[str] = ()):
    _expect(obj, dict, path)
    required = tuple(required)
    optional = tuple(optional)
    unknown = sorted(set(obj) - set(required) - set(optional))
    if unknown:
        raise CatalogParseError(path, f"unknown field(s): {', '.join(unknown)}")
    missing = [k for k in required if k not in obj]
    if missing:
        raise CatalogParseError(path, f"missing field(s): {', '.join(missing)}")


def _str_list(value: Any, path: str) -> tuple[str, ...]:
    _expect(value, list, path)
    return tuple(_expect(v, str, f"{path}[{i}]") for i, v in enumerate(value))


def _parse_location(obj: Any, path: str) -> LocationSpec:
    _take(obj, path, ("id", "name", "kind", "ic_slots"))
    kind = _expect(obj["kind"], str, f"{path}.kind")
    if kind not in LOCATION_KINDS:
        raise CatalogParseError(f"{path}.kind", f"must be one of {LOCATION_KINDS}")
    return LocationSpec(
        id=_expect(obj["id"], str, f"{path}.id"),
        name=_expect(obj["name"], str, f"{path}.name"),
        kind=kind,
        ic_slots=_expect(obj["ic_slots"], int, f"{path}.ic_slots"),
    )


def _parse_prerequisite(obj: Any, path: str) -> Prerequisite | None:
    if obj is None:
        return None
    _take(obj, path, ("any_of",), ("binding",))
    binding = obj.get("binding", "any")
    if binding not in BINDINGS:
        raise CatalogParseError(f"{path}.binding", f"must be one of {BINDINGS}")
    any_of = _str_list(obj["any_of"], f"{path}.any_of")
    if not any_of:
        raise CatalogParseError(f"{path}.any_of", "must name at least one attack")
    return Prerequisite(any_of=any_of, binding=binding)


def _parse_attack(obj: Any, path: str) -> AttackCardSpec:
    _take(
        obj,
        path,
        ("id", "name", "copies", "attack_bonus", "targets"),
        ("prerequisite", "kind"),
    )
    kind = obj.get("kind", "attack")
    if kind not in ATTACK_KINDS:
        raise CatalogParseError(f"{path}.kind", f"must be one of {ATTACK_KINDS}")
    return AttackCardSpec(
        id=_expect(obj["id"], str, f"{path}.id"),
        name=_expect(obj["name"], str, f"{path}.name"),
        copies=_expect(obj["copies"], int, f"{path}.copies"),
        attack_bonus=_expect(obj["attack_bonus"], int, f"{path}.attack_bonus"),
        targets=_str_list(obj["targets"], f"{path}.targets"),
        prerequisite=_parse_prerequisite(
            obj.get("prerequisite"), f"{path}.prerequisite"
        ),
        kind=kind,
    )


def _parse_counter(obj: Any, path: str) -> Counter:
    _take(obj, path, ("attack", "bonus"))
    return Counter(
        attack=_expect(obj["attack"], str, f"{path}.attack"),
        bonus=_expect(obj["bonus"], int, f"{path}.bonus"),
    )


def _parse_defense(obj: Any, path: str) -> DefenseCardSpec:
    _take(
        obj,
        path,
        ("id", "name", "deck", "cost", "placements", "counters"),
        ("special", "copies"),
    )
    deck = _expect(obj["deck"], str, f"{path}.deck")
    if deck not in DEFENSE_DECKS:
        raise CatalogParseError(f"{path}.deck", f"must be one of {DEFENSE_DECKS}")
    special = obj.get("special", "none")
    if special not in SPECIALS:
        raise CatalogParseError(f"{path}.special", f"must be one of {SPECIALS}")
    counters_raw = _expect(obj["counters"], list, f"{path}.counters")
    return DefenseCardSpec(
        id=_expect(obj["id"], str, f"{path}.id"),
        name=_expect(obj["name"], str, f"{path}.name"),
        deck=deck,
        cost=_expect(obj["cost"], int, f"{path}.cost"),
        placements=_str_list(obj["placements"], f"{path}.placements"),
        counters=tuple(
            _parse_counter(c, f"{path}.counters[{i}]")
            for i, c in enumerate(counters_raw)
        ),
        special=special,
        copies=_expect(obj.get("copies", 1), int, f"{path}.copies"),
    )


def _parse_satisfier(obj: Any, path: str) -> Satisfier:
    _take(obj, path, ("attack", "locations"))
    return Satisfier(
        attack=_expect(obj["attack"], str, f"{path}.attack"),
        locations=_str_list(obj["locations"], f"{path}.locations"),
    )


def _parse_win_condition(obj: Any, path: str) -> WinConditionSpec:
    _take(obj, path, ("id", "title", "satisfiers"))
    satisfiers_raw = _expect(obj["satisfiers"], list, f"{path}.satisfiers")
    return WinConditionSpec(
        id=_expect(obj["id"], str, f"{path}.id"),
        title=_expect(obj["title"], str, f"{path}.title"),
        satisfiers=tuple(
            _parse_satisfier(s, f"{path}.satisfiers[{i}]")
            for i, s in enumerate(satisfiers_raw)
        ),
    )


def parse_document(document: dict | str) -> ScenarioCatalog:
    """Parse a catalog document without semantic validation."""
    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise CatalogParseError("", f"invalid JSON: {exc}") from exc
    _take(
        document,
        "",
        ("schema_version", "locations", "attack_cards", "defense_cards", "win_conditions"),
        ("gc_slots",),
    )
    version = _expect(document["schema_version"], int, "schema_version")
    if version != SCHEMA_VERSION:
        raise CatalogParseError(
            "schema_version", f"unsupported version {version} (expected {SCHEMA_VERSION})"
        )
    locations = _expect(document["locations"], list, "locations")
    attacks = _expect(document["attack_cards"], list, "attack_cards")
    defenses = _expect(document["defense_cards"], list, "defense_cards")
    conditions = _expect(document["win_conditions"], list, "win_conditions")
    return ScenarioCatalog(
        locations=tuple(
            _parse_location(l, f"locations[{i}]") for i, l in enumerate(locations)
        ),
        attack_cards=tuple(
            _parse_attack(a, f"attack_cards[{i}]") for i, a in enumerate(attacks)
        ),
        defense_cards=tuple(
            _parse_defense(d, f"defense_cards[{i}]") for i, d in enumerate(defenses)
        ),
        win_conditions=tuple(
            _parse_win_condition(w, f"win_conditions[{i}]")
            for i, w in enumerate(conditions)
        ),
        gc_slots=_expect(document.get("gc_slots", 3), int, "gc_slots"),
        schema_version=version,
    )


def _prereq_to_obj(prereq: Prerequisite | None):
    if prereq is None:
        return None
    return {"any_of": list(prereq.any_of), "binding": prereq.binding}


def _catalog_to_document(catalog: ScenarioCatalog) -> dict:
    return {
        "schema_version": catalog.schema_version,
        "gc_slots": catalog.gc_slots,
        "locations": [
            {"id": l.id, "name": l.name, "kind": l.kind, "ic_slots": l.ic_slots}
            for l in catalog.locations
        ],
        "attack_cards": [
            {
                "id": c.id,
                "name": c.name,
                "kind": c.kind,
                "copies": c.copies,
                "attack_bonus": c.attack_bonus,
                "targets": list(c.targets),
                "prerequisite": _prereq_to_obj(c.prerequisite),
            }
            for c in catalog.attack_cards
        ],
        "defense_cards": [
            {
                "id": c.id,
                "name": c.name,
                "deck": c.deck,
                "cost": c.cost,
                "copies": c.copies,
                "placements": list(c.placements),
                "counters": [{"attack": k.attack, "bonus": k.bonus} for k in c.counters],
                "special": c.special,
            }
            for c in catalog.defense_cards
        ],
        "win_conditions": [
            {
                "id": w.id,
                "title": w.title,
                "satisfiers": [
                    {"attack": s.attack, "locations": list(s.locations)}
                    for s in w.satisfiers
                ],
            }
            for w in catalog.win_conditions
        ],
    }


# --- semantic validation ----------------------------------------------------


def validate_catalog(catalog: ScenarioCatalog) -> ValidationReport:
    """Collect every invariant violation; an empty report means valid."""
    from . import chains  # local import: chains depends on catalog types

    out: list[Violation] = []
    bad = out.append

    seen_ids: dict[str, str] = {}

    def check_unique(obj_id: str, path: str) -> None:
        if obj_id in seen_ids:
            bad(
                Violation(
                    "structure", path, f"duplicate id {obj_id!r} (also {seen_ids[obj_id]})"
                )
            )
        else:
            seen_ids[obj_id] = path

    for i, loc in enumerate(catalog.locations):
        path = f"locations[{i}]"
        check_unique(loc.id, path)
        if loc.ic_slots < 0:
            bad(Violation("count", f"{path}.ic_slots", "must be >= 0"))

    if catalog.gc_slots < 0:
        bad(Violation("count", "gc_slots", "must be >= 0"))

    location_ids = {l.id for l in catalog.locations}
    attack_ids = {c.id for c in catalog.attack_cards}

    for i, card in enumerate(catalog.attack_cards):
        path = f"attack_cards[{i}]"
        check_unique(card.id, path)
        if card.copies < 1:
            bad(Violation("count", f"{path}.copies", "must be >= 1"))
        for j, target in enumerate(card.targets):
            if target not in location_ids:
                bad(
                    Violation(
                        "reference", f"{path}.targets[{j}]", f"unknown location {target!r}"
                    )
                )
        if card.kind == "swap":
            if card.targets:
                bad(Violation("structure", f"{path}.targets", "swap cards take no targets"))
            if card.attack_bonus:
                bad(Violation("structure", f"{path}.attack_bonus", "swap cards carry no bonus"))
            if card.prerequisite is not None:
                bad(
                    Violation(
                        "structure", f"{path}.prerequisite", "swap cards take no prerequisite"
                    )
                )
        elif not card.targets:
            bad(Violation("structure", f"{path}.targets", "attack cards need >= 1 target"))
        if card.prerequisite is not None:
            for j, dep in enumerate(card.prerequisite.any_of):
                if dep not in attack_ids:
                    bad(
                        Violation(
                            "reference",
                            f"{path}.prerequisite.any_of[{j}]",
                            f"unknown attack {dep!r}",
                        )
                    )
                elif catalog.attack_by_id[dep].kind == "swap":
                    bad(
                        Violation(
                            "reference",
                            f"{path}.prerequisite.any_of[{j}]",
                            f"{dep!r} is a swap card, not a playable attack",
                        )
                    )

    cycle = chains.find_cycle(catalog)
    if cycle:
        bad(
            Violation(
                "cycle",
                "attack_cards",
                "prerequisite loop: " + " -> ".join(cycle + [cycle[0]]),
            )
        )

    for i, card in enumerate(catalog.defense_cards):
        path = f"defense_cards[{i}]"
        check_unique(card.id, path)
        if card.cost < 0:
            bad(Violation("count", f"{path}.cost", "must be >= 0"))
        if card.copies < 1:
            bad(Violation("count", f"{path}.copies", "must be >= 1"))
        if card.deck == "GC" and card.placements:
            bad(
                Violation(
                    "structure",
                    f"{path}.placements",
                    "GC cards are companywide and take no placements",
                )
            )
        if card.deck == "IC" and not card.placements:
            bad(Violation("structure", f"{path}.placements", "IC cards need >= 1 placement"))
        for j, placement in enumerate(card.placements):
            if placement not in location_ids:
                bad(
                    Violation(
                        "reference",
                        f"{path}.placements[{j}]",
                        f"unknown location {placement!r}",
                    )
                )
        for j, counter in enumerate(card.counters):
            if counter.attack not in attack_ids:
                bad(
                    Violation(
                        "reference",
                        f"{path}.counters[{j}].attack",
                        f"unknown attack {counter.attack!r}",
                    )
                )

    for i, cond in enumerate(catalog.win_conditions):
        path = f"win_conditions[{i}]"
        check_unique(cond.id, path)
        if not cond.satisfiers:
            bad(Violation("structure", f"{path}.satisfiers", "need >= 1 satisfier"))
        for j, sat in enumerate(cond.satisfiers):
            spath = f"{path}.satisfiers[{j}]"
            if sat.attack not in attack_ids:
                bad(Violation("reference", f"{spath}.attack", f"unknown attack {sat.attack!r}"))
            for k, loc in enumerate(sat.locations):
                if loc not in location_ids:
                    bad(
                        Violation(
                            "reference", f"{spath}.locations[{k}]", f"unknown location {loc!r}"
                        )
                    )

    # The chain search tolerates dangling ids and cycles (it just comes back
    # empty), so reachability can always be reported alongside other problems.
    for cond_id, chain in chains.condition_chains(catalog).items():
        if chain is None:
            bad(
                Violation(
                    "reachability",
                    f"win_conditions[{cond_id}]",
                    "unreachable win condition: no legal attack chain reaches a satisfier",
                )
            )

    return ValidationReport(tuple(out))


def load_catalog(document: dict | str) -> ScenarioCatalog:
    """Parse and fully validate a catalog document.

    Raises the typed `CatalogError` for the first violation, with a path to
    the offending field.
    """
    catalog = parse_document(document)
    report = validate_catalog(catalog)
    if not report.ok:
        raise report.violations[0].to_error()
    return catalog


def default_catalog_text() -> str:
    return (
        resources.files("perihack").joinpath("data/default.json").read_text("utf-8")
    )


def default_catalog() -> ScenarioCatalog:
    """The built-in scenario: a small company perimeter with the stock decks."""
    return load_catalog(default_catalog_text())
