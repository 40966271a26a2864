"""Prerequisite-graph analysis: cycles, shortest attack chains, reachability.

A "chain" is an ordered list of (attack id, location) plays in which every
play's prerequisite is satisfied by an earlier play, honoring the binding
rule ("any" location or "same-location"). Chain length counts attack plays.
"""

from __future__ import annotations

from .catalog import AttackCardSpec, ScenarioCatalog

Play = tuple[str, str]  # (attack id, location id)
Chain = tuple[Play, ...]


def prerequisite_edges(catalog: ScenarioCatalog) -> list[tuple[str, str]]:
    """(needed attack, dependent attack) pairs, one per any_of alternative."""
    edges = []
    for card in catalog.attack_cards:
        if card.prerequisite:
            for dep in card.prerequisite.any_of:
                edges.append((dep, card.id))
    return edges


def find_cycle(catalog: ScenarioCatalog) -> list[str] | None:
    """Return one prerequisite cycle as a list of attack ids, or None."""
    dependents: dict[str, list[str]] = {}
    for needed, dependent in prerequisite_edges(catalog):
        dependents.setdefault(needed, []).append(dependent)

    WHITE, GREY, BLACK = 0, 1, 2
    color = {c.id: WHITE for c in catalog.attack_cards}
    stack: list[str] = []

    def visit(node: str) -> list[str] | None:
        color[node] = GREY
        stack.append(node)
        for nxt in dependents.get(node, ()):
            if nxt not in color:
                continue  # dangling reference; reported separately
            if color[nxt] == GREY:
                return stack[stack.index(nxt):]
            if color[nxt] == WHITE:
                cycle = visit(nxt)
                if cycle:
                    return cycle
        stack.pop()
        color[node] = BLACK
        return None

    for card in catalog.attack_cards:
        if color[card.id] == WHITE:
            cycle = visit(card.id)
            if cycle:
                return cycle
    return None


def topological_order(catalog: ScenarioCatalog) -> list[str]:
    """Attack ids ordered prerequisites-first. Raises on a cyclic catalog."""
    if find_cycle(catalog):
        raise ValueError("prerequisite graph is cyclic")
    order: list[str] = []
    done: set[str] = set()

    def visit(card: AttackCardSpec) -> None:
        if card.id in done:
            return
        if card.prerequisite:
            for dep in card.prerequisite.any_of:
                if dep in catalog.attack_by_id:
                    visit(catalog.attack_by_id[dep])
        done.add(card.id)
        order.append(card.id)

    for card in catalog.attack_cards:
        visit(card)
    return order


def _prereq_options(
    catalog: ScenarioCatalog, card: AttackCardSpec, location: str
) -> list[Play] | None:
    """Plays that would satisfy `card`'s prerequisite for an attack at `location`.

    None means the card has no prerequisite.
    """
    prereq = card.prerequisite
    if prereq is None:
        return None
    options: list[Play] = []
    for dep_id in prereq.any_of:
        dep = catalog.attack_by_id.get(dep_id)
        if dep is None:
            continue
        if prereq.binding == "same-location":
            if location in dep.targets:
                options.append((dep_id, location))
        else:
            options.extend((dep_id, loc) for loc in dep.targets)
    return options


def shortest_chain_to(
    catalog: ScenarioCatalog, attack_id: str, location: str
) -> Chain | None:
    """Shortest legal chain ending with `attack_id` played at `location`.

    Deterministic: ties break on (length, then the chain's id sequence).
    Returns None when unreachable (or on cyclic input).
    """
    memo: dict[Play, Chain | None] = {}
    visiting: set[Play] = set()

    def best(play: Play) -> Chain | None:
        if play in memo:
            return memo[play]
        if play in visiting:
            return None  # cycle guard; validation reports the cycle itself
        card = catalog.attack_by_id.get(play[0])
        if card is None or card.kind != "attack" or play[1] not in card.targets:
            memo[play] = None
            return None
        options = _prereq_options(catalog, card, play[1])
        if options is None:
            memo[play] = (play,)
            return memo[play]
        visiting.add(play)
        candidate: Chain | None = None
        for option in options:
            prefix = best(option)
            if prefix is None:
                continue
            chain = prefix + (play,)
            if candidate is None or (len(chain), chain) < (len(candidate), candidate):
                candidate = chain
        visiting.discard(play)
        memo[play] = candidate
        return candidate

    return best((attack_id, location))


def condition_chains(catalog: ScenarioCatalog) -> dict[str, Chain | None]:
    """Shortest chain fulfilling each win condition, or None if unreachable."""
    result: dict[str, Chain | None] = {}
    for cond in catalog.win_conditions:
        best: Chain | None = None
        for sat in cond.satisfiers:
            card = catalog.attack_by_id.get(sat.attack)
            if card is None:
                continue
            for loc in sat.locations:
                if loc not in card.targets:
                    continue
                chain = shortest_chain_to(catalog, sat.attack, loc)
                if chain is None:
                    continue
                if best is None or (len(chain), chain) < (len(best), best):
                    best = chain
        result[cond.id] = best
    return result


def longest_chain_length(catalog: ScenarioCatalog) -> int:
    """Length of the longest shortest-chain over all playable (attack, location)."""
    longest = 0
    for card in catalog.attack_cards:
        if card.kind != "attack":
            continue
        for loc in card.targets:
            chain = shortest_chain_to(catalog, card.id, loc)
            if chain is not None:
                longest = max(longest, len(chain))
    return longest


def standalone_roots(catalog: ScenarioCatalog) -> list[str]:
    """Attacks playable with no prior success."""
    return [
        c.id
        for c in catalog.attack_cards
        if c.kind == "attack" and c.prerequisite is None
    ]


# --- dynamic variant used by the agents --------------------------------------


def prerequisite_met(
    catalog: ScenarioCatalog,
    card: AttackCardSpec,
    location: str,
    achieved: frozenset[Play] | set[Play],
) -> bool:
    prereq = card.prerequisite
    if prereq is None:
        return True
    for dep_id in prereq.any_of:
        if prereq.binding == "same-location":
            if (dep_id, location) in achieved:
                return True
        else:
            for play in achieved:
                if play[0] == dep_id:
                    return True
    return False


def _need_fn(catalog: ScenarioCatalog, achieved: frozenset[Play]):
    memo: dict[Play, Chain | None] = {}
    visiting: set[Play] = set()

    def need(play: Play) -> Chain | None:
        if play in achieved:
            return ()
        if play in memo:
            return memo[play]
        if play in visiting:
            return None
        card = catalog.attack_by_id.get(play[0])
        if card is None or card.kind != "attack" or play[1] not in card.targets:
            memo[play] = None
            return None
        if prerequisite_met(catalog, card, play[1], achieved):
            memo[play] = (play,)
            return memo[play]
        options = _prereq_options(catalog, card, play[1]) or ()
        visiting.add(play)
        candidate: Chain | None = None
        for option in options:
            prefix = need(option)
            if prefix is None:
                continue
            chain = prefix + (play,)
            if candidate is None or (len(chain), chain) < (len(candidate), candidate):
                candidate = chain
        visiting.discard(play)
        memo[play] = candidate
        return candidate

    return need


def remaining_chain_to(
    catalog: ScenarioCatalog,
    attack_id: str,
    location: str,
    achieved: frozenset[Play] | set[Play],
) -> Chain | None:
    """Shortest list of plays still needed to land `attack_id` at `location`.

    Empty tuple when that play already succeeded; None when impossible.
    """
    return _need_fn(catalog, frozenset(achieved))((attack_id, location))


def remaining_chain(
    catalog: ScenarioCatalog,
    condition_id: str,
    achieved: frozenset[Play] | set[Play],
) -> Chain | None:
    """Shortest list of plays still needed to satisfy `condition_id`.

    Empty tuple when the condition is already satisfied; None when it cannot
    be completed at all.
    """
    cond = catalog.win_condition_by_id.get(condition_id)
    if cond is None:
        return None
    achieved = frozenset(achieved)
    need = _need_fn(catalog, achieved)
    best: Chain | None = None
    for sat in cond.satisfiers:
        card = catalog.attack_by_id.get(sat.attack)
        if card is None:
            continue
        for loc in sat.locations:
            if (sat.attack, loc) in achieved:
                return ()
            if loc not in card.targets:
                continue
            chain = need((sat.attack, loc))
            if chain is None:
                continue
            if best is None or (len(chain), chain) < (len(best), best):
                best = chain
    return best
