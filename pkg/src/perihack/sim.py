"""Seeded batch simulation and balance reporting.

A match is one full engine run driven by two policies; a batch runs matches
on consecutive seeds and folds them into a `BalanceReport`. Matches are
independent, so batches parallelize across processes, and the aggregation is
commutative: the report comes out identical for any worker count.
"""

from __future__ import annotations

import json
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

from . import agents, chains, engine
from .agents import PolicyDescriptor
from .catalog import ScenarioCatalog
from .engine import FINISHED, GameConfig, GameState
from .rng import GameRng
from .views import player_view

_RED_SALT = 0x52454400
_BLUE_SALT = 0x424C5545


class PolicyError(Exception):
    """A policy produced an action the engine rejected: a policy bug."""


@dataclass(frozen=True)
class MatchRecord:
    seed: int
    winner: str
    rounds_played: int
    chosen_win_condition: str | None
    chain: tuple[tuple[str, str, int], ...]
    events: tuple[dict, ...]
    final_digest: str

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "winner": self.winner,
            "rounds_played": self.rounds_played,
            "chosen_win_condition": self.chosen_win_condition,
            "chain": [{"attack": a, "location": l, "round": r} for a, l, r in self.chain],
            "events": list(self.events),
            "final_digest": self.final_digest,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))


def run_match(
    catalog: ScenarioCatalog,
    config: GameConfig,
    red: PolicyDescriptor,
    blue: PolicyDescriptor,
    seed: int,
) -> MatchRecord:
    """Play one full match; deterministic in (catalog, config, policies, seed)."""
    config = replace(config, seed=seed)
    red_rng = GameRng(seed ^ _RED_SALT)
    blue_rng = GameRng(seed ^ _BLUE_SALT)

    state = engine.new_game(catalog, config)
    state = _drive(state, red, blue, red_rng, blue_rng)

    finish = state.events[-1]
    assert finish["type"] == "game_finished"
    return MatchRecord(
        seed=seed,
        winner=state.winner,
        rounds_played=finish["rounds_played"],
        chosen_win_condition=state.chosen_win_condition,
        chain=state.success_history,
        events=state.events,
        final_digest=engine.state_digest(state),
    )


def _drive(
    state: GameState,
    red: PolicyDescriptor,
    blue: PolicyDescriptor,
    red_rng: GameRng,
    blue_rng: GameRng,
) -> GameState:
    action = agents.decide_blue_setup(player_view(state, engine.BLUE), blue, blue_rng)
    state = _apply_checked(state, action, blue)
    state = engine.red_setup(state)

    # Each round is at most one attack plus one swap/buy, so this bound is generous.
    for _ in range(state.config.rounds * 4 + 8):
        if state.phase == FINISHED:
            return state
        action = agents.decide_red(player_view(state, engine.RED), red, red_rng)
        state = _apply_checked(state, action, red)
    if state.phase != FINISHED:
        raise PolicyError(f"{red.id} failed to finish the match (livelock)")
    return state


def _apply_checked(state: GameState, action, desc: PolicyDescriptor) -> GameState:
    try:
        new_state, _ = engine.apply_action(state, action)
    except engine.IllegalActionError as exc:
        raise PolicyError(
            f"policy {desc.id!r} produced an illegal action {action!r} "
            f"in phase {state.phase}: {exc}"
        ) from exc
    return new_state


# --- batches -------------------------------------------------------------------


@dataclass(frozen=True)
class BalanceReport:
    games: int
    red_wins: int
    red_win_rate: float
    per_condition: dict  # condition id -> {"games", "red_wins", "red_win_rate"}
    mean_rounds_to_red_win: float | None
    attack_usage: dict  # attack id -> times played
    defense_purchases: dict  # defense id -> times bought
    base_seed: int
    policies: dict
    config: dict
    catalog_digest: str

    def to_dict(self) -> dict:
        return {
            "games": self.games,
            "red_wins": self.red_wins,
            "red_win_rate": self.red_win_rate,
            "per_condition": self.per_condition,
            "mean_rounds_to_red_win": self.mean_rounds_to_red_win,
            "attack_usage": self.attack_usage,
            "defense_purchases": self.defense_purchases,
            "base_seed": self.base_seed,
            "policies": self.policies,
            "config": self.config,
            "catalog_digest": self.catalog_digest,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def to_text(self) -> str:
        lines = [
            f"games            {self.games}",
            f"red wins         {self.red_wins}  (rate {self.red_win_rate:.4f})",
            "mean rounds to red win  "
            + (f"{self.mean_rounds_to_red_win:.2f}" if self.mean_rounds_to_red_win else "-"),
            "",
            "win condition                 games   red wins   rate",
        ]
        for cond, row in sorted(self.per_condition.items()):
            lines.append(
                f"  {cond:<28}{row['games']:>6}{row['red_wins']:>10}"
                f"   {row['red_win_rate']:.4f}"
            )
        lines.append("")
        lines.append("attack usage (plays)")
        for attack, count in sorted(self.attack_usage.items(), key=lambda kv: (-kv[1], kv[0])):
            lines.append(f"  {attack:<28}{count:>8}")
        lines.append("")
        lines.append("defense purchases")
        for card, count in sorted(
            self.defense_purchases.items(), key=lambda kv: (-kv[1], kv[0])
        ):
            lines.append(f"  {card:<28}{count:>8}")
        return "\n".join(lines) + "\n"

    def histograms_csv(self) -> str:
        rows = ["kind,id,count"]
        for attack, count in sorted(self.attack_usage.items()):
            rows.append(f"attack,{attack},{count}")
        for card, count in sorted(self.defense_purchases.items()):
            rows.append(f"defense,{card},{count}")
        return "\n".join(rows) + "\n"


def _run_match_task(args) -> MatchRecord:
    catalog, config, red, blue, seed = args
    return run_match(catalog, config, red, blue, seed)


def run_batch(
    n: int,
    catalog: ScenarioCatalog,
    config: GameConfig,
    red: PolicyDescriptor,
    blue: PolicyDescriptor,
    base_seed: int,
    jobs: int = 1,
) -> BalanceReport:
    """Run matches on seeds base_seed..base_seed+n-1 and aggregate."""
    if n < 1:
        raise ValueError("n must be >= 1")
    seeds = range(base_seed, base_seed + n)
    if jobs > 1:
        tasks = ((catalog, config, red, blue, seed) for seed in seeds)
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            records = pool.map(_run_match_task, tasks, chunksize=max(1, n // (jobs * 8)))
            return _aggregate(records, n, catalog, config, red, blue, base_seed)
    records = (run_match(catalog, config, red, blue, seed) for seed in seeds)
    return _aggregate(records, n, catalog, config, red, blue, base_seed)


def _aggregate(records, n, catalog, config, red, blue, base_seed) -> BalanceReport:
    red_wins = 0
    rounds_sum = 0
    cond_games: Counter = Counter()
    cond_wins: Counter = Counter()
    attack_usage: Counter = Counter()
    defense_purchases: Counter = Counter()

    for record in records:
        if record.winner == engine.RED:
            red_wins += 1
            rounds_sum += record.rounds_played
        if record.chosen_win_condition is not None:
            cond_games[record.chosen_win_condition] += 1
            if record.winner == engine.RED:
                cond_wins[record.chosen_win_condition] += 1
        for event in record.events:
            kind = event["type"]
            if kind == "attack_resolved":
                attack_usage[event["card"]] += 1
            elif kind == "blue_setup_done":
                for purchase in event["purchases"]:
                    defense_purchases[purchase["card"]] += 1
            elif kind == "blue_reinforced":
                defense_purchases[event["card"]] += 1

    per_condition = {
        cond: {
            "games": games,
            "red_wins": cond_wins[cond],
            "red_win_rate": cond_wins[cond] / games,
        }
        for cond, games in sorted(cond_games.items())
    }
    public_config = config.to_dict()
    public_config.pop("seed", None)
    return BalanceReport(
        games=n,
        red_wins=red_wins,
        red_win_rate=red_wins / n,
        per_condition=per_condition,
        mean_rounds_to_red_win=(rounds_sum / red_wins) if red_wins else None,
        attack_usage=dict(sorted(attack_usage.items())),
        defense_purchases=dict(sorted(defense_purchases.items())),
        base_seed=base_seed,
        policies={"red": red.id, "blue": blue.id},
        config=public_config,
        catalog_digest=catalog.digest(),
    )


# --- reachability --------------------------------------------------------------


def reachability_check(catalog: ScenarioCatalog) -> dict:
    """Shortest legal attack chain per win condition, or unreachable."""
    result = {}
    for cond_id, chain in chains.condition_chains(catalog).items():
        if chain is None:
            result[cond_id] = {"reachable": False, "length": None, "chain": []}
        else:
            result[cond_id] = {
                "reachable": True,
                "length": len(chain),
                "chain": [{"attack": a, "location": l} for a, l in chain],
            }
    return result


def replay_record(catalog: ScenarioCatalog, record: MatchRecord) -> GameState:
    """Re-run a recorded transcript; raises ReplayError on any divergence."""
    state = engine.replay_events(catalog, list(record.events))
    if state.winner != record.winner:
        raise engine.ReplayError(
            f"replayed winner {state.winner!r} != recorded {record.winner!r}"
        )
    if engine.state_digest(state) != record.final_digest:
        raise engine.ReplayError("replayed state digest differs from the record")
    return state
