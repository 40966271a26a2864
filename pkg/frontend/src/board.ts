/** Board rendering: premises on the left flank, network nodes on the right,
 * the companywide defense slots along the top. Face-down defenses render as
 * card backs; revealed ones show their face. Pure DOM, re-rendered per view.
 */

import type { GameStore } from "./state.js";
import type { Catalog, PlayerView } from "./types.js";

function el(tag: string, className: string, text?: string): HTMLElement {
  const node = document.createElement(tag);
  node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export function renderStatus(view: PlayerView): HTMLElement {
  const bar = el("div", "status-bar");
  bar.append(
    el("span", "status-chip seat", `you are ${view.team}`),
    el("span", "status-chip", `phase: ${view.phase}`),
    el(
      "span",
      "status-chip",
      view.phase === "round" ? `round ${view.round_index} / ${view.rounds_total}` : "",
    ),
    el("span", "status-chip", `red ${view.red_budget} coins`),
    el("span", "status-chip", `blue ${view.blue_budget} coins`),
    el("span", "status-chip", `deck ${view.deck_count}`),
    el("span", "status-chip", `discard ${view.discard_count}`),
  );
  return bar;
}

function gcSlots(view: PlayerView, catalog: Catalog, store: GameStore): HTMLElement {
  const row = el("div", "gc-row");
  row.append(el("span", "zone-title", "Companywide defenses"));
  for (let i = 0; i < catalog.gc_slots; i += 1) {
    const cardId = view.gc_placements[i];
    const slot = el("div", cardId ? "gc-slot filled" : "gc-slot empty");
    slot.dataset.slot = String(i);
    if (cardId) {
      slot.textContent = store.cardName(cardId);
      slot.dataset.card = cardId;
    } else {
      slot.textContent = "empty slot";
    }
    row.append(slot);
  }
  return row;
}

function icMarkers(view: PlayerView, location: string, store: GameStore): HTMLElement {
  const wrap = el("div", "ic-row");
  for (const marker of view.ic_placements[location] ?? []) {
    if (marker.card === null) {
      const back = el("div", "ic-marker back", "▒▒");
      back.title = "face-down defense";
      wrap.append(back);
    } else {
      const face = el(
        "div",
        marker.revealed ? "ic-marker revealed" : "ic-marker own",
        store.cardName(marker.card),
      );
      face.dataset.card = marker.card;
      wrap.append(face);
    }
  }
  return wrap;
}

export function renderBoard(
  view: PlayerView,
  catalog: Catalog,
  store: GameStore,
  onTarget: (location: string) => void,
): HTMLElement {
  const board = el("div", "board");
  board.append(gcSlots(view, catalog, store));

  const flanks = el("div", "flanks");
  const premises = el("div", "flank premises");
  premises.append(el("h3", "flank-title", "Premises"));
  const network = el("div", "flank network");
  network.append(el("h3", "flank-title", "Office network"));
  const candidates = new Set(store.candidateTargets());

  for (const location of catalog.locations) {
    const zone = el("div", "zone");
    zone.dataset.location = location.id;
    if (candidates.has(location.id)) zone.classList.add("candidate");
    zone.append(el("div", "zone-name", location.name));
    zone.append(icMarkers(view, location.id, store));
    const hits = view.success_history.filter((s) => s.location === location.id);
    if (hits.length) {
      zone.append(
        el("div", "zone-breaches", hits.map((h) => store.cardName(h.attack)).join(", ")),
      );
    }
    zone.addEventListener("click", () => onTarget(location.id));
    (location.kind === "physical-premise" ? premises : network).append(zone);
  }
  flanks.append(premises, network);
  board.append(flanks);
  return board;
}

export function renderWinnerBanner(view: PlayerView, store: GameStore): HTMLElement | null {
  if (view.phase !== "finished") return null;
  const banner = el("div", `winner-banner ${view.winner}`);
  banner.append(el("h2", "winner-title", `${view.winner} team wins`));
  if (view.chosen_win_condition) {
    const condition = store.catalog?.win_conditions.find(
      (w) => w.id === view.chosen_win_condition,
    );
    banner.append(
      el(
        "div",
        "winner-condition",
        `Red's objective was: ${condition?.title ?? view.chosen_win_condition}`,
      ),
    );
  }
  if (view.success_history.length) {
    banner.append(
      el(
        "div",
        "winner-chain",
        "Attack chain: " +
          view.success_history
            .map((s) => `${store.cardName(s.attack)} @ ${s.location} (r${s.round})`)
            .join(" -> "),
      ),
    );
  }
  return banner;
}

const FEED_LABELS: Record<string, (e: Record<string, unknown>, s: GameStore) => string> = {
  game_created: () => "game created",
  blue_setup_done: () => "blue team finished its defenses",
  hand_dealt: (e) => `red drew ${(e.cards as string[])?.length ?? e.count} cards`,
  win_condition_chosen: (e, s) =>
    e.condition ? `red picked an objective: ${String(e.condition)}` : "red picked a hidden objective",
  round_started: (e) => `round ${e.round} started`,
  round_ended: (e) => `round ${e.round} ended`,
  turn_passed: (e) => `red passed (round ${e.round})`,
  attack_resolved: (e, s) => {
    const who = e.card ? s.cardName(e.card as string) : "an unidentified attack";
    return `${who} at ${e.location}: rolled ${e.roll}, ${e.attack_total} vs ${e.defense_total} — ${
      e.success ? "breach!" : "held"
    }`;
  },
  cards_bought: (e) => `red bought ${e.count} card(s)`,
  swap_performed: () => "red swapped a card",
  blue_reinforced: (e) => `blue placed a defense at ${e.location}`,
  win_declared: (e) => `red declares victory: ${e.condition}`,
  game_finished: (e) => `game over — ${e.winner} team wins`,
};

export function renderFeed(store: GameStore): HTMLElement {
  const feed = el("div", "event-feed");
  feed.append(el("h3", "flank-title", "Events"));
  const list = el("ul", "feed-list");
  for (const event of store.feed) {
    const label = FEED_LABELS[event.type];
    const item = el("li", `feed-item ${event.type}`, label ? label(event, store) : event.type);
    item.dataset.seq = String(event.seq);
    list.append(item);
  }
  feed.append(list);
  return feed;
}

export function renderDice(store: GameStore): HTMLElement | null {
  const roll = store.diceQueue[0];
  if (!roll) return null;
  const panel = el("div", `dice-panel ${roll.success ? "hit" : "miss"}`);
  panel.append(el("div", "dice-roll", String(roll.roll)));
  panel.append(
    el(
      "div",
      "dice-math",
      `${roll.attackTotal} attack vs ${roll.defenseTotal} defense`,
    ),
  );
  panel.append(
    el(
      "div",
      "dice-outcome",
      `${roll.card ? store.cardName(roll.card) : "Attack"} at ${roll.location}: ${
        roll.success ? "SUCCESS" : "FAILED"
      }`,
    ),
  );
  return panel;
}
