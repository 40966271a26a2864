/** Shared test fixtures: a real catalog and a recorded red-seat view. */

import { readFileSync } from "node:fs";
import { fileURLToPath } from "node:url";
import { dirname, join } from "node:path";
import type { Catalog, PlayerView } from "../src/types";

const here = dirname(fileURLToPath(import.meta.url));

export function stockCatalog(): Catalog {
  const raw = readFileSync(join(here, "..", "..", "catalog", "default.json"), "utf-8");
  return JSON.parse(raw) as Catalog;
}

/** Red seat, round 1: sqli is playable, the rubber ducky is gated. */
export function redRoundView(): PlayerView {
  return {
    team: "red",
    phase: "round",
    winner: null,
    round_index: 1,
    rounds_total: 10,
    to_move: "red",
    red_budget: 5,
    blue_budget: 0,
    deck_count: 49,
    discard_count: 0,
    gc_placements: ["gc-awareness"],
    ic_placements: {
      database: [{ card: null, revealed: false }],
      "pc-1": [
        { card: null, revealed: false },
        { card: "ic-2fa", revealed: true },
      ],
    },
    hand_count: 5,
    red_hand: ["sqli", "usb-rubber-ducky", "phishing", "dos-ping-flood", "backdoor"],
    discard: [],
    chosen_win_condition: "wc-database-breach",
    success_history: [],
    play_counts: {},
    legal_actions: [
      { type: "play-attack", card: "sqli", location: "database" },
      { type: "play-attack", card: "phishing", location: "pc-1" },
      { type: "play-attack", card: "phishing", location: "pc-2" },
      { type: "play-attack", card: "phishing", location: "pc-3" },
      { type: "play-attack", card: "phishing", location: "ceo-pc" },
      { type: "play-attack", card: "dos-ping-flood", location: "web-server" },
      { type: "play-attack", card: "dos-ping-flood", location: "firewall" },
      { type: "buy-cards", count: 1, discards: ["backdoor"] },
      { type: "pass" },
    ],
    events: [
      { seq: 1, type: "game_created", catalog_digest: "x", config: {} },
      {
        seq: 2,
        type: "blue_setup_done",
        gc: ["gc-awareness"],
        ic_counts: { database: 1, "pc-1": 2 },
        cost: 6,
        budget_granted: 0,
        blue_budget: 0,
      },
      { seq: 3, type: "hand_dealt", count: 5, redrawn_swaps: 0, deck_count: 49 },
      { seq: 4, type: "win_condition_chosen", condition: "wc-database-breach" },
      { seq: 5, type: "round_started", round: 1 },
    ],
  };
}
