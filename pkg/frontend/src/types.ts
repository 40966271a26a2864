/** Wire types for the perihack session server. */

export type Team = "red" | "blue";

export interface LocationSpec {
  id: string;
  name: string;
  kind: "physical-premise" | "network-node";
  ic_slots: number;
}

export interface Prerequisite {
  any_of: string[];
  binding: "any" | "same-location";
}

export interface AttackCardSpec {
  id: string;
  name: string;
  kind: "attack" | "swap";
  copies: number;
  attack_bonus: number;
  targets: string[];
  prerequisite: Prerequisite | null;
}

export interface DefenseCardSpec {
  id: string;
  name: string;
  deck: "GC" | "IC";
  cost: number;
  copies: number;
  placements: string[];
  counters: { attack: string; bonus: number }[];
  special: "none" | "extra-budget" | "honeypot" | "decoy";
}

export interface WinConditionSpec {
  id: string;
  title: string;
  satisfiers: { attack: string; locations: string[] }[];
}

export interface Catalog {
  schema_version: number;
  gc_slots: number;
  locations: LocationSpec[];
  attack_cards: AttackCardSpec[];
  defense_cards: DefenseCardSpec[];
  win_conditions: WinConditionSpec[];
}

export interface IcMarker {
  card: string | null; // null = face-down, unknown to this seat
  revealed: boolean;
}

export interface GameEvent {
  seq: number;
  type: string;
  [key: string]: unknown;
}

export type WireAction =
  | { type: "blue-setup"; purchases: { card: string; location: string | null }[] }
  | { type: "choose-win-condition"; condition: string }
  | { type: "play-attack"; card: string; location: string }
  | { type: "swap-card"; discard: string }
  | { type: "buy-cards"; count: number; discards: string[] }
  | { type: "declare-win" }
  | { type: "pass" };

export interface PlayerView {
  team: Team;
  phase: string;
  winner: Team | null;
  round_index: number;
  rounds_total: number;
  to_move: Team | null;
  red_budget: number;
  blue_budget: number;
  deck_count: number;
  discard_count: number;
  gc_placements: string[];
  ic_placements: Record<string, IcMarker[]>;
  hand_count: number;
  red_hand: string[] | null;
  discard: string[] | null;
  chosen_win_condition: string | null;
  success_history: { attack: string; location: string; round: number }[];
  play_counts: Record<string, number> | null;
  legal_actions: WireAction[];
  events: GameEvent[];
}

export interface SessionCreated {
  session_id: string;
  seats: { red_token?: string; blue_token?: string };
}

export interface ActionResult {
  accepted: boolean;
  events: GameEvent[];
}

export interface ApiErrorBody {
  error: { code: string; message: string };
}
