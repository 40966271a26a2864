/** Client-side game state: the seat's server view plus UI selection state.
 *
 * The store renders only what the server sent for this seat; hidden
 * information never arrives, so it cannot leak. Candidate targets for a
 * selected card are derived verbatim from the view's legal actions, keeping
 * the UI's idea of legality identical to the server's.
 */

import type { Catalog, GameEvent, PlayerView, WireAction } from "./types.js";

export interface DiceResult {
  card: string | null;
  location: string;
  roll: number;
  attackTotal: number;
  defenseTotal: number;
  success: boolean;
}

export interface PendingAction {
  action: WireAction;
  label: string;
}

export class GameStore {
  view: PlayerView | null = null;
  catalog: Catalog | null = null;
  selectedCard: string | null = null;
  pendingAction: PendingAction | null = null;
  lastError: string | null = null;
  eventCursor = 0;
  feed: GameEvent[] = [];
  diceQueue: DiceResult[] = [];
  listeners: (() => void)[] = [];

  onChange(listener: () => void): void {
    this.listeners.push(listener);
  }

  private notify(): void {
    for (const listener of this.listeners) listener();
  }

  setCatalog(catalog: Catalog): void {
    this.catalog = catalog;
    this.notify();
  }

  setView(view: PlayerView): void {
    this.view = view;
    this.applyEvents(view.events);
    if (this.selectedCard && !this.cardIsSelectable(this.selectedCard)) {
      this.selectedCard = null;
    }
    this.notify();
  }

  /** Fold in new events, strictly in sequence order; duplicates are dropped. */
  applyEvents(events: GameEvent[]): void {
    const fresh = events
      .filter((e) => e.seq > this.eventCursor)
      .sort((a, b) => a.seq - b.seq);
    for (const event of fresh) {
      this.feed.push(event);
      this.eventCursor = event.seq;
      if (event.type === "attack_resolved") {
        this.diceQueue.push({
          card: (event.card as string | null) ?? null,
          location: event.location as string,
          roll: event.roll as number,
          attackTotal: event.attack_total as number,
          defenseTotal: event.defense_total as number,
          success: event.success as boolean,
        });
      }
    }
    if (fresh.length > 0) this.notify();
  }

  nextDice(): DiceResult | undefined {
    const result = this.diceQueue.shift();
    this.notify();
    return result;
  }

  // -- selection ------------------------------------------------------------

  legalPlays(): Extract<WireAction, { type: "play-attack" }>[] {
    return (this.view?.legal_actions ?? []).filter(
      (a): a is Extract<WireAction, { type: "play-attack" }> => a.type === "play-attack",
    );
  }

  cardIsSelectable(cardId: string): boolean {
    return (this.view?.red_hand ?? []).includes(cardId);
  }

  selectCard(cardId: string | null): void {
    this.selectedCard = cardId;
    this.pendingAction = null;
    this.notify();
  }

  /** Locations highlighted for the selected card == the server's legal set. */
  candidateTargets(): string[] {
    if (!this.selectedCard) return [];
    return this.legalPlays()
      .filter((a) => a.card === this.selectedCard)
      .map((a) => a.location);
  }

  /** Why the selected card has no playable target right now, if it has none. */
  blockedReason(): string | null {
    if (!this.selectedCard || this.candidateTargets().length > 0) return null;
    const card = this.catalog?.attack_cards.find((c) => c.id === this.selectedCard);
    if (!card) return null;
    if (card.kind === "swap") {
      return "Swap cards are used with the swap button, not played at a location.";
    }
    const attackSpent = !(this.view?.legal_actions ?? []).some(
      (a) => a.type === "play-attack",
    );
    if (card.prerequisite) {
      const achieved = new Set(
        (this.view?.success_history ?? []).map((s) => s.attack),
      );
      const missing = card.prerequisite.any_of.filter((id) => !achieved.has(id));
      if (missing.length === card.prerequisite.any_of.length) {
        const names = card.prerequisite.any_of.map((id) => this.cardName(id));
        return `Needs a previously successful ${names.join(" or ")}.`;
      }
    }
    if (attackSpent) return "The attack for this round is already spent.";
    return "No legal target right now.";
  }

  cardName(id: string): string {
    const attack = this.catalog?.attack_cards.find((c) => c.id === id);
    if (attack) return attack.name;
    const defense = this.catalog?.defense_cards.find((c) => c.id === id);
    return defense ? defense.name : id;
  }

  stage(action: WireAction, label: string): void {
    this.pendingAction = { action, label };
    this.notify();
  }

  clearPending(): void {
    this.pendingAction = null;
    this.notify();
  }

  fail(message: string): void {
    // rejected action: surface the server's message, roll selection back
    this.lastError = message;
    this.pendingAction = null;
    this.selectedCard = null;
    this.notify();
  }

  clearError(): void {
    this.lastError = null;
    this.notify();
  }
}
