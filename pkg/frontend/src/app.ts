/** Application wiring: one App drives one seat of one session.
 *
 * Gesture flow for red: click a hand card, legal targets light up, click a
 * zone, confirm, POST. Rejections surface the server's message and roll the
 * selection back. A long-poll loop keeps the event feed and view fresh when
 * the opponent (or an AI seat) moves.
 */

import { ApiClient, ApiError } from "./api.js";
import { renderBoard, renderDice, renderFeed, renderStatus, renderWinnerBanner } from "./board.js";
import { renderConfirm, renderHand, renderRedControls } from "./hand.js";
import { GameStore } from "./state.js";
import type { WireAction } from "./types.js";

function el(tag: string, className: string, text?: string): HTMLElement {
  const node = document.createElement(tag);
  node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export interface AppOptions {
  diceMs?: number; // how long each dice result stays up
  pollWait?: number; // long-poll wait seconds
}

export class App {
  store = new GameStore();
  private diceTimer: ReturnType<typeof setTimeout> | null = null;
  private polling = false;
  private stopped = false;

  constructor(
    public root: HTMLElement,
    public api: ApiClient,
    public sessionId: string,
    private options: AppOptions = {},
  ) {
    this.store.onChange(() => this.render());
  }

  async start(): Promise<void> {
    this.store.setCatalog(await this.api.catalog(this.sessionId));
    await this.refreshView();
    void this.pollLoop();
  }

  stop(): void {
    this.stopped = true;
  }

  async refreshView(): Promise<void> {
    const view = await this.api.view(this.sessionId);
    this.store.setView(view);
  }

  private async pollLoop(): Promise<void> {
    if (this.polling) return;
    this.polling = true;
    while (!this.stopped && this.store.view?.phase !== "finished") {
      try {
        const events = await this.api.events(
          this.sessionId,
          this.store.eventCursor,
          this.options.pollWait ?? 20,
        );
        if (events.length > 0) {
          this.store.applyEvents(events);
          await this.refreshView();
        }
      } catch {
        await new Promise((resolve) => setTimeout(resolve, 1000));
      }
    }
    this.polling = false;
  }

  /** Click on a board zone: play the selected card there if that is legal. */
  targetClicked(location: string): void {
    const card = this.store.selectedCard;
    if (!card || !this.store.candidateTargets().includes(location)) return;
    this.store.stage(
      { type: "play-attack", card, location },
      `Play ${this.store.cardName(card)} against ${location}?`,
    );
  }

  async submit(action: WireAction): Promise<void> {
    try {
      const result = await this.api.submit(this.sessionId, action);
      this.store.selectedCard = null;
      this.store.pendingAction = null;
      this.store.applyEvents(result.events);
      await this.refreshView();
      this.scheduleDice();
    } catch (error) {
      if (error instanceof ApiError) {
        this.store.fail(`${error.code}: ${error.message}`);
      } else {
        this.store.fail(String(error));
      }
    }
  }

  private scheduleDice(): void {
    if (this.diceTimer || this.store.diceQueue.length === 0) return;
    this.diceTimer = setTimeout(() => {
      this.diceTimer = null;
      this.store.nextDice();
      this.scheduleDice();
    }, this.options.diceMs ?? 1600);
  }

  // -- rendering ----------------------------------------------------------------

  render(): void {
    const { view, catalog } = this.store;
    this.root.innerHTML = "";
    if (!view || !catalog) {
      this.root.append(el("div", "loading", "loading..."));
      return;
    }
    this.root.append(renderStatus(view));

    if (this.store.lastError) {
      const note = el("div", "error-note", this.store.lastError);
      const dismiss = el("button", "btn dismiss", "ok");
      dismiss.addEventListener("click", () => this.store.clearError());
      note.append(dismiss);
      this.root.append(note);
    }

    const banner = renderWinnerBanner(view, this.store);
    if (banner) this.root.append(banner);

    const dice = renderDice(this.store);
    if (dice) {
      this.root.append(dice);
      this.scheduleDice();
    }

    this.root.append(renderBoard(view, catalog, this.store, (loc) => this.targetClicked(loc)));

    if (view.phase === "choose-win-condition" && view.team === "red") {
      this.root.append(this.renderConditionChooser());
    }
    if (view.team === "red" && view.red_hand) {
      this.root.append(renderHand(this.store));
      if (view.phase === "round") {
        this.root.append(renderRedControls(this.store, (a, label) => this.store.stage(a, label)));
      }
    }
    if (view.team === "blue" && view.phase === "blue-setup") {
      this.root.append(this.renderBlueSetup());
    }

    const confirm = renderConfirm(this.store, (action) => void this.submit(action));
    if (confirm) this.root.append(confirm);

    this.root.append(renderFeed(this.store));
  }

  private renderConditionChooser(): HTMLElement {
    const panel = el("div", "condition-chooser");
    panel.append(el("h3", "flank-title", "Pick your hidden objective"));
    for (const action of this.store.view?.legal_actions ?? []) {
      if (action.type !== "choose-win-condition") continue;
      const condition = this.store.catalog?.win_conditions.find(
        (w) => w.id === action.condition,
      );
      const btn = el("button", "btn condition", condition?.title ?? action.condition);
      btn.dataset.condition = action.condition;
      btn.addEventListener("click", () =>
        this.store.stage(action, `Pursue "${condition?.title ?? action.condition}"?`),
      );
      panel.append(btn);
    }
    return panel;
  }

  private blueBasket: { card: string; location: string | null }[] = [];

  private renderBlueSetup(): HTMLElement {
    const catalog = this.store.catalog!;
    const view = this.store.view!;
    const panel = el("div", "blue-setup");
    panel.append(el("h3", "flank-title", "Spend your budget"));
    const basketCost = this.blueBasket.reduce(
      (sum, p) => sum + (catalog.defense_cards.find((c) => c.id === p.card)?.cost ?? 0),
      0,
    );
    const grant = this.blueBasket.some(
      (p) => catalog.defense_cards.find((c) => c.id === p.card)?.special === "extra-budget",
    )
      ? 5
      : 0;
    panel.append(
      el(
        "div",
        "basket-cost",
        `staged cost ${basketCost} of ${view.blue_budget}${grant ? ` (+${grant} grant)` : ""}`,
      ),
    );

    for (const card of catalog.defense_cards) {
      const row = el("div", "shop-row");
      row.append(el("span", "shop-name", `${card.name} (${card.cost}c, ${card.deck})`));
      const spots = card.deck === "GC" ? [null] : card.placements;
      for (const spot of spots) {
        const btn = el("button", "btn shop-add", spot ?? "companywide");
        btn.dataset.card = card.id;
        if (spot) btn.dataset.location = spot;
        btn.addEventListener("click", () => {
          this.blueBasket.push({ card: card.id, location: spot });
          this.render();
        });
        row.append(btn);
      }
      panel.append(row);
    }

    if (this.blueBasket.length) {
      const staged = el("div", "basket");
      for (const [index, item] of this.blueBasket.entries()) {
        const chip = el(
          "button",
          "btn basket-chip",
          `${this.store.cardName(item.card)}${item.location ? ` @ ${item.location}` : ""} ✕`,
        );
        chip.addEventListener("click", () => {
          this.blueBasket.splice(index, 1);
          this.render();
        });
        staged.append(chip);
      }
      panel.append(staged);
    }

    const done = el("button", "btn blue-done", "Lock in defenses");
    done.addEventListener("click", () => {
      const purchases = [...this.blueBasket];
      this.store.stage(
        { type: "blue-setup", purchases },
        `Lock ${purchases.length} purchase(s)? Companywide cards can never be moved.`,
      );
    });
    panel.append(done);
    return panel;
  }
}

/** The client's single configuration knob. */
export function resolveServerUrl(): string {
  const params = new URLSearchParams(window.location.search);
  const fromQuery = params.get("server");
  if (fromQuery) return fromQuery.replace(/\/$/, "");
  const injected = (window as unknown as { PERIHACK_SERVER_URL?: string }).PERIHACK_SERVER_URL;
  if (injected) return injected.replace(/\/$/, "");
  return window.location.origin;
}
