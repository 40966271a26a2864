/** Red-seat controls: the hand fan, swap/buy buttons, declare-victory. */

import type { GameStore } from "./state.js";
import type { WireAction } from "./types.js";

function el(tag: string, className: string, text?: string): HTMLElement {
  const node = document.createElement(tag);
  node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export function renderHand(store: GameStore): HTMLElement {
  const view = store.view!;
  const wrap = el("div", "hand");
  wrap.append(el("h3", "flank-title", "Your hand"));
  const fan = el("div", "hand-fan");
  for (const [index, cardId] of (view.red_hand ?? []).entries()) {
    const spec = store.catalog?.attack_cards.find((c) => c.id === cardId);
    const card = el("div", "hand-card");
    card.dataset.card = cardId;
    card.dataset.index = String(index);
    if (store.selectedCard === cardId) card.classList.add("selected");
    card.append(el("div", "card-name", store.cardName(cardId)));
    if (spec && spec.kind === "attack") {
      card.append(el("div", "card-bonus", `+${spec.attack_bonus}`));
      if (spec.prerequisite) {
        card.append(el("div", "card-chain", "chained"));
      }
    } else {
      card.append(el("div", "card-bonus", "swap"));
    }
    card.addEventListener("click", () => {
      store.selectCard(store.selectedCard === cardId ? null : cardId);
    });
    fan.append(card);
  }
  wrap.append(fan);

  const tip = store.blockedReason();
  if (tip) {
    const tooltip = el("div", "card-tooltip", tip);
    tooltip.setAttribute("role", "tooltip");
    wrap.append(tooltip);
  }
  return wrap;
}

export function renderRedControls(
  store: GameStore,
  submit: (action: WireAction, label: string) => void,
): HTMLElement {
  const view = store.view!;
  const controls = el("div", "controls");
  const legal = view.legal_actions;

  const declare = legal.find((a) => a.type === "declare-win");
  const declareBtn = el("button", "btn declare", "Declare victory") as HTMLButtonElement;
  declareBtn.disabled = !declare;
  declareBtn.addEventListener("click", () => {
    if (declare) store.stage(declare, "Declare victory and reveal your objective?");
  });
  controls.append(declareBtn);

  const buys = legal.filter(
    (a): a is Extract<WireAction, { type: "buy-cards" }> => a.type === "buy-cards",
  );
  const buyBtn = el("button", "btn buy", "Buy cards") as HTMLButtonElement;
  buyBtn.disabled = buys.length === 0;
  buyBtn.addEventListener("click", () => {
    // prefer the biggest haul that forces no discards, then the first option
    const free = buys.filter((a) => a.discards.length === 0);
    const pick = (free.length ? free : buys).sort((a, b) => b.count - a.count)[0];
    const label =
      pick.discards.length === 0
        ? `Buy ${pick.count} card(s)?`
        : `Buy ${pick.count} card(s), discarding ${pick.discards.join(", ")}?`;
    store.stage(pick, label);
  });
  controls.append(buyBtn);

  const swaps = legal.filter(
    (a): a is Extract<WireAction, { type: "swap-card" }> => a.type === "swap-card",
  );
  const swapBtn = el("button", "btn swap", "Swap selected") as HTMLButtonElement;
  const swapFor = swaps.find((a) => a.discard === store.selectedCard);
  swapBtn.disabled = !swapFor;
  swapBtn.addEventListener("click", () => {
    if (swapFor) {
      store.stage(swapFor, `Trade ${store.cardName(swapFor.discard)} for a random card?`);
    }
  });
  controls.append(swapBtn);

  const passBtn = el("button", "btn pass", "Pass (end round)") as HTMLButtonElement;
  passBtn.disabled = !legal.some((a) => a.type === "pass");
  passBtn.addEventListener("click", () => store.stage({ type: "pass" }, "End the round?"));
  controls.append(passBtn);

  return controls;
}

export function renderConfirm(
  store: GameStore,
  submit: (action: WireAction) => void,
): HTMLElement | null {
  const pending = store.pendingAction;
  if (!pending) return null;
  const bar = el("div", "confirm-bar");
  bar.append(el("span", "confirm-label", pending.label));
  const yes = el("button", "btn confirm-yes", "Confirm");
  yes.addEventListener("click", () => submit(pending.action));
  const no = el("button", "btn confirm-no", "Cancel");
  no.addEventListener("click", () => store.clearPending());
  bar.append(yes, no);
  return bar;
}
