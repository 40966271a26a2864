/** Entry point: the lobby screen, then the game App for the chosen seat. */

import { ApiClient } from "./api.js";
import { App, resolveServerUrl } from "./app.js";

function el(tag: string, className: string, text?: string): HTMLElement {
  const node = document.createElement(tag);
  node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

async function startGame(
  root: HTMLElement,
  serverUrl: string,
  seat: "red" | "blue",
  opponent: string,
): Promise<void> {
  const lobbyApi = new ApiClient(serverUrl);
  const seats: Record<string, string> =
    seat === "red" ? { red: "human", blue: opponent } : { blue: "human", red: opponent };
  const created = await lobbyApi.createSession({ seats });
  const token = seat === "red" ? created.seats.red_token : created.seats.blue_token;
  const api = new ApiClient(serverUrl, token ?? null);
  const app = new App(root, api, created.session_id);
  await app.start();
}

function renderLobby(root: HTMLElement, serverUrl: string): void {
  root.innerHTML = "";
  const panel = el("div", "lobby");
  panel.append(el("h1", "lobby-title", "PeriHack"));
  panel.append(el("p", "lobby-sub", `server: ${serverUrl}`));

  const seatPick = document.createElement("select");
  seatPick.className = "lobby-select seat-pick";
  for (const [value, label] of [
    ["red", "play RED (attackers)"],
    ["blue", "play BLUE (defenders)"],
  ]) {
    const option = document.createElement("option");
    option.value = value;
    option.textContent = label;
    seatPick.append(option);
  }
  panel.append(seatPick);

  const oppPick = document.createElement("select");
  oppPick.className = "lobby-select opp-pick";
  panel.append(oppPick);
  const fillOpponents = () => {
    oppPick.innerHTML = "";
    const options =
      seatPick.value === "red" ? ["budget-blue", "random"] : ["greedy-red", "random"];
    for (const policy of options) {
      const option = document.createElement("option");
      option.value = policy;
      option.textContent = `vs ${policy}`;
      oppPick.append(option);
    }
  };
  fillOpponents();
  seatPick.addEventListener("change", fillOpponents);

  const go = el("button", "btn lobby-go", "Start game");
  go.addEventListener("click", () => {
    go.setAttribute("disabled", "true");
    startGame(root, serverUrl, seatPick.value as "red" | "blue", oppPick.value).catch(
      (error) => {
        root.innerHTML = "";
        root.append(el("div", "error-note", `could not start: ${error}`));
        renderLobby(root, serverUrl);
      },
    );
  });
  panel.append(go);
  root.append(panel);
}

export function mount(): void {
  const root = document.getElementById("app");
  if (!root) throw new Error("missing #app element");
  renderLobby(root, resolveServerUrl());
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  mount();
}
