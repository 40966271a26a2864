// @vitest-environment jsdom
//
// Playability: a scripted browser session plays a full human-red vs
// budget-blue game through the UI against the real game server, including a
// prerequisite-blocked card selection (tooltip shown) and the declare-victory
// flow. Seed 21 deals red both the gated USB Rubber Ducky and a SQLi that
// lands on its first roll, so the script is fully deterministic.

import { spawn, type ChildProcess } from "node:child_process";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api";
import { App } from "../src/app";

const REPO_ROOT = join(dirname(fileURLToPath(import.meta.url)), "..", "..");

let server: ChildProcess;
let serverUrl = "";

async function until(cond: () => boolean, what: string, ms = 20000): Promise<void> {
  const started = Date.now();
  while (!cond()) {
    if (Date.now() - started > ms) throw new Error(`timed out waiting for ${what}`);
    await new Promise((resolve) => setTimeout(resolve, 40));
  }
}

beforeAll(async () => {
  const python = process.env.PYTHON ?? "python3";
  server = spawn(python, ["-u", "-m", "perihack.cli", "serve", "--port", "0"], {
    cwd: REPO_ROOT,
    stdio: ["ignore", "pipe", "pipe"],
  });
  const port = await new Promise<string>((resolve, reject) => {
    const timer = setTimeout(() => reject(new Error("server did not start")), 15000);
    server.stdout!.on("data", (chunk: Buffer) => {
      const match = /listening on http:\/\/[^:]+:(\d+)/.exec(chunk.toString());
      if (match) {
        clearTimeout(timer);
        resolve(match[1]);
      }
    });
    server.stderr!.on("data", (chunk: Buffer) => process.stderr.write(chunk));
  });
  serverUrl = `http://127.0.0.1:${port}`;
});

afterAll(() => {
  server?.kill();
});

function click(root: HTMLElement, selector: string): void {
  const node = root.querySelector<HTMLElement>(selector);
  if (!node) throw new Error(`nothing matches ${selector}`);
  node.click();
}

describe("full game through the UI", () => {
  it("red human beats budget-blue via SQLi, with a blocked-card tooltip on the way", async () => {
    const lobby = new ApiClient(serverUrl);
    const created = await lobby.createSession({
      seats: { red: "human", blue: "budget-blue" },
      seed: 21,
    });
    expect(created.seats.red_token).toBeDefined();

    const root = document.createElement("div");
    document.body.append(root);
    const api = new ApiClient(serverUrl, created.seats.red_token!);
    const app = new App(root, api, created.session_id, { diceMs: 500, pollWait: 1 });
    await app.start();

    // blue's AI setup already ran; red holds the objective choice
    await until(() => app.store.view?.phase === "choose-win-condition", "choose phase");
    expect(root.querySelectorAll(".condition-chooser .btn.condition")).toHaveLength(7);

    click(root, "[data-condition='wc-database-breach']");
    await until(() => app.store.pendingAction !== null, "confirm bar");
    expect(root.querySelector(".confirm-bar")!.textContent).toContain("Database Breach");
    click(root, ".confirm-yes");
    await until(() => app.store.view?.phase === "round", "round 1");

    // the gated card: selecting it highlights nothing and explains why
    click(root, ".hand-card[data-card='usb-rubber-ducky']");
    await until(() => app.store.selectedCard === "usb-rubber-ducky", "selection");
    expect(root.querySelectorAll(".zone.candidate")).toHaveLength(0);
    const tooltip = root.querySelector("[role='tooltip']");
    expect(tooltip).not.toBeNull();
    expect(tooltip!.textContent).toContain("Tailgating");

    // the live path: select sqli, its only target lights up, play it
    click(root, ".hand-card[data-card='sqli']");
    await until(() => app.store.selectedCard === "sqli", "sqli selected");
    const lit = [...root.querySelectorAll<HTMLElement>(".zone.candidate")];
    expect(lit.map((z) => z.dataset.location)).toEqual(["database"]);
    click(root, ".zone[data-location='database']");
    await until(() => app.store.pendingAction !== null, "play confirm");
    click(root, ".confirm-yes");

    // seed 21: the roll lands; the dice panel teaches the math
    await until(() => root.querySelector(".dice-panel") !== null, "dice panel");
    const dice = root.querySelector(".dice-panel")!;
    expect(dice.textContent).toContain("13");
    expect(dice.textContent).toContain("15 attack vs 12 defense");
    await until(() => app.store.view!.success_history.length === 1, "breach recorded");

    // declare the win and watch the reveal
    await until(() => !root.querySelector<HTMLButtonElement>(".btn.declare")!.disabled, "declare enabled");
    click(root, ".btn.declare");
    await until(() => app.store.pendingAction !== null, "declare confirm");
    click(root, ".confirm-yes");
    await until(() => app.store.view?.phase === "finished", "game end");

    expect(app.store.view!.winner).toBe("red");
    const banner = root.querySelector(".winner-banner")!;
    expect(banner.textContent).toContain("red team wins");
    expect(banner.textContent).toContain("Database Breach");
    app.stop();
  });

  it("rejected actions surface the server message and roll back", async () => {
    const lobby = new ApiClient(serverUrl);
    const created = await lobby.createSession({
      seats: { red: "human", blue: "budget-blue" },
      seed: 3,
    });
    const root = document.createElement("div");
    document.body.append(root);
    const api = new ApiClient(serverUrl, created.seats.red_token!);
    const app = new App(root, api, created.session_id, { diceMs: 5, pollWait: 1 });
    await app.start();
    await until(() => app.store.view?.phase === "choose-win-condition", "choose phase");

    // bypass the UI guard and submit an action the server must refuse
    await app.submit({ type: "play-attack", card: "sqli", location: "database" });
    await until(() => app.store.lastError !== null, "error note");
    expect(root.querySelector(".error-note")!.textContent).toContain("illegal-action");
    expect(app.store.pendingAction).toBeNull();
    app.stop();
  });

  it("the UI's submittable plays mirror the server's legal set exactly", async () => {
    const lobby = new ApiClient(serverUrl);
    const created = await lobby.createSession({
      seats: { red: "human", blue: "budget-blue" },
      seed: 21,
    });
    const root = document.createElement("div");
    document.body.append(root);
    const api = new ApiClient(serverUrl, created.seats.red_token!);
    const app = new App(root, api, created.session_id, { diceMs: 5, pollWait: 1 });
    await app.start();
    await until(() => app.store.view?.phase === "choose-win-condition", "choose phase");
    await app.submit({ type: "choose-win-condition", condition: "wc-ddos" });
    await until(() => app.store.view?.phase === "round", "round 1");

    const view = app.store.view!;
    for (const card of view.red_hand!) {
      app.store.selectCard(card);
      const highlighted = [...root.querySelectorAll<HTMLElement>(".zone.candidate")].map(
        (z) => z.dataset.location,
      );
      const legal = view.legal_actions
        .filter((a) => a.type === "play-attack" && a.card === card)
        .map((a) => (a as { location: string }).location);
      expect(new Set(highlighted)).toEqual(new Set(legal));
    }
    app.stop();
  });
});
