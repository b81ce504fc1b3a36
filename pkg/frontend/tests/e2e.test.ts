/**
 * Scripted browser flow against a real running API server:
 * register -> confirm (token read from the store's outbox via a snapshot
 * export) -> login -> list the seeded vehicles -> preference wizard ->
 * ranked list (cross-checked against a direct /rank call) -> simulate
 * (cross-checked against /simulate) -> book -> rate.
 */

import { ChildProcess, spawn, spawnSync } from "node:child_process";
import { mkdtempSync, readFileSync, rmSync, writeFileSync } from "node:fs";
import net from "node:net";
import os from "node:os";
import path from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { App } from "../src/app.js";

const PYTHON = process.env.PYTHON ?? "python3";
const GEO = { lat: 41.1579, lon: -8.6291, radius_km: 25 };
const EMAIL = "uiflow@example.com";
const PASSWORD = "hunter2secret";

let workdir: string;
let dbPath: string;
let server: ChildProcess | undefined;
let baseUrl: string;

const fetchImpl: typeof fetch = (...args) => fetch(...args);

function freePort(): Promise<number> {
  return new Promise((resolve, reject) => {
    const probe = net.createServer();
    probe.listen(0, "127.0.0.1", () => {
      const address = probe.address();
      if (address && typeof address === "object") {
        const port = address.port;
        probe.close(() => resolve(port));
      } else {
        probe.close(() => reject(new Error("no port assigned")));
      }
    });
  });
}

function runCli(...args: string[]): void {
  const result = spawnSync(PYTHON, ["-m", "carshare.cli", ...args], { encoding: "utf-8" });
  if (result.status !== 0) {
    throw new Error(`carshare ${args.join(" ")} failed: ${result.stderr || result.stdout}`);
  }
}

/** Confirmation token queued for an address, read from a snapshot export. */
function outboxToken(recipient: string): string {
  const snapshotPath = path.join(workdir, "snapshot.json");
  runCli("snapshot", "--db", dbPath, "--out", snapshotPath);
  const snapshot = JSON.parse(readFileSync(snapshotPath, "utf-8"));
  const outbox = snapshot.tables.outbox;
  const recipientIndex = outbox.columns.indexOf("recipient");
  const bodyIndex = outbox.columns.indexOf("body");
  const row = outbox.rows.find((r: unknown[]) => r[recipientIndex] === recipient);
  if (!row) throw new Error(`no outbox message for ${recipient}`);
  return row[bodyIndex] as string;
}

async function waitFor(check: () => boolean, what: string, timeoutMs = 20_000): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  while (Date.now() < deadline) {
    if (check()) return;
    await new Promise((r) => setTimeout(r, 25));
  }
  throw new Error(`timed out waiting for ${what}`);
}

async function waitForServer(): Promise<void> {
  const probe = `${baseUrl}/api/v1/vehicles?lat=${GEO.lat}&lon=${GEO.lon}&radius_km=${GEO.radius_km}`;
  const deadline = Date.now() + 30_000;
  while (Date.now() < deadline) {
    try {
      const response = await fetchImpl(probe);
      if (response.ok) return;
    } catch {
      // not listening yet
    }
    await new Promise((r) => setTimeout(r, 100));
  }
  throw new Error("API server did not come up");
}

function field(card: Element, name: string): string {
  const node = card.querySelector(`.field-${name}`);
  expect(node, `${name} field on a vehicle card`).not.toBeNull();
  return node!.textContent ?? "";
}

beforeAll(async () => {
  workdir = mkdtempSync(path.join(os.tmpdir(), "carshare-e2e-"));
  dbPath = path.join(workdir, "e2e.db");
  runCli("seed", "--n", "3", "--seed", "7", "--db", dbPath);

  const port = await freePort();
  baseUrl = `http://127.0.0.1:${port}`;
  const configPath = path.join(workdir, "config.json");
  writeFileSync(
    configPath,
    JSON.stringify({ db_path: dbPath, host: "127.0.0.1", port, scrypt_n: 1024 }),
  );
  server = spawn(PYTHON, ["-m", "carshare.cli", "serve", "--config", configPath], {
    stdio: ["ignore", "pipe", "pipe"],
  });
  await waitForServer();
});

afterAll(async () => {
  if (server) {
    server.kill("SIGTERM");
    await new Promise((resolve) => server!.once("exit", resolve));
  }
  rmSync(workdir, { recursive: true, force: true });
});

describe("browser flow", () => {
  it("registers, lists, ranks, simulates, books, and rates end to end", async () => {
    const root = document.createElement("div");
    document.body.replaceChildren(root);
    const app = new App(root, new ApiClient(baseUrl, fetchImpl));
    app.mount();

    // -- register ---------------------------------------------------------
    const setInput = (selector: string, value: string) => {
      const input = root.querySelector<HTMLInputElement>(selector);
      expect(input, selector).not.toBeNull();
      input!.value = value;
    };
    const submitForm = (selector: string) => {
      root.querySelector(selector)!.dispatchEvent(new Event("submit"));
    };

    setInput("input[name=register-email]", EMAIL);
    setInput("input[name=register-password]", PASSWORD);
    submitForm("form.form-register");
    await waitFor(
      () => (root.querySelector(".banner-info")?.textContent ?? "").includes("Account created"),
      "registration acknowledgment",
    );

    // -- confirm with the token from the outbox ---------------------------
    const token = outboxToken(EMAIL);
    expect(token.length).toBeGreaterThan(40); // 256-bit url-safe token
    setInput("input[name=confirm-token]", token);
    submitForm("form.form-confirm");
    await waitFor(
      () => (root.querySelector(".banner-info")?.textContent ?? "").includes("confirmed"),
      "confirmation acknowledgment",
    );

    // -- login ------------------------------------------------------------
    setInput("input[name=login-email]", EMAIL);
    setInput("input[name=login-password]", PASSWORD);
    submitForm("form.form-login");
    await waitFor(() => root.querySelector(".view-listing") !== null, "listing view");
    expect(app.session.active).toBe(true);

    // -- listing: 3 seeded vehicles, all 8 fields on every card ------------
    const cards = [...root.querySelectorAll(".vehicle-card")];
    expect(cards).toHaveLength(3);
    for (const card of cards) {
      expect(field(card, "brand")).toMatch(/Brand: \S/);
      expect(field(card, "model")).toMatch(/Model: \S/);
      expect(field(card, "color")).toMatch(/Color: \S/);
      expect(field(card, "air-conditioning")).toMatch(/Air conditioning: (yes|no)/);
      expect(field(card, "price")).toMatch(/Price per hour: \$\d+\.\d{2}/);
      expect(field(card, "fuel")).toMatch(/Fuel: (petrol|diesel|electric|hybrid)/);
      expect(field(card, "odometer")).toMatch(/Kilometers: [\d,]+ km/);
      expect(field(card, "parking")).toMatch(/Parked at: \S/);
      expect(card.querySelector(".ratings")).not.toBeNull();
    }

    // -- preference wizard --------------------------------------------------
    root.querySelector<HTMLButtonElement>("button.open-wizard")!.click();
    await waitFor(() => root.querySelector(".view-wizard") !== null, "wizard view");
    const selections = ["2", "4", "2"]; // performance > consumption > security
    const selects = [...root.querySelectorAll<HTMLSelectElement>(".view-wizard select")];
    expect(selects).toHaveLength(3);
    selects.forEach((select, index) => {
      select.value = selections[index]!;
      select.dispatchEvent(new Event("change"));
    });
    const wizardSubmit = root.querySelector<HTMLButtonElement>(".view-wizard button[type=submit]")!;
    expect(wizardSubmit.disabled).toBe(false);
    submitForm(".view-wizard form");
    await waitFor(() => root.querySelector(".view-results") !== null, "ranked results view");

    // order must match a direct ranking call with the same inputs
    const direct = await fetchImpl(`${baseUrl}/api/v1/rank`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ ...GEO, judgments: [2, 4, 2], mode: "fast" }),
    });
    expect(direct.status).toBe(200);
    const directRank = (await direct.json()) as {
      entries: { vehicle_id: number; rank: number }[];
    };
    const shownOrder = [...root.querySelectorAll(".ranked-entry")].map((node) =>
      Number(node.getAttribute("data-vehicle-id")),
    );
    expect(shownOrder).toEqual(directRank.entries.map((entry) => entry.vehicle_id));

    // -- vehicle detail: simulate then book --------------------------------
    root.querySelector<HTMLButtonElement>(".ranked-entry .open-vehicle")!.click();
    await waitFor(() => root.querySelector(".view-detail") !== null, "detail view");
    const vehicleId = shownOrder[0]!;

    const bookButton = root.querySelector<HTMLButtonElement>(".form-book button[type=submit]")!;
    expect(bookButton.disabled).toBe(true); // no quote on screen yet

    setInput("input[name=travel_minutes]", "60");
    setInput("input[name=standby_minutes]", "30");
    setInput("input[name=distance_km]", "10");
    submitForm("form.form-simulate");
    await waitFor(() => root.querySelector<HTMLElement>(".quote")?.hidden === false, "quote");

    const simulateResponse = await fetchImpl(`${baseUrl}/api/v1/simulate`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({
        vehicle_id: vehicleId,
        travel_minutes: 60,
        standby_minutes: 30,
        distance_km: 10,
      }),
    });
    const { cost_cents } = (await simulateResponse.json()) as { cost_cents: number };
    const quoteText = root.querySelector(".quote")!.textContent ?? "";
    expect(quoteText).toContain(`$${(cost_cents / 100).toFixed(2)}`);
    expect(bookButton.disabled).toBe(false); // quote unlocked booking

    setInput("input[name=start]", "2026-11-01T10:00");
    setInput("input[name=end]", "2026-11-01T11:00");
    submitForm("form.form-book");
    await waitFor(
      () => (root.querySelector(".detail-status")?.textContent ?? "").includes("Booked"),
      "booking confirmation",
    );
    expect(root.querySelector(".detail-status")?.textContent).toContain("booking #");

    // -- rate ---------------------------------------------------------------
    const rateButton = root.querySelector<HTMLButtonElement>(".form-rate button[type=submit]")!;
    expect(rateButton.disabled).toBe(true);
    for (const [name, value] of [["comfort", "5"], ["consumption", "4"], ["safety", "3"]] as const) {
      const select = root.querySelector<HTMLSelectElement>(`select[name=${name}]`)!;
      select.value = value;
      select.dispatchEvent(new Event("change"));
    }
    expect(rateButton.disabled).toBe(false);
    submitForm("form.form-rate");
    await waitFor(
      () => (root.querySelector(".detail-status")?.textContent ?? "").includes("Evaluation recorded"),
      "rating acknowledgment",
    );

    // the server really stored it: the listing average reflects the new rating
    const after = await fetchImpl(
      `${baseUrl}/api/v1/vehicles?lat=${GEO.lat}&lon=${GEO.lon}&radius_km=${GEO.radius_km}`,
    );
    const listing = (await after.json()) as { id: number; ratings: { count: number } }[];
    const ratedVehicle = listing.find((vehicle) => vehicle.id === vehicleId)!;
    expect(ratedVehicle.ratings.count).toBeGreaterThan(0);
  });
});
