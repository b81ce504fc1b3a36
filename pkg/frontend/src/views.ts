/**
 * DOM builders for the three views: authentication, listing plus the
 * preference wizard, and the vehicle detail (simulate, book, rate).
 *
 * No ranking or pricing math happens here: every score, weight, quote,
 * and consistency verdict shown comes verbatim from API responses.
 */

import type {
  ConsistencyInfo,
  RankResponse,
  RatingSummary,
  VehicleRecord,
} from "./api.js";
import {
  PreferenceFormState,
  SCALE_OPTIONS,
  criterionPairs,
  isComplete,
} from "./saaty.js";

type Child = Node | string;

export function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  ...children: Child[]
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    node.setAttribute(key, value);
  }
  for (const child of children) {
    node.append(child);
  }
  return node;
}

export function money(cents: number): string {
  return `$${(cents / 100).toFixed(2)}`;
}

export function errorBanner(message: string, onRetry?: () => void): HTMLElement {
  const banner = el("div", { class: "banner banner-error", role: "alert" }, message);
  if (onRetry) {
    const retry = el("button", { class: "retry", type: "button" }, "Retry");
    retry.addEventListener("click", onRetry);
    banner.append(" ", retry);
  }
  return banner;
}

export function infoBanner(message: string): HTMLElement {
  return el("div", { class: "banner banner-info" }, message);
}

// ---------------------------------------------------------------- auth view

export interface AuthHandlers {
  onLogin(email: string, password: string): void;
  onRegister(email: string, password: string): void;
  onConfirm(token: string): void;
}

export function authView(handlers: AuthHandlers): HTMLElement {
  const root = el("section", { class: "view view-auth" });
  root.append(el("h1", {}, "carshare"));

  const loginEmail = el("input", { type: "email", name: "login-email", placeholder: "email" });
  const loginPassword = el("input", {
    type: "password",
    name: "login-password",
    placeholder: "password",
  });
  const loginForm = el("form", { class: "form-login" });
  const loginButton = el("button", { type: "submit" }, "Log in");
  loginForm.append(el("h2", {}, "Log in"), loginEmail, loginPassword, loginButton);
  const loginValidation = el("p", { class: "validation", hidden: "" });
  loginForm.append(loginValidation);
  loginForm.addEventListener("submit", (event) => {
    event.preventDefault();
    if (!loginEmail.value || !loginPassword.value) {
      loginValidation.textContent = "email and password are required";
      loginValidation.hidden = false;
      return; // invalid input never leaves the client
    }
    loginValidation.hidden = true;
    handlers.onLogin(loginEmail.value, loginPassword.value);
  });

  const regEmail = el("input", { type: "email", name: "register-email", placeholder: "email" });
  const regPassword = el("input", {
    type: "password",
    name: "register-password",
    placeholder: "password (8+ characters)",
  });
  const regForm = el("form", { class: "form-register" });
  const regValidation = el("p", { class: "validation", hidden: "" });
  regForm.append(
    el("h2", {}, "Create account"),
    regEmail,
    regPassword,
    el("button", { type: "submit" }, "Register"),
    regValidation,
  );
  regForm.addEventListener("submit", (event) => {
    event.preventDefault();
    if (!regEmail.value || regPassword.value.length < 8) {
      regValidation.textContent = "a valid email and a password of 8+ characters are required";
      regValidation.hidden = false;
      return;
    }
    regValidation.hidden = true;
    handlers.onRegister(regEmail.value, regPassword.value);
  });

  const confirmToken = el("input", { type: "text", name: "confirm-token", placeholder: "confirmation token" });
  const confirmForm = el("form", { class: "form-confirm" });
  confirmForm.append(
    el("h2", {}, "Confirm account"),
    el("p", { class: "hint" }, "Paste the token from your confirmation message."),
    confirmToken,
    el("button", { type: "submit" }, "Confirm"),
  );
  confirmForm.addEventListener("submit", (event) => {
    event.preventDefault();
    if (!confirmToken.value.trim()) return;
    handlers.onConfirm(confirmToken.value.trim());
  });

  root.append(loginForm, regForm, confirmForm);
  return root;
}

// ------------------------------------------------------------- listing view

export interface ListingHandlers {
  onSearch(lat: number, lon: number, radiusKm: number): void;
  onOpenWizard(): void;
  onOpenVehicle(vehicle: VehicleRecord): void;
}

export interface GeoDefaults {
  lat: number;
  lon: number;
  radiusKm: number;
}

function ratingLine(summary: RatingSummary): string {
  if (summary.count === 0) {
    return "no evaluations yet (neutral 3.0)";
  }
  return (
    `performance ${summary.mean_comfort.toFixed(1)} · ` +
    `consumption ${summary.mean_consumption.toFixed(1)} · ` +
    `security ${summary.mean_safety.toFixed(1)} · ` +
    `overall ${summary.overall.toFixed(1)} (${summary.count})`
  );
}

export function vehicleCard(vehicle: VehicleRecord, onOpen?: () => void): HTMLElement {
  const card = el("article", { class: "vehicle-card", "data-vehicle-id": String(vehicle.id) });
  card.append(
    el("h3", {}, `${vehicle.brand} ${vehicle.model}`),
    el("ul", {},
      el("li", { class: "field-brand" }, `Brand: ${vehicle.brand}`),
      el("li", { class: "field-model" }, `Model: ${vehicle.model}`),
      el("li", { class: "field-color" }, `Color: ${vehicle.color}`),
      el("li", { class: "field-air-conditioning" },
        `Air conditioning: ${vehicle.air_conditioning ? "yes" : "no"}`),
      el("li", { class: "field-price" }, `Price per hour: ${money(vehicle.price_per_hour_cents)}`),
      el("li", { class: "field-fuel" }, `Fuel: ${vehicle.fuel_type}`),
      el("li", { class: "field-odometer" }, `Kilometers: ${vehicle.odometer_km.toLocaleString("en-US")} km`),
      el("li", { class: "field-parking" }, `Parked at: ${vehicle.parking}`),
    ),
    el("p", { class: "ratings" }, ratingLine(vehicle.ratings)),
  );
  if (vehicle.distance_km !== undefined) {
    card.append(el("p", { class: "distance" }, `${vehicle.distance_km.toFixed(2)} km away`));
  }
  if (onOpen) {
    const open = el("button", { class: "open-vehicle", type: "button" }, "Details");
    open.addEventListener("click", onOpen);
    card.append(open);
  }
  return card;
}

export function listingView(
  vehicles: VehicleRecord[],
  defaults: GeoDefaults,
  handlers: ListingHandlers,
): HTMLElement {
  const root = el("section", { class: "view view-listing" });
  root.append(el("h1", {}, "Available vehicles"));

  const lat = el("input", { type: "number", step: "any", name: "lat", value: String(defaults.lat) });
  const lon = el("input", { type: "number", step: "any", name: "lon", value: String(defaults.lon) });
  const radius = el("input", {
    type: "number", step: "any", min: "0", name: "radius_km", value: String(defaults.radiusKm),
  });
  const search = el("form", { class: "form-search" });
  search.append(
    el("label", {}, "Latitude ", lat),
    el("label", {}, "Longitude ", lon),
    el("label", {}, "Radius km ", radius),
    el("button", { type: "submit" }, "Search"),
  );
  search.addEventListener("submit", (event) => {
    event.preventDefault();
    handlers.onSearch(Number(lat.value), Number(lon.value), Number(radius.value));
  });
  const wizardButton = el("button", { class: "open-wizard", type: "button" }, "Rank by my preferences");
  wizardButton.addEventListener("click", () => handlers.onOpenWizard());
  root.append(search, wizardButton);

  const list = el("div", { class: "vehicle-list" });
  if (vehicles.length === 0) {
    list.append(el("p", { class: "empty-state" }, "No vehicles in this area."));
    wizardButton.disabled = true;
  } else {
    for (const vehicle of vehicles) {
      list.append(vehicleCard(vehicle, () => handlers.onOpenVehicle(vehicle)));
    }
  }
  root.append(list);
  return root;
}

// ------------------------------------------------------------------ wizard

export function wizardView(
  state: PreferenceFormState,
  onSubmit: (state: PreferenceFormState) => void,
  onCancel: () => void,
): HTMLElement {
  const root = el("section", { class: "view view-wizard" });
  root.append(
    el("h1", {}, "How much does each criterion matter?"),
    el("p", { class: "hint" },
      "For every pair, choose which side matters more and how strongly."),
  );
  const form = el("form", { class: "form-wizard" });
  const submit = el("button", { type: "submit", disabled: "" }, "Rank vehicles");

  const pairs = criterionPairs(state.criteria);
  pairs.forEach((pair, index) => {
    const select = el("select", { name: `pair-${index}`, "data-pair": `${pair.left}-vs-${pair.right}` });
    select.append(el("option", { value: "", disabled: "", selected: "" }, "choose..."));
    for (const option of SCALE_OPTIONS) {
      const label = option.value === 1
        ? "equally important"
        : option.label.replace("left", pair.left).replace("right", pair.right);
      select.append(el("option", { value: String(option.value) }, label));
    }
    const existing = state.selections[index];
    if (existing !== null && existing !== undefined) {
      select.value = String(existing);
    }
    select.addEventListener("change", () => {
      state.selections[index] = select.value === "" ? null : Number(select.value);
      submit.disabled = !isComplete(state);
    });
    form.append(
      el("label", { class: "pair" }, `${pair.left} vs ${pair.right} `, select),
    );
  });

  submit.disabled = !isComplete(state);
  const cancel = el("button", { type: "button", class: "cancel" }, "Back");
  cancel.addEventListener("click", onCancel);
  form.append(submit, cancel);
  form.addEventListener("submit", (event) => {
    event.preventDefault();
    if (!isComplete(state)) return;
    onSubmit(state);
  });
  root.append(form);
  return root;
}

// ------------------------------------------------------------ ranked results

export function consistencyBadge(consistency: ConsistencyInfo): HTMLElement | null {
  if (consistency.acceptable) return null;
  return el(
    "span",
    { class: "badge badge-warning", title: `consistency ratio ${consistency.cr.toFixed(3)}` },
    "inconsistent judgments",
  );
}

export function resultsView(
  rank: RankResponse,
  vehiclesById: Map<number, VehicleRecord>,
  onOpenVehicle: (vehicle: VehicleRecord) => void,
  onBack: () => void,
): HTMLElement {
  const root = el("section", { class: "view view-results" });
  const heading = el("h1", {}, "Your ranking");
  const badge = consistencyBadge(rank.consistency);
  if (badge) heading.append(" ", badge);
  root.append(heading);

  const weights = rank.criteria
    .map((name, i) => `${name} ${(100 * (rank.criteria_weights[i] ?? 0)).toFixed(1)}%`)
    .join(" · ");
  root.append(el("p", { class: "weights" }, `Criteria weights: ${weights}`));

  const list = el("ol", { class: "ranked-list" });
  for (const entry of rank.entries) {
    const vehicle = vehiclesById.get(entry.vehicle_id);
    const title = vehicle ? `${vehicle.brand} ${vehicle.model}` : `vehicle ${entry.vehicle_id}`;
    const item = el(
      "li",
      { class: "ranked-entry", "data-vehicle-id": String(entry.vehicle_id), "data-rank": String(entry.rank) },
      `${title} — score ${entry.global_score.toFixed(4)}`,
    );
    if (vehicle) {
      const open = el("button", { type: "button", class: "open-vehicle" }, "Details");
      open.addEventListener("click", () => onOpenVehicle(vehicle));
      item.append(" ", open);
    }
    list.append(item);
  }
  const back = el("button", { type: "button", class: "back" }, "Back to listing");
  back.addEventListener("click", onBack);
  root.append(list, back);
  return root;
}

// ------------------------------------------------------------- detail view

export interface DetailHandlers {
  onSimulate(trip: { travel_minutes: number; standby_minutes: number; distance_km: number }): void;
  onBook(start: string, end: string): void;
  onRate(scores: { comfort: number; consumption: number; safety: number }): void;
  onBack(): void;
}

export function detailView(vehicle: VehicleRecord, handlers: DetailHandlers): HTMLElement {
  const root = el("section", { class: "view view-detail" });
  root.append(el("h1", {}, `${vehicle.brand} ${vehicle.model}`));
  root.append(vehicleCard(vehicle));

  // simulate: the quote must be on screen before booking unlocks
  const travel = el("input", { type: "number", min: "0", name: "travel_minutes", value: "60" });
  const standby = el("input", { type: "number", min: "0", name: "standby_minutes", value: "0" });
  const distance = el("input", { type: "number", min: "0", step: "any", name: "distance_km", value: "10" });
  const simulateForm = el("form", { class: "form-simulate" });
  simulateForm.append(
    el("h2", {}, "Simulate cost"),
    el("label", {}, "Travel minutes ", travel),
    el("label", {}, "Standby minutes ", standby),
    el("label", {}, "Distance km ", distance),
    el("button", { type: "submit" }, "Get quote"),
  );
  const quoteOut = el("p", { class: "quote", hidden: "" });
  simulateForm.addEventListener("submit", (event) => {
    event.preventDefault();
    const trip = {
      travel_minutes: Number(travel.value),
      standby_minutes: Number(standby.value),
      distance_km: Number(distance.value),
    };
    if (trip.travel_minutes < 0 || trip.standby_minutes < 0 || trip.distance_km < 0) return;
    handlers.onSimulate(trip);
  });

  const start = el("input", { type: "datetime-local", name: "start" });
  const end = el("input", { type: "datetime-local", name: "end" });
  const bookButton = el("button", { type: "submit", disabled: "" }, "Book");
  const bookValidation = el("p", { class: "validation", hidden: "" });
  const bookForm = el("form", { class: "form-book" });
  bookForm.append(
    el("h2", {}, "Book"),
    el("label", {}, "From ", start),
    el("label", {}, "To ", end),
    bookButton,
    bookValidation,
  );
  bookForm.addEventListener("submit", (event) => {
    event.preventDefault();
    if (!start.value || !end.value) {
      bookValidation.textContent = "both interval ends are required";
      bookValidation.hidden = false;
      return;
    }
    const startIso = new Date(start.value).toISOString();
    const endIso = new Date(end.value).toISOString();
    if (startIso >= endIso) {
      bookValidation.textContent = "the start must come before the end";
      bookValidation.hidden = false;
      return;
    }
    bookValidation.hidden = true;
    handlers.onBook(startIso, endIso);
  });

  const makeScoreSelect = (name: string) => {
    const select = el("select", { name });
    select.append(el("option", { value: "", disabled: "", selected: "" }, "-"));
    for (let score = 1; score <= 5; score++) {
      select.append(el("option", { value: String(score) }, String(score)));
    }
    return select;
  };
  const comfort = makeScoreSelect("comfort");
  const consumption = makeScoreSelect("consumption");
  const safety = makeScoreSelect("safety");
  const rateButton = el("button", { type: "submit", disabled: "" }, "Send evaluation");
  const refreshRateButton = () => {
    rateButton.disabled = !(comfort.value && consumption.value && safety.value);
  };
  for (const select of [comfort, consumption, safety]) {
    select.addEventListener("change", refreshRateButton);
  }
  const rateForm = el("form", { class: "form-rate" });
  rateForm.append(
    el("h2", {}, "Evaluate (1-5)"),
    el("label", {}, "Performance ", comfort),
    el("label", {}, "Consumption ", consumption),
    el("label", {}, "Security ", safety),
    rateButton,
  );
  rateForm.addEventListener("submit", (event) => {
    event.preventDefault();
    if (rateButton.disabled) return;
    handlers.onRate({
      comfort: Number(comfort.value),
      consumption: Number(consumption.value),
      safety: Number(safety.value),
    });
  });

  const back = el("button", { type: "button", class: "back" }, "Back to listing");
  back.addEventListener("click", handlers.onBack);

  const status = el("div", { class: "detail-status" });
  root.append(simulateForm, quoteOut, bookForm, rateForm, status, back);
  return root;
}

/** Show a fresh quote and unlock the booking button. */
export function showQuote(root: HTMLElement, costCents: number): void {
  const quote = root.querySelector<HTMLElement>(".quote");
  const bookButton = root.querySelector<HTMLButtonElement>(".form-book button[type=submit]");
  if (!quote || !bookButton) return;
  quote.textContent = `Estimated cost: ${money(costCents)}`;
  quote.hidden = false;
  bookButton.disabled = false;
}

export function showDetailStatus(root: HTMLElement, node: HTMLElement): void {
  const status = root.querySelector<HTMLElement>(".detail-status");
  if (!status) return;
  status.replaceChildren(node);
}
