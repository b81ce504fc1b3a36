/**
 * View controller: owns navigation, session state, and error handling.
 * All data shown is fetched from the API; the client renders verbatim.
 */

import { ApiClient, ApiError, NetworkError, RankResponse, VehicleRecord } from "./api.js";
import { DEFAULT_CRITERIA, PreferenceFormState, emptyFormState, toJudgments } from "./saaty.js";
import { SessionStore } from "./session.js";
import {
  GeoDefaults,
  authView,
  detailView,
  errorBanner,
  infoBanner,
  listingView,
  resultsView,
  showDetailStatus,
  showQuote,
  wizardView,
} from "./views.js";

const DEFAULT_GEO: GeoDefaults = { lat: 41.1579, lon: -8.6291, radiusKm: 25 };

export class App {
  readonly session = new SessionStore();
  private geo: GeoDefaults = { ...DEFAULT_GEO };
  private vehicles: VehicleRecord[] = [];
  private wizardState: PreferenceFormState = emptyFormState(DEFAULT_CRITERIA);
  private readonly banner: HTMLElement;
  private readonly viewport: HTMLElement;

  constructor(
    private readonly root: HTMLElement,
    private readonly api: ApiClient,
  ) {
    this.banner = document.createElement("div");
    this.banner.className = "banner-area";
    this.viewport = document.createElement("div");
    this.viewport.className = "viewport";
    root.replaceChildren(this.banner, this.viewport);
  }

  mount(): void {
    this.showAuth();
  }

  // ------------------------------------------------------------ navigation

  showAuth(): void {
    this.viewport.replaceChildren(
      authView({
        onLogin: (email, password) => void this.login(email, password),
        onRegister: (email, password) => void this.register(email, password),
        onConfirm: (token) => void this.confirm(token),
      }),
    );
  }

  async showListing(): Promise<void> {
    if (!this.requireSession()) return;
    try {
      this.vehicles = await this.api.vehicles({
        lat: this.geo.lat,
        lon: this.geo.lon,
        radius_km: this.geo.radiusKm,
      });
      this.clearBanner();
    } catch (error) {
      this.handleError(error, () => void this.showListing());
      if (error instanceof NetworkError) return;
      this.vehicles = [];
    }
    this.viewport.replaceChildren(
      listingView(this.vehicles, this.geo, {
        onSearch: (lat, lon, radiusKm) => {
          this.geo = { lat, lon, radiusKm };
          void this.showListing();
        },
        onOpenWizard: () => this.showWizard(),
        onOpenVehicle: (vehicle) => this.showDetail(vehicle),
      }),
    );
  }

  showWizard(): void {
    this.viewport.replaceChildren(
      wizardView(
        this.wizardState,
        (state) => void this.submitPreferences(state),
        () => void this.showListing(),
      ),
    );
  }

  showResults(rank: RankResponse): void {
    const byId = new Map(this.vehicles.map((vehicle) => [vehicle.id, vehicle]));
    this.viewport.replaceChildren(
      resultsView(
        rank,
        byId,
        (vehicle) => this.showDetail(vehicle),
        () => void this.showListing(),
      ),
    );
  }

  showDetail(vehicle: VehicleRecord): void {
    const view = detailView(vehicle, {
      onSimulate: (trip) => void this.simulate(view, vehicle, trip),
      onBook: (start, end) => void this.book(view, vehicle, start, end),
      onRate: (scores) => void this.rate(view, vehicle, scores),
      onBack: () => void this.showListing(),
    });
    this.viewport.replaceChildren(view);
  }

  // --------------------------------------------------------------- actions

  private async login(email: string, password: string): Promise<void> {
    try {
      const session = await this.api.login(email, password);
      this.session.open(session.token, session.expires_at, email);
      this.clearBanner();
      await this.showListing();
    } catch (error) {
      this.handleError(error, () => void this.login(email, password));
    }
  }

  private async register(email: string, password: string): Promise<void> {
    try {
      await this.api.register(email, password);
      this.showInfo("Account created. Confirm it with the token from your confirmation message, then log in.");
    } catch (error) {
      this.handleError(error, () => void this.register(email, password));
    }
  }

  private async confirm(token: string): Promise<void> {
    try {
      await this.api.confirm(token);
      this.showInfo("Account confirmed. You can log in now.");
    } catch (error) {
      this.handleError(error, () => void this.confirm(token));
    }
  }

  private async submitPreferences(state: PreferenceFormState): Promise<void> {
    try {
      const rank = await this.api.rank({
        lat: this.geo.lat,
        lon: this.geo.lon,
        radius_km: this.geo.radiusKm,
        criteria: state.criteria,
        judgments: toJudgments(state),
        mode: "fast",
      });
      this.clearBanner();
      this.showResults(rank);
    } catch (error) {
      this.handleError(error, () => void this.submitPreferences(state));
    }
  }

  private async simulate(
    view: HTMLElement,
    vehicle: VehicleRecord,
    trip: { travel_minutes: number; standby_minutes: number; distance_km: number },
  ): Promise<void> {
    try {
      const quote = await this.api.simulate(vehicle.id, trip);
      showQuote(view, quote.cost_cents);
      this.clearBanner();
    } catch (error) {
      this.handleError(error, () => void this.simulate(view, vehicle, trip));
    }
  }

  private async book(
    view: HTMLElement,
    vehicle: VehicleRecord,
    start: string,
    end: string,
  ): Promise<void> {
    const session = this.session.current();
    if (!session) {
      this.sessionExpired();
      return;
    }
    const trip = this.currentTrip(view);
    try {
      const booking = await this.api.createBooking(session.token, vehicle.id, start, end, trip);
      showDetailStatus(
        view,
        infoBanner(
          `Booked: ${booking.start} to ${booking.end}, ` +
            `quote $${(booking.quote_cents / 100).toFixed(2)} (booking #${booking.id})`,
        ),
      );
    } catch (error) {
      if (error instanceof ApiError && error.status === 409) {
        showDetailStatus(view, errorBanner("Vehicle unavailable for this interval."));
        return;
      }
      this.handleError(error, () => void this.book(view, vehicle, start, end));
    }
  }

  private async rate(
    view: HTMLElement,
    vehicle: VehicleRecord,
    scores: { comfort: number; consumption: number; safety: number },
  ): Promise<void> {
    const session = this.session.current();
    if (!session) {
      this.sessionExpired();
      return;
    }
    try {
      const ack = await this.api.rateVehicle(session.token, vehicle.id, scores);
      vehicle.ratings = ack.summary; // listing averages refresh with the response
      showDetailStatus(
        view,
        infoBanner(`Evaluation recorded. New overall average: ${ack.summary.overall.toFixed(2)}.`),
      );
    } catch (error) {
      this.handleError(error, () => void this.rate(view, vehicle, scores));
    }
  }

  // ---------------------------------------------------------------- errors

  private currentTrip(view: HTMLElement) {
    const read = (name: string) =>
      Number(view.querySelector<HTMLInputElement>(`input[name=${name}]`)?.value ?? 0);
    return {
      travel_minutes: read("travel_minutes"),
      standby_minutes: read("standby_minutes"),
      distance_km: read("distance_km"),
    };
  }

  private requireSession(): boolean {
    if (this.session.current()) return true;
    this.sessionExpired();
    return false;
  }

  private sessionExpired(): void {
    this.session.clear();
    this.showAuth();
    this.showError("Your session has ended. Log in again.");
  }

  private handleError(error: unknown, retry?: () => void): void {
    if (error instanceof NetworkError) {
      this.banner.replaceChildren(errorBanner("Could not reach the server.", retry));
      return;
    }
    if (error instanceof ApiError) {
      if (error.status === 401) {
        this.sessionExpired();
        return;
      }
      this.showError(error.message);
      return;
    }
    throw error;
  }

  private showError(message: string): void {
    this.banner.replaceChildren(errorBanner(message));
  }

  private showInfo(message: string): void {
    this.banner.replaceChildren(infoBanner(message));
  }

  private clearBanner(): void {
    this.banner.replaceChildren();
  }
}
