/**
 * Typed client for the carshare JSON API (/api/v1).
 *
 * The fetch implementation is injectable so tests can run the client
 * outside a browser. Money is integer cents and timestamps RFC 3339,
 * exactly as the server sends them; no arithmetic happens here.
 */

export interface RatingSummary {
  count: number;
  mean_comfort: number;
  mean_consumption: number;
  mean_safety: number;
  overall: number;
}

export interface VehicleRecord {
  id: number;
  partner_id: number;
  brand: string;
  model: string;
  color: string;
  air_conditioning: boolean;
  price_per_hour_cents: number;
  fuel_type: string;
  odometer_km: number;
  latitude: number;
  longitude: number;
  parking: string;
  distance_km?: number;
  ratings: RatingSummary;
}

export interface GeoFilter {
  lat: number;
  lon: number;
  radius_km: number;
}

export interface RankRequest extends GeoFilter {
  criteria?: string[];
  judgments?: number[];
  mode?: "fast" | "matrix";
}

export interface RankEntry {
  vehicle_id: number;
  global_score: number;
  rank: number;
}

export interface ConsistencyInfo {
  lambda_max: number;
  ci: number;
  ri: number;
  cr: number;
  acceptable: boolean;
}

export interface RankResponse {
  entries: RankEntry[];
  criteria: string[];
  criteria_weights: number[];
  consistency: ConsistencyInfo;
  mode: string;
}

export interface TripPlanInput {
  travel_minutes: number;
  standby_minutes: number;
  distance_km: number;
}

export interface SessionInfo {
  token: string;
  expires_at: string;
}

export interface BookingResponse {
  id: number;
  user_id: number;
  vehicle_id: number;
  start: string;
  end: string;
  quote_cents: number;
  status: string;
}

export interface RatingAck {
  recorded: boolean;
  summary: RatingSummary;
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly errorCode: string,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

/** Network-level failure (server unreachable, connection dropped). */
export class NetworkError extends Error {
  constructor(cause: unknown) {
    super("could not reach the server");
    this.name = "NetworkError";
    this.cause = cause;
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  private readonly fetchImpl: FetchLike;

  constructor(
    readonly baseUrl: string,
    fetchImpl?: FetchLike,
  ) {
    this.fetchImpl = fetchImpl ?? ((input, init) => fetch(input, init));
  }

  register(email: string, password: string): Promise<{ id: number; email: string }> {
    return this.request("POST", "/auth/register", { email, password });
  }

  confirm(token: string): Promise<{ id: number; confirmed: boolean }> {
    return this.request("POST", "/auth/confirm", { token });
  }

  login(email: string, password: string): Promise<SessionInfo> {
    return this.request("POST", "/auth/login", { email, password });
  }

  vehicles(filter: GeoFilter): Promise<VehicleRecord[]> {
    const query = new URLSearchParams({
      lat: String(filter.lat),
      lon: String(filter.lon),
      radius_km: String(filter.radius_km),
    });
    return this.request("GET", `/vehicles?${query}`);
  }

  rank(request: RankRequest): Promise<RankResponse> {
    return this.request("POST", "/rank", request);
  }

  simulate(vehicleId: number, trip: TripPlanInput): Promise<{ cost_cents: number }> {
    return this.request("POST", "/simulate", { vehicle_id: vehicleId, ...trip });
  }

  createBooking(
    token: string,
    vehicleId: number,
    start: string,
    end: string,
    trip: TripPlanInput,
  ): Promise<BookingResponse> {
    return this.request(
      "POST",
      "/bookings",
      { vehicle_id: vehicleId, start, end, trip_plan: trip },
      token,
    );
  }

  rateVehicle(
    token: string,
    vehicleId: number,
    scores: { comfort: number; consumption: number; safety: number },
  ): Promise<RatingAck> {
    return this.request("POST", `/vehicles/${vehicleId}/ratings`, scores, token);
  }

  private async request<T>(
    method: string,
    path: string,
    body?: unknown,
    token?: string,
  ): Promise<T> {
    const headers: Record<string, string> = {};
    if (body !== undefined) headers["Content-Type"] = "application/json";
    if (token) headers["Authorization"] = `Bearer ${token}`;
    let response: Response;
    try {
      response = await this.fetchImpl(`${this.baseUrl}/api/v1${path}`, {
        method,
        headers,
        body: body === undefined ? undefined : JSON.stringify(body),
      });
    } catch (cause) {
      throw new NetworkError(cause);
    }
    if (!response.ok) {
      let errorCode = "unknown_error";
      let message = `request failed with status ${response.status}`;
      try {
        const payload = (await response.json()) as { error_code?: string; message?: string };
        if (payload.error_code) errorCode = payload.error_code;
        if (payload.message) message = payload.message;
      } catch {
        // non-JSON error body; keep the generic message
      }
      throw new ApiError(response.status, errorCode, message);
    }
    return (await response.json()) as T;
  }
}
