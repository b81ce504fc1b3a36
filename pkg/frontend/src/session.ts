/** In-memory session state; an expired token clears back to logged-out. */

export interface SessionState {
  token: string;
  expiresAt: Date;
  email: string;
}

export class SessionStore {
  private state: SessionState | null = null;

  open(token: string, expiresAt: string, email: string): void {
    this.state = { token, expiresAt: new Date(expiresAt), email };
  }

  clear(): void {
    this.state = null;
  }

  /** Current session, or null once the expiry has passed (state clears). */
  current(now: Date = new Date()): SessionState | null {
    if (this.state && now >= this.state.expiresAt) {
      this.state = null;
    }
    return this.state;
  }

  get active(): boolean {
    return this.current() !== null;
  }
}
