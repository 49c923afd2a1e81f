// Outbound frame pacing: at most maxHz sends, independent of how fast
// input events arrive. Under backpressure only the newest frame is
// kept (drop-oldest), so the server always sees the current hand.

export class FrameLimiter {
  private lastSent = Number.NEGATIVE_INFINITY;
  private pending: string | null = null;
  private readonly intervalMs: number;

  constructor(maxHz: number) {
    this.intervalMs = 1000 / maxHz;
  }

  /** Offer a frame at time `now` (ms); returns it if it may go out now. */
  offer(frame: string, now: number): string | null {
    if (now - this.lastSent >= this.intervalMs) {
      this.lastSent = now;
      this.pending = null;
      return frame;
    }
    this.pending = frame;
    return null;
  }

  /** Release the queued frame once the interval has elapsed. */
  drain(now: number): string | null {
    if (this.pending !== null && now - this.lastSent >= this.intervalMs) {
      const frame = this.pending;
      this.pending = null;
      this.lastSent = now;
      return frame;
    }
    return null;
  }
}
