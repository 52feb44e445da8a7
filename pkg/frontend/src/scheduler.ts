/** Live-scoring loop: debounced, one request in flight, latest edit wins.
 *
 * Every rectangle change notifies the scheduler with the full current
 * list. After a quiet period the newest list is POSTed; edits arriving
 * while a request is live are coalesced into exactly one follow-up. On
 * network failure the last result is flagged stale and the newest list is
 * retried with exponential backoff until a response lands.
 */

import { RectangleWire, ScoreResponse } from "./types.js";

export interface SchedulerEvents {
  onResult: (score: ScoreResponse) => void;
  onStale: (stale: boolean) => void;
}

const BACKOFF_START_MS = 500;
const BACKOFF_MAX_MS = 8000;

export class ScoreScheduler {
  private debounceTimer: ReturnType<typeof setTimeout> | null = null;
  private retryTimer: ReturnType<typeof setTimeout> | null = null;
  private inFlight = false;
  private pending: RectangleWire[] | null = null;
  private latest: RectangleWire[] = [];
  private backoffMs = BACKOFF_START_MS;
  private stopped = false;

  constructor(
    private readonly post: (rects: RectangleWire[]) => Promise<ScoreResponse>,
    private readonly events: SchedulerEvents,
    private readonly debounceMs = 150,
  ) {}

  /** Call with the full rectangle list after every edit. */
  notify(rectangles: RectangleWire[]): void {
    if (this.stopped) {
      return;
    }
    this.latest = rectangles;
    if (this.retryTimer !== null) {
      clearTimeout(this.retryTimer);
      this.retryTimer = null;
    }
    if (this.debounceTimer !== null) {
      clearTimeout(this.debounceTimer);
    }
    this.debounceTimer = setTimeout(() => {
      this.debounceTimer = null;
      this.launch(this.latest);
    }, this.debounceMs);
  }

  /** No further requests; used once the model is submitted. */
  stop(): void {
    this.stopped = true;
    if (this.debounceTimer !== null) {
      clearTimeout(this.debounceTimer);
    }
    if (this.retryTimer !== null) {
      clearTimeout(this.retryTimer);
    }
  }

  private launch(rectangles: RectangleWire[]): void {
    if (this.stopped) {
      return;
    }
    if (this.inFlight) {
      this.pending = rectangles;
      return;
    }
    this.inFlight = true;
    this.post(rectangles).then(
      (score) => {
        this.inFlight = false;
        this.backoffMs = BACKOFF_START_MS;
        this.events.onStale(false);
        this.events.onResult(score);
        this.flushPending();
      },
      () => {
        this.inFlight = false;
        this.events.onStale(true);
        if (this.stopped) {
          return;
        }
        this.retryTimer = setTimeout(() => {
          this.retryTimer = null;
          this.launch(this.latest);
        }, this.backoffMs);
        this.backoffMs = Math.min(this.backoffMs * 2, BACKOFF_MAX_MS);
      },
    );
  }

  private flushPending(): void {
    if (this.pending !== null) {
      const next = this.pending;
      this.pending = null;
      this.launch(next);
    }
  }
}
