// Fixed-interval status polling with overlap protection: a tick that is still
// in flight suppresses the next one instead of stacking requests.

export class StatusPoller {
  private timer: ReturnType<typeof setInterval> | null = null;
  private inFlight = false;
  private stopped = false;

  constructor(
    private readonly pollOnce: () => Promise<boolean>, // true = terminal, stop
    private readonly intervalMs: number = 3000,
  ) {}

  start(): void {
    this.stopped = false;
    void this.tick();
    this.timer = setInterval(() => void this.tick(), this.intervalMs);
  }

  stop(): void {
    this.stopped = true;
    if (this.timer !== null) {
      clearInterval(this.timer);
      this.timer = null;
    }
  }

  async tick(): Promise<void> {
    if (this.inFlight || this.stopped) return;
    this.inFlight = true;
    try {
      const terminal = await this.pollOnce();
      if (terminal) this.stop();
    } finally {
      this.inFlight = false;
    }
  }
}
