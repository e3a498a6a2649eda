/** Elapsed-time display and the soft session cap. */

export function elapsedMs(startedAtIso: string, now: Date = new Date()): number {
  return Math.max(0, now.getTime() - new Date(startedAtIso).getTime());
}

export function formatElapsed(ms: number): string {
  const totalSeconds = Math.floor(ms / 1000);
  const seconds = totalSeconds % 60;
  const minutes = Math.floor(totalSeconds / 60) % 60;
  const hours = Math.floor(totalSeconds / 3600);
  const mm = String(minutes).padStart(2, "0");
  const ss = String(seconds).padStart(2, "0");
  return hours > 0 ? `${hours}:${mm}:${ss}` : `${mm}:${ss}`;
}

/** The cap is a soft limit: sessions past it are flagged, never blocked. */
export function isOverCap(ms: number, capMinutes: number): boolean {
  return ms > capMinutes * 60_000;
}

export class SessionTimer {
  private handle: ReturnType<typeof setInterval> | null = null;

  constructor(
    private readonly startedAtIso: string,
    private readonly capMinutes: number,
    private readonly onTick: (display: string, overCap: boolean) => void,
  ) {}

  tick(now: Date = new Date()): void {
    const ms = elapsedMs(this.startedAtIso, now);
    this.onTick(formatElapsed(ms), isOverCap(ms, this.capMinutes));
  }

  start(intervalMs = 1000): void {
    this.tick();
    this.handle = setInterval(() => this.tick(), intervalMs);
  }

  stop(): void {
    if (this.handle !== null) {
      clearInterval(this.handle);
      this.handle = null;
    }
  }
}
