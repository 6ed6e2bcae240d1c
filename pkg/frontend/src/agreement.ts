import { AnnotationApi } from "./api.js";
import type { AgreementSnapshot, ProgressSnapshot } from "./types.js";

export interface AgreementPanelState {
  agreement: AgreementSnapshot | null;
  progress: ProgressSnapshot | null;
  /** True when the last poll failed; previous values stay on screen. */
  stale: boolean;
}

/** Polls the agreement and progress endpoints; keeps the last good values
 * with a stale flag on failure. All statistics are server-computed. */
export class AgreementPoller {
  readonly state: AgreementPanelState = { agreement: null, progress: null, stale: false };
  private timer: ReturnType<typeof setInterval> | null = null;
  private listeners: Array<() => void> = [];

  constructor(
    private readonly api: AnnotationApi,
    private readonly intervalMs: number = 4000,
  ) {}

  onChange(listener: () => void): void {
    this.listeners.push(listener);
  }

  private emit(): void {
    for (const listener of this.listeners) listener();
  }

  async poll(): Promise<void> {
    try {
      const [agreement, progress] = await Promise.all([
        this.api.fetchAgreement(),
        this.api.fetchProgress(),
      ]);
      this.state.agreement = agreement;
      this.state.progress = progress;
      this.state.stale = false;
    } catch {
      this.state.stale = true;
    }
    this.emit();
  }

  start(): void {
    void this.poll();
    this.timer = setInterval(() => void this.poll(), this.intervalMs);
  }

  stop(): void {
    if (this.timer !== null) clearInterval(this.timer);
    this.timer = null;
  }
}
