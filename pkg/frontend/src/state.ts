import { AnnotationApi } from "./api.js";
import type { LabelValue, TaskView } from "./types.js";

export type Phase = "loading" | "task" | "done" | "error";

export interface SessionSnapshot {
  phase: Phase;
  task: TaskView | null;
  labeledCount: number;
  total: number;
  submitting: boolean;
  canUndo: boolean;
  lastError: string | null;
  lastSubmission: { tweetId: string; label: LabelValue } | null;
}

/**
 * Session state machine for one annotator.
 *
 * The labeled count only ever grows within a session (resubmissions after
 * undo don't double-count), submissions are guarded against double-fire,
 * and undo re-displays the last submitted task; the server's
 * last-write-wins semantics make the resubmission supersede.
 */
export class AnnotationSession {
  private phase: Phase = "loading";
  private task: TaskView | null = null;
  private total = 0;
  private submitting = false;
  private lastError: string | null = null;
  private lastSubmitted: { task: TaskView; label: LabelValue } | null = null;
  private labeledIds = new Set<string>();
  private serverLabeled = 0;
  private listeners: Array<() => void> = [];

  constructor(
    private readonly api: AnnotationApi,
    readonly annotatorId: string,
  ) {}

  onChange(listener: () => void): void {
    this.listeners.push(listener);
  }

  private emit(): void {
    for (const listener of this.listeners) listener();
  }

  snapshot(): SessionSnapshot {
    return {
      phase: this.phase,
      task: this.task,
      labeledCount: Math.max(this.serverLabeled, this.labeledIds.size),
      total: this.total,
      submitting: this.submitting,
      canUndo: this.lastSubmitted !== null,
      lastError: this.lastError,
      lastSubmission: this.lastSubmitted
        ? { tweetId: this.lastSubmitted.task.id, label: this.lastSubmitted.label }
        : null,
    };
  }

  /** Fetch the next task; also the reload/retry path (state re-derives
   * from the server, nothing is lost on a page refresh). */
  async start(): Promise<void> {
    this.phase = "loading";
    this.emit();
    try {
      const next = await this.api.fetchNextTask(this.annotatorId);
      this.serverLabeled = next.labeled;
      this.total = next.total;
      if (next.done) {
        this.phase = "done";
        this.task = null;
      } else {
        this.phase = "task";
        this.task = next;
      }
      this.lastError = null;
    } catch (err) {
      this.phase = "error";
      this.lastError = String(err instanceof Error ? err.message : err);
    }
    this.emit();
  }

  /** Submit a label for the displayed task. No-op while a submission is in
   * flight (double-submit guard). On rejection the task is retained. */
  async submit(label: LabelValue): Promise<void> {
    if (this.submitting || this.phase !== "task" || this.task === null) return;
    const task = this.task;
    this.submitting = true;
    this.emit();
    try {
      await this.api.submitLabel(task.id, this.annotatorId, label);
      this.labeledIds.add(task.id);
      this.lastSubmitted = { task, label };
      this.lastError = null;
      this.submitting = false;
      await this.start();
    } catch (err) {
      this.submitting = false;
      this.lastError = String(err instanceof Error ? err.message : err);
      this.emit(); // task retained for retry
    }
  }

  /** Re-display the last submitted task so the annotator can correct it.
   * Single-step, in-session only. */
  undo(): void {
    if (!this.lastSubmitted || this.submitting) return;
    this.phase = "task";
    this.task = this.lastSubmitted.task;
    this.lastSubmitted = null;
    this.emit();
  }

  retry(): Promise<void> {
    return this.start();
  }
}
