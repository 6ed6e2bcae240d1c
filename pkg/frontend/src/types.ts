/** Wire types for the annotation service API. */

export type LabelValue = "Hateful" | "Not-Hateful";

export interface TaskView {
  id: string;
  text: string;
  language: string;
  guidelines: string;
  done: false;
  labeled: number;
  total: number;
}

export interface QueueDone {
  done: true;
  labeled: number;
  total: number;
}

export type NextTaskResponse = TaskView | QueueDone;

export interface AgreementSnapshot {
  kappa: number | null;
  observed_agreement: number | null;
  expected_agreement: number | null;
  /** Interpretation band wording comes from the server; the UI never
   * computes kappa or its band itself. */
  interpretation: string | null;
  item_count: number;
  annotator_count: number;
  ties: number;
}

export interface ProgressSnapshot {
  total: number;
  per_annotator: Record<string, number>;
}

export interface SubmitAck {
  ok: boolean;
  tweet_id: string;
  timestamp: number;
}
