import type { AgreementSnapshot, NextTaskResponse, ProgressSnapshot, SubmitAck } from "./types.js";

export class ApiError extends Error {
  constructor(message: string, readonly status?: number) {
    super(message);
  }
}

async function getJson<T>(url: string): Promise<T> {
  let response: Response;
  try {
    response = await fetch(url);
  } catch (err) {
    throw new ApiError(`network failure: ${String(err)}`);
  }
  if (!response.ok) {
    throw new ApiError(`request failed: ${response.status}`, response.status);
  }
  return (await response.json()) as T;
}

export class AnnotationApi {
  constructor(private readonly base: string = "") {}

  fetchNextTask(annotatorId: string): Promise<NextTaskResponse> {
    const query = new URLSearchParams({ annotator: annotatorId });
    return getJson<NextTaskResponse>(`${this.base}/api/tasks/next?${query}`);
  }

  async submitLabel(tweetId: string, annotatorId: string, label: string): Promise<SubmitAck> {
    let response: Response;
    try {
      response = await fetch(`${this.base}/api/labels`, {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify({ tweet_id: tweetId, annotator_id: annotatorId, label }),
      });
    } catch (err) {
      throw new ApiError(`network failure: ${String(err)}`);
    }
    if (!response.ok) {
      throw new ApiError(`submission rejected: ${response.status}`, response.status);
    }
    return (await response.json()) as SubmitAck;
  }

  fetchAgreement(): Promise<AgreementSnapshot> {
    return getJson<AgreementSnapshot>(`${this.base}/api/agreement`);
  }

  fetchProgress(): Promise<ProgressSnapshot> {
    return getJson<ProgressSnapshot>(`${this.base}/api/progress`);
  }
}
