/** Thin client for the JSON service.  Each call either resolves to the
 * result payload, throws ServiceFailure carrying the structured error
 * from the body, or rethrows the abort. */

import type { DiffResult, EstimateResult, ServiceError } from "./types.js";

export class ServiceFailure extends Error {
  readonly detail: ServiceError;

  constructor(detail: ServiceError) {
    super(detail.message);
    this.detail = detail;
  }
}

export type FetchLike = (input: string, init: RequestInit) => Promise<Response>;

async function post<T>(
  path: string,
  body: unknown,
  signal: AbortSignal,
  fetchImpl: FetchLike,
): Promise<T> {
  const response = await fetchImpl(path, {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify(body),
    signal,
  });
  const payload = await response.json().catch(() => null);
  if (!response.ok) {
    const detail: ServiceError = payload?.error ?? {
      code: "http_error",
      message: `request failed with status ${response.status}`,
      location: null,
    };
    throw new ServiceFailure(detail);
  }
  return payload.result as T;
}

export function postEstimate(
  body: unknown,
  signal: AbortSignal,
  fetchImpl: FetchLike = fetch,
): Promise<EstimateResult> {
  return post<EstimateResult>("/estimate", body, signal, fetchImpl);
}

export function postEstimateDiff(
  body: unknown,
  signal: AbortSignal,
  fetchImpl: FetchLike = fetch,
): Promise<DiffResult> {
  return post<DiffResult>("/estimate-diff", body, signal, fetchImpl);
}
