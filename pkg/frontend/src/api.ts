import type { Classification } from './verdict.js';

export interface DimensionFact {
  dimension: string;
  token: string;
  probability: number;
  people_count: number;
}

export interface OkEstimate {
  status: 'ok';
  rank_lower: string;
  rank_upper: string;
  bits_lower: number;
  bits_upper: number;
  classification: Classification;
  pgs_compatible: number;
  explanation: { message: string; dimensions: DimensionFact[] };
}

export interface NotInModelEstimate {
  status: 'not_in_model';
  pgs_compatible: number;
  missing_dimension: string;
}

export type EstimateResponse = OkEstimate | NotInModelEstimate;

export interface HealthResponse {
  status: string;
  model_population?: number;
  gamma?: number;
}

export async function requestEstimate(
  baseUrl: string,
  password: string,
  username?: string,
): Promise<EstimateResponse> {
  const body: Record<string, unknown> = { password };
  if (username) {
    body.username = username;
  }
  const resp = await fetch(`${baseUrl}/estimate`, {
    method: 'POST',
    headers: { 'Content-Type': 'application/json' },
    body: JSON.stringify(body),
  });
  if (!resp.ok) {
    throw new Error(`estimate failed: HTTP ${resp.status}`);
  }
  return resp.json() as Promise<EstimateResponse>;
}

export async function requestHealth(baseUrl: string): Promise<HealthResponse> {
  const resp = await fetch(`${baseUrl}/health`);
  if (!resp.ok) {
    throw new Error(`health failed: HTTP ${resp.status}`);
  }
  return resp.json() as Promise<HealthResponse>;
}
