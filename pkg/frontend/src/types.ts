// Shared types for the fill-in-the-blank grid and the HTTP service wire format.

export type RowStatus = "example" | "filled" | "error";

export interface GridRow {
  input: string;
  exampleOutput: string; // user-entered output; non-empty marks the row as an example
  predictedFill: string | null;
  fillError: string | null;
}

export interface Options {
  beam: number;
  metric: "exact" | "cer";
  mode: "synthesis" | "induction";
}

export interface Fill {
  input: string;
  output: string | null;
  error: string | null;
}

export interface ServiceResponse {
  program_text: string | null;
  consistent: boolean | null;
  fills: Fill[];
  candidates_considered?: number;
  latency_ms?: number;
  score?: number | null;
  cer?: number | null;
}

export interface ServiceRequest {
  observed: [string, string][];
  unpaired_inputs: string[];
  options: { beam: number; metric: string; mode?: string };
}

export interface SessionState {
  rows: GridRow[];
  programText: string | null;
  lastResponse: ServiceResponse | null;
  options: Options;
  banner: string | null; // e.g. "no consistent program"
  busy: boolean;
  requestCounter: number; // newer edits supersede older in-flight requests
}

export const MAX_OBSERVED = 10;
