// Pure session-state transitions: every mutation is (state, event) -> state.
// The UI never computes string transformations; predicted fills only ever
// come from a ServiceResponse.

import {
  GridRow,
  MAX_OBSERVED,
  Options,
  RowStatus,
  ServiceRequest,
  ServiceResponse,
  SessionState,
} from "./types.js";

export function emptyRow(): GridRow {
  return { input: "", exampleOutput: "", predictedFill: null, fillError: null };
}

export function initialState(): SessionState {
  return {
    rows: [emptyRow(), emptyRow(), emptyRow(), emptyRow(), emptyRow()],
    programText: null,
    lastResponse: null,
    options: { beam: 10, metric: "exact", mode: "synthesis" },
    banner: null,
    busy: false,
    requestCounter: 0,
  };
}

export function rowStatus(row: GridRow): RowStatus | null {
  if (row.input === "") return null; // blank row
  if (row.exampleOutput !== "") return "example";
  if (row.fillError !== null) return "error";
  return "filled";
}

export function observedPairs(state: SessionState): [string, string][] {
  return state.rows
    .filter((r) => rowStatus(r) === "example")
    .map((r) => [r.input, r.exampleOutput] as [string, string]);
}

export function unpairedInputs(state: SessionState): string[] {
  return state.rows
    .filter((r) => {
      const s = rowStatus(r);
      return s === "filled" || s === "error";
    })
    .map((r) => r.input);
}

export function canSynthesize(state: SessionState): boolean {
  return observedPairs(state).length >= 1;
}

export function promotionsDisabled(state: SessionState): boolean {
  return observedPairs(state).length >= MAX_OBSERVED;
}

export function buildRequest(state: SessionState): ServiceRequest {
  return {
    observed: observedPairs(state),
    unpaired_inputs: unpairedInputs(state),
    options: {
      beam: state.options.beam,
      metric: state.options.metric,
      mode: state.options.mode,
    },
  };
}

function withRows(state: SessionState, rows: GridRow[]): SessionState {
  return { ...state, rows };
}

export function setCell(
  state: SessionState,
  index: number,
  field: "input" | "exampleOutput",
  value: string,
): SessionState {
  const rows = state.rows.map((r, i) => {
    if (i !== index) return r;
    // any edit invalidates the row's stale prediction
    return { ...r, [field]: value, predictedFill: null, fillError: null };
  });
  let next = withRows(state, rows);
  if (index === state.rows.length - 1 && value !== "") {
    next = withRows(next, [...next.rows, emptyRow()]); // keep a trailing blank row
  }
  return { ...next, requestCounter: state.requestCounter + 1 };
}

export function setOptions(state: SessionState, options: Partial<Options>): SessionState {
  return {
    ...state,
    options: { ...state.options, ...options },
    requestCounter: state.requestCounter + 1,
  };
}

/** Promote a filled row into an observed example. The user's corrected text
 * (or the accepted prediction) becomes the row's example output. */
export function promoteFill(state: SessionState, index: number, corrected?: string): SessionState {
  const row = state.rows[index];
  if (!row || rowStatus(row) !== "filled" || row.predictedFill === null) return state;
  if (promotionsDisabled(state)) return state;
  const value = corrected !== undefined ? corrected : row.predictedFill;
  return setCell(state, index, "exampleOutput", value);
}

export function beginRequest(state: SessionState): SessionState {
  return { ...state, busy: true };
}

/** Fold a service response into the grid; fills align index-wise with the
 * unpaired inputs that were sent. */
export function applyResponse(state: SessionState, response: ServiceResponse, ok: boolean): SessionState {
  const fills = new Map<string, { output: string | null; error: string | null }>();
  for (const f of response.fills ?? []) {
    fills.set(f.input, { output: f.output, error: f.error });
  }
  const rows = state.rows.map((r) => {
    const s = rowStatus(r);
    if (s !== "filled" && s !== "error") return r;
    const hit = fills.get(r.input);
    if (!hit) return { ...r, predictedFill: null, fillError: null };
    return { ...r, predictedFill: hit.output, fillError: hit.error };
  });
  return {
    ...withRows(state, rows),
    programText: state.options.mode === "induction" ? null : response.program_text,
    lastResponse: response,
    banner: ok ? null : "no consistent program",
    busy: false,
  };
}

export function requestFailed(state: SessionState, message: string): SessionState {
  // prior grid state stays intact; only surface a transient error banner
  return { ...state, busy: false, banner: message };
}

export function programSegments(state: SessionState): string[] {
  if (!state.programText) return [];
  return state.programText.split(" | ");
}
