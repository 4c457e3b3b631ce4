// Application wiring: a single store, debounced auto-synthesis, and at most
// one in-flight request (newer edits abort and supersede older requests).

import { ApiClient } from "./api.js";
import { debounce } from "./debounce.js";
import {
  applyResponse,
  beginRequest,
  buildRequest,
  canSynthesize,
  initialState,
  promoteFill,
  requestFailed,
  setCell,
  setOptions,
} from "./state.js";
import { renderApp } from "./render.js";
import { SessionState } from "./types.js";

export interface App {
  getState(): SessionState;
  dispatch(update: (s: SessionState) => SessionState): void;
  synthesizeNow(): Promise<void>;
}

export function createApp(root: HTMLElement, api: ApiClient, autoDelayMs = 400): App {
  let state = initialState();
  let inflight: AbortController | null = null;

  function render() {
    const focused = document.activeElement as HTMLInputElement | null;
    const focusKey = focused?.dataset ? `${focused.dataset.row}:${focused.dataset.field}` : null;
    const selStart = focused?.selectionStart ?? null;
    renderApp(root, state);
    if (focusKey) {
      const [row, field] = focusKey.split(":");
      const el = root.querySelector<HTMLInputElement>(`input[data-row="${row}"][data-field="${field}"]`);
      if (el) {
        el.focus();
        if (selStart !== null) el.setSelectionRange(selStart, selStart);
      }
    }
  }

  async function synthesizeNow(): Promise<void> {
    if (!canSynthesize(state)) return;
    const counter = state.requestCounter;
    if (inflight) inflight.abort();
    inflight = new AbortController();
    state = beginRequest(state);
    render();
    const request = buildRequest(state);
    try {
      const result =
        state.options.mode === "induction"
          ? await api.induce(request, inflight.signal)
          : await api.synthesize(request, inflight.signal);
      if (state.requestCounter !== counter) return; // superseded by newer edits
      state = applyResponse(state, result.body, result.ok);
      render();
    } catch (err) {
      if ((err as Error).name === "AbortError") return;
      if (state.requestCounter !== counter) return;
      state = requestFailed(state, (err as Error).message || "request failed");
      render();
    }
  }

  const autoSynthesize = debounce(() => void synthesizeNow(), autoDelayMs);

  function dispatch(update: (s: SessionState) => SessionState): void {
    const before = state;
    state = update(state);
    if (state !== before) {
      render();
      if (state.requestCounter !== before.requestCounter && canSynthesize(state)) {
        autoSynthesize();
      }
    }
  }

  root.addEventListener("input", (ev) => {
    const el = ev.target as HTMLInputElement;
    if (el.dataset.row !== undefined && el.dataset.field !== undefined) {
      const index = Number(el.dataset.row);
      const field = el.dataset.field as "input" | "exampleOutput";
      dispatch((s) => setCell(s, index, field, el.value));
    }
  });

  root.addEventListener("change", (ev) => {
    const el = ev.target as HTMLSelectElement;
    if (el.id === "opt-beam") dispatch((s) => setOptions(s, { beam: Number(el.value) }));
    if (el.id === "opt-metric") dispatch((s) => setOptions(s, { metric: el.value as "exact" | "cer" }));
    if (el.id === "opt-mode") dispatch((s) => setOptions(s, { mode: el.value as "synthesis" | "induction" }));
  });

  root.addEventListener("click", (ev) => {
    const el = ev.target as HTMLElement;
    if (el.id === "run") {
      autoSynthesize.cancel();
      void synthesizeNow();
    }
    if (el.classList.contains("promote")) {
      const index = Number(el.dataset.row);
      dispatch((s) => promoteFill(s, index));
    }
  });

  render();
  return { getState: () => state, dispatch, synthesizeNow };
}
