// DOM rendering: a pure function of SessionState. Rendering the same state
// twice produces identical markup (event wiring is delegated at the root).

import { canSynthesize, programSegments, promotionsDisabled, rowStatus } from "./state.js";
import { SessionState } from "./types.js";

function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;").replace(/"/g, "&quot;");
}

export function renderApp(root: HTMLElement, state: SessionState): void {
  const rowsHtml = state.rows
    .map((row, i) => {
      const status = rowStatus(row);
      const fill =
        status === "example"
          ? ""
          : row.fillError !== null
            ? `<span class="fill-error" title="${esc(row.fillError)}">error</span>`
            : row.predictedFill !== null
              ? `<span class="fill${state.banner ? " stale" : ""}">${esc(row.predictedFill)}</span>`
              : "";
      const promotable = status === "filled" && row.predictedFill !== null && !promotionsDisabled(state);
      return `
        <tr data-row="${i}" class="status-${status ?? "blank"}">
          <td><input class="cell-input" data-row="${i}" data-field="input" value="${esc(row.input)}" placeholder="input"></td>
          <td><input class="cell-output" data-row="${i}" data-field="exampleOutput" value="${esc(row.exampleOutput)}" placeholder="${status === "example" ? "" : "output (type to make this an example)"}"></td>
          <td class="predicted">${fill}</td>
          <td>${promotable ? `<button class="promote" data-row="${i}" title="accept this fill as a new example">+</button>` : ""}</td>
        </tr>`;
    })
    .join("");

  const segments = programSegments(state)
    .map((seg, i) => `<span class="segment seg-${i % 6}">${esc(seg)}</span>`)
    .join('<span class="pipe"> | </span>');

  const programPanel =
    state.options.mode === "induction"
      ? ""
      : `<div id="program-panel" class="panel">
           <h2>Program</h2>
           <div id="program-text">${segments || '<span class="dim">none yet</span>'}</div>
         </div>`;

  root.innerHTML = `
    <div class="grid-panel panel">
      <h2>Examples &amp; fills</h2>
      ${state.banner ? `<div id="banner" class="banner">${esc(state.banner)}</div>` : ""}
      <table id="grid">
        <thead><tr><th>Input</th><th>Output (examples)</th><th>Predicted fill</th><th></th></tr></thead>
        <tbody>${rowsHtml}</tbody>
      </table>
      <button id="run" ${canSynthesize(state) ? "" : "disabled"}>${state.busy ? "Running…" : "Run"}</button>
      <span class="dim">${state.busy ? "synthesizing…" : ""}</span>
    </div>
    ${programPanel}
    <div id="options-panel" class="panel">
      <h2>Options</h2>
      <label>beam
        <select id="opt-beam">
          ${[1, 10, 100].map((b) => `<option value="${b}"${state.options.beam === b ? " selected" : ""}>${b}</option>`).join("")}
        </select>
      </label>
      <label>selection
        <select id="opt-metric">
          <option value="exact"${state.options.metric === "exact" ? " selected" : ""}>exact match</option>
          <option value="cer"${state.options.metric === "cer" ? " selected" : ""}>edit distance</option>
        </select>
      </label>
      <label>mode
        <select id="opt-mode">
          <option value="synthesis"${state.options.mode === "synthesis" ? " selected" : ""}>synthesis</option>
          <option value="induction"${state.options.mode === "induction" ? " selected" : ""}>induction</option>
        </select>
      </label>
    </div>`;
}
