import { describe, expect, it } from "vitest";

import {
  applyResponse,
  buildRequest,
  canSynthesize,
  initialState,
  observedPairs,
  promoteFill,
  promotionsDisabled,
  rowStatus,
  setCell,
  setOptions,
  unpairedInputs,
} from "../src/state.js";
import { ServiceResponse, SessionState } from "../src/types.js";

const FIG1: [string, string][] = [
  ["john Smith", "Smith, Jhn"],
  ["DOUG Q. Macklin", "Macklin, Doug"],
  ["Frank Lee (123)", "LEe, Frank"],
  ["Laura Jane Jones", "Jones, Laura"],
];

function stateWithFig1(): SessionState {
  let s = initialState();
  FIG1.forEach(([i, o], idx) => {
    s = setCell(s, idx, "input", i);
    s = setCell(s, idx, "exampleOutput", o);
  });
  s = setCell(s, 4, "input", "Steve P. Green (9)");
  return s;
}

describe("grid state", () => {
  it("classifies rows as example/filled and never both", () => {
    const s = stateWithFig1();
    expect(observedPairs(s)).toEqual(FIG1);
    expect(unpairedInputs(s)).toEqual(["Steve P. Green (9)"]);
    for (const row of s.rows) {
      const status = rowStatus(row);
      if (status === "example") expect(row.exampleOutput).not.toBe("");
      if (status === "filled") expect(row.exampleOutput).toBe("");
    }
  });

  it("empty grid cannot synthesize", () => {
    expect(canSynthesize(initialState())).toBe(false);
    expect(canSynthesize(stateWithFig1())).toBe(true);
  });

  it("keeps a trailing blank row for new entries", () => {
    const s = stateWithFig1();
    expect(s.rows[s.rows.length - 1].input).toBe("");
  });

  it("builds the service request from the grid", () => {
    const s = setOptions(stateWithFig1(), { beam: 100, metric: "cer" });
    const req = buildRequest(s);
    expect(req.observed).toEqual(FIG1);
    expect(req.unpaired_inputs).toEqual(["Steve P. Green (9)"]);
    expect(req.options).toEqual({ beam: 100, metric: "cer", mode: "synthesis" });
  });

  it("applies fills aligned to unpaired inputs", () => {
    let s = stateWithFig1();
    const resp: ServiceResponse = {
      program_text: "GetToken(Word, -1)",
      consistent: true,
      fills: [{ input: "Steve P. Green (9)", output: "Green, Steve", error: null }],
    };
    s = applyResponse(s, resp, true);
    expect(s.rows[4].predictedFill).toBe("Green, Steve");
    expect(s.programText).toBe("GetToken(Word, -1)");
    expect(s.banner).toBeNull();
  });

  it("422 keeps best-effort fills but raises the banner", () => {
    let s = stateWithFig1();
    const resp: ServiceResponse = {
      program_text: "ConstStr('x')",
      consistent: false,
      fills: [{ input: "Steve P. Green (9)", output: "x", error: null }],
    };
    s = applyResponse(s, resp, false);
    expect(s.banner).toBe("no consistent program");
    expect(s.rows[4].predictedFill).toBe("x");
  });

  it("promoting a corrected fill adds exactly one observed pair", () => {
    let s = stateWithFig1();
    s = applyResponse(
      s,
      { program_text: "p", consistent: true, fills: [{ input: "Steve P. Green (9)", output: "Green, Stve", error: null }] },
      true,
    );
    const before = buildRequest(s);
    s = promoteFill(s, 4, "Green, Steve");
    const after = buildRequest(s);
    expect(after.observed.length).toBe(before.observed.length + 1);
    expect(after.observed[after.observed.length - 1]).toEqual(["Steve P. Green (9)", "Green, Steve"]);
    expect(after.unpaired_inputs).toEqual([]);
  });

  it("promotion accepts the prediction when no correction is given", () => {
    let s = stateWithFig1();
    s = applyResponse(
      s,
      { program_text: "p", consistent: true, fills: [{ input: "Steve P. Green (9)", output: "Green, Steve", error: null }] },
      true,
    );
    s = promoteFill(s, 4);
    expect(observedPairs(s)).toContainEqual(["Steve P. Green (9)", "Green, Steve"]);
  });

  it("promotions stop at the ten-example cap", () => {
    let s = initialState();
    for (let i = 0; i < 10; i++) {
      s = setCell(s, i, "input", `in${i}`);
      s = setCell(s, i, "exampleOutput", `out${i}`);
    }
    s = setCell(s, 10, "input", "extra");
    s = applyResponse(
      s,
      { program_text: "p", consistent: true, fills: [{ input: "extra", output: "fill", error: null }] },
      true,
    );
    expect(promotionsDisabled(s)).toBe(true);
    const before = observedPairs(s).length;
    s = promoteFill(s, 10);
    expect(observedPairs(s).length).toBe(before);
  });

  it("edits bump the request counter and clear stale fills", () => {
    let s = stateWithFig1();
    s = applyResponse(
      s,
      { program_text: "p", consistent: true, fills: [{ input: "Steve P. Green (9)", output: "Green, Steve", error: null }] },
      true,
    );
    const counter = s.requestCounter;
    s = setCell(s, 4, "input", "Steve P. Green (10)");
    expect(s.requestCounter).toBe(counter + 1);
    expect(s.rows[4].predictedFill).toBeNull();
  });

  it("induction mode carries no program text", () => {
    let s = setOptions(stateWithFig1(), { mode: "induction" });
    s = applyResponse(
      s,
      { program_text: null, consistent: null, fills: [{ input: "Steve P. Green (9)", output: "Green, Steve", error: null }] },
      true,
    );
    expect(s.programText).toBeNull();
    expect(s.rows[4].predictedFill).toBe("Green, Steve");
  });

  it("request failure leaves the grid intact with a banner", async () => {
    const { requestFailed } = await import("../src/state.js");
    const s = stateWithFig1();
    const failed = requestFailed(s, "connection refused");
    expect(failed.rows).toEqual(s.rows);
    expect(failed.programText).toEqual(s.programText);
    expect(failed.banner).toBe("connection refused");
    expect(failed.busy).toBe(false);
  });
});
