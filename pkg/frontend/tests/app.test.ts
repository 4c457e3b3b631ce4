// @vitest-environment happy-dom
import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";

import { ApiClient } from "../src/api.js";
import { createApp } from "../src/app.js";
import { renderApp } from "../src/render.js";
import { initialState, setCell } from "../src/state.js";
import { ServiceRequest } from "../src/types.js";

const FIG1: [string, string][] = [
  ["john Smith", "Smith, Jhn"],
  ["DOUG Q. Macklin", "Macklin, Doug"],
  ["Frank Lee (123)", "LEe, Frank"],
  ["Laura Jane Jones", "Jones, Laura"],
];

const PROGRAM = "GetToken(Word, -1) | ConstStr(',') | ConstStr(' ') | ToCase(Proper, GetToken(Word, 1))";

function mockService(handler?: (req: ServiceRequest) => { status: number; body: unknown }) {
  const calls: { path: string; request: ServiceRequest }[] = [];
  const defaultHandler = (req: ServiceRequest) => ({
    status: 200,
    body: {
      program_text: PROGRAM,
      consistent: true,
      fills: req.unpaired_inputs.map((input) => ({
        input,
        output: input === "Steve P. Green (9)" ? "Green, Steve" : "?",
        error: null,
      })),
      candidates_considered: 3,
      latency_ms: 1.0,
    },
  });
  const fetchMock = vi.fn(async (url: string, init?: RequestInit) => {
    const request = JSON.parse(String(init?.body ?? "{}")) as ServiceRequest;
    const path = new URL(url).pathname;
    calls.push({ path, request });
    const { status, body } = (handler ?? defaultHandler)(request);
    return new Response(JSON.stringify(body), {
      status,
      headers: { "Content-Type": "application/json" },
    });
  });
  vi.stubGlobal("fetch", fetchMock);
  return { calls, fetchMock };
}

function typeCell(root: HTMLElement, row: number, field: "input" | "exampleOutput", value: string) {
  const el = root.querySelector<HTMLInputElement>(`input[data-row="${row}"][data-field="${field}"]`);
  expect(el, `cell ${row}/${field}`).toBeTruthy();
  el!.value = value;
  el!.dispatchEvent(new Event("input", { bubbles: true }));
}

function mount(handler?: Parameters<typeof mockService>[0]) {
  const svc = mockService(handler);
  document.body.innerHTML = '<div id="app"></div>';
  const root = document.getElementById("app") as HTMLElement;
  const app = createApp(root, new ApiClient("http://svc.test"), 400);
  return { root, app, ...svc };
}

describe("grid application", () => {
  beforeEach(() => {
    vi.useFakeTimers();
  });
  afterEach(() => {
    vi.useRealTimers();
    vi.unstubAllGlobals();
  });

  async function settle() {
    await vi.advanceTimersByTimeAsync(450);
    await vi.advanceTimersByTimeAsync(0);
  }

  it("entering the published example rows displays the program and the fill", async () => {
    const { root, calls } = mount();
    FIG1.forEach(([i, o], idx) => {
      typeCell(root, idx, "input", i);
      typeCell(root, idx, "exampleOutput", o);
    });
    typeCell(root, 4, "input", "Steve P. Green (9)");
    await settle();

    expect(calls.length).toBe(1); // debounced to one request
    expect(calls[0].path).toBe("/api/synthesize");
    expect(calls[0].request.observed).toEqual(FIG1);
    expect(root.querySelector("#program-text")!.textContent).toContain("GetToken(Word, -1)");
    const fill = root.querySelector('tr[data-row="4"] .fill');
    expect(fill?.textContent).toBe("Green, Steve");
  });

  it("empty grid disables the run button and sends nothing", async () => {
    const { root, calls } = mount();
    expect(root.querySelector<HTMLButtonElement>("#run")!.disabled).toBe(true);
    await settle();
    expect(calls.length).toBe(0);
  });

  it("promoting a corrected fill adds exactly one observed pair to the next request", async () => {
    const { root, calls } = mount();
    FIG1.forEach(([i, o], idx) => {
      typeCell(root, idx, "input", i);
      typeCell(root, idx, "exampleOutput", o);
    });
    typeCell(root, 4, "input", "Steve P. Green (9)");
    await settle();
    const observedBefore = calls[calls.length - 1].request.observed.length;

    // the user corrects the fill by typing into the output cell
    typeCell(root, 4, "exampleOutput", "Green, Steve!");
    await settle();
    const last = calls[calls.length - 1].request;
    expect(last.observed.length).toBe(observedBefore + 1);
    expect(last.observed[last.observed.length - 1]).toEqual(["Steve P. Green (9)", "Green, Steve!"]);
    expect(last.unpaired_inputs).toEqual([]);
  });

  it("accept button promotes the predicted fill verbatim", async () => {
    const { root, calls } = mount();
    FIG1.forEach(([i, o], idx) => {
      typeCell(root, idx, "input", i);
      typeCell(root, idx, "exampleOutput", o);
    });
    typeCell(root, 4, "input", "Steve P. Green (9)");
    await settle();
    const btn = root.querySelector<HTMLButtonElement>('button.promote[data-row="4"]');
    expect(btn).toBeTruthy();
    btn!.dispatchEvent(new Event("click", { bubbles: true }));
    await settle();
    const last = calls[calls.length - 1].request;
    expect(last.observed).toContainEqual(["Steve P. Green (9)", "Green, Steve"]);
  });

  it("422 shows the no-consistent-program banner and greys fills", async () => {
    const { root } = mount(() => ({
      status: 422,
      body: {
        program_text: "ConstStr('x')",
        consistent: false,
        fills: [{ input: "Steve P. Green (9)", output: "x", error: null }],
      },
    }));
    FIG1.forEach(([i, o], idx) => {
      typeCell(root, idx, "input", i);
      typeCell(root, idx, "exampleOutput", o);
    });
    typeCell(root, 4, "input", "Steve P. Green (9)");
    await settle();
    expect(root.querySelector("#banner")!.textContent).toBe("no consistent program");
    expect(root.querySelector('tr[data-row="4"] .fill.stale')).toBeTruthy();
  });

  it("induction mode hides the program panel and posts to /api/induce", async () => {
    const { root, calls } = mount();
    FIG1.forEach(([i, o], idx) => {
      typeCell(root, idx, "input", i);
      typeCell(root, idx, "exampleOutput", o);
    });
    typeCell(root, 4, "input", "Steve P. Green (9)");
    await settle();
    expect(root.querySelector("#program-panel")).toBeTruthy();

    const mode = root.querySelector<HTMLSelectElement>("#opt-mode")!;
    mode.value = "induction";
    mode.dispatchEvent(new Event("change", { bubbles: true }));
    await settle();
    expect(root.querySelector("#program-panel")).toBeNull();
    expect(calls[calls.length - 1].path).toBe("/api/induce");
  });

  it("beam and metric selectors feed the request options", async () => {
    const { root, calls } = mount();
    typeCell(root, 0, "input", "a");
    typeCell(root, 0, "exampleOutput", "b");
    const beam = root.querySelector<HTMLSelectElement>("#opt-beam")!;
    beam.value = "100";
    beam.dispatchEvent(new Event("change", { bubbles: true }));
    const metric = root.querySelector<HTMLSelectElement>("#opt-metric")!;
    metric.value = "cer";
    metric.dispatchEvent(new Event("change", { bubbles: true }));
    await settle();
    const last = calls[calls.length - 1].request;
    expect(last.options.beam).toBe(100);
    expect(last.options.metric).toBe("cer");
  });

  it("rapid edits collapse into a single request (newest wins)", async () => {
    const { root, calls } = mount();
    typeCell(root, 0, "input", "a");
    typeCell(root, 0, "exampleOutput", "b");
    await vi.advanceTimersByTimeAsync(100);
    typeCell(root, 1, "input", "c");
    await vi.advanceTimersByTimeAsync(100);
    typeCell(root, 1, "exampleOutput", "d");
    await settle();
    expect(calls.length).toBe(1);
    expect(calls[0].request.observed).toEqual([
      ["a", "b"],
      ["c", "d"],
    ]);
  });

  it("request failure keeps prior state and shows a toast banner", async () => {
    let fail = false;
    const { root, calls } = mount((req) => {
      if (fail) return { status: 500, body: { error: "internal error" } };
      return {
        status: 200,
        body: { program_text: "ConstStr('b')", consistent: true, fills: [] },
      };
    });
    typeCell(root, 0, "input", "a");
    typeCell(root, 0, "exampleOutput", "b");
    await settle();
    expect(root.querySelector("#program-text")!.textContent).toContain("ConstStr('b')");
    fail = true;
    typeCell(root, 1, "input", "x");
    typeCell(root, 1, "exampleOutput", "y");
    await settle();
    expect(root.querySelector("#banner")).toBeTruthy();
    expect(root.querySelector("#program-text")!.textContent).toContain("ConstStr('b')"); // prior state intact
  });
});

describe("rendering purity", () => {
  it("the same state renders identical markup", () => {
    document.body.innerHTML = '<div id="a"></div><div id="b"></div>';
    let state = initialState();
    state = setCell(state, 0, "input", "john Smith");
    state = setCell(state, 0, "exampleOutput", "Smith, Jhn");
    const a = document.getElementById("a") as HTMLElement;
    const b = document.getElementById("b") as HTMLElement;
    renderApp(a, state);
    renderApp(b, state);
    expect(a.innerHTML).toBe(b.innerHTML);
    renderApp(a, state); // idempotent re-render
    expect(a.innerHTML).toBe(b.innerHTML);
  });
});
