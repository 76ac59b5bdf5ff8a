/** Scripted round-trip tests: the editor drives the real HTTP service
 * through jsdom DOM events, exactly as a browser session would. */

import { beforeEach, describe, expect, inject, it, vi } from "vitest";

import { Api } from "../src/api.js";
import { Editor } from "../src/app.js";

const baseUrl = inject("baseUrl");

function mount(): HTMLElement {
  document.body.innerHTML = '<div id="app"></div>';
  return document.getElementById("app")!;
}

async function freshEditor(): Promise<Editor> {
  const editor = new Editor(mount(), new Api(baseUrl));
  await editor.init();
  return editor;
}

function control<T extends HTMLElement>(path: string): T {
  const el = document.querySelector<T>(`[data-path="${path}"]`);
  if (!el) throw new Error(`no control for ${path}`);
  return el;
}

function patternSvg(): string {
  return document.getElementById("pattern")!.innerHTML;
}

beforeEach(() => {
  document.body.innerHTML = "";
});

describe("editor boot", () => {
  it("renders one control per schema parameter, grouped", async () => {
    await freshEditor();
    const controls = document.querySelectorAll("[data-path]");
    expect(controls.length).toBe(122);
    expect(document.querySelectorAll("fieldset.param-group").length).toBeGreaterThan(5);

    const neckline = control<HTMLSelectElement>("neckline.kind");
    const options = Array.from(neckline.options).map((o) => o.value);
    expect(options).toEqual(["crew", "v", "boat", "square"]);

    // bucket labels for length parameters come from the schema
    const labels = Array.from(document.querySelectorAll(".bucket")).map(
      (b) => b.textContent,
    );
    expect(labels).toContain("half length");
    expect(labels).toContain("full length");
  });

  it("shows the server-rendered pattern and validity badge", async () => {
    await freshEditor();
    expect(patternSvg()).toContain("<svg");
    expect(patternSvg()).toContain("panel-bodice_front");
    expect(document.getElementById("validity-badge")!.textContent).toBe("valid");
  });
});

describe("parameter panel round trip", () => {
  it("flipping the neckline dropdown PATCHes and refreshes the SVG", async () => {
    const editor = await freshEditor();
    const before = patternSvg();
    const fetchSpy = vi.spyOn(globalThis, "fetch");

    const neckline = control<HTMLSelectElement>("neckline.kind");
    neckline.value = "v";
    neckline.dispatchEvent(new Event("change"));
    await editor.settled();

    const patches = fetchSpy.mock.calls.filter(
      ([, init]) => init && (init as RequestInit).method === "PATCH",
    );
    expect(patches.length).toBe(1);
    expect(String(patches[0][0])).toContain("/config");

    const view = await editor.api.getSession(editor.sessionId);
    expect(view.ok && view.body.config.assignments["neckline.kind"]).toBe("v");
    expect(patternSvg()).not.toBe(before);
    fetchSpy.mockRestore();
  });

  it("debounces: a burst of changes becomes a single PATCH", async () => {
    const editor = await freshEditor();
    const fetchSpy = vi.spyOn(globalThis, "fetch");

    const drop = control<HTMLSelectElement>("bodice.side_shape");
    drop.value = "straight";
    drop.dispatchEvent(new Event("change"));
    const flag = control<HTMLInputElement>("bodice.front_darts");
    flag.checked = true;
    flag.dispatchEvent(new Event("change"));

    await new Promise((r) => setTimeout(r, 400)); // past the 300 ms debounce
    await editor.settled();

    const patches = fetchSpy.mock.calls.filter(
      ([, init]) => init && (init as RequestInit).method === "PATCH",
    );
    expect(patches.length).toBe(1);
    const body = JSON.parse(String((patches[0][1] as RequestInit).body));
    expect(Object.keys(body).sort()).toEqual([
      "bodice.front_darts",
      "bodice.side_shape",
    ]);
    fetchSpy.mockRestore();
  });

  it("rolls back and shows an inline violation on out-of-range entry", async () => {
    const editor = await freshEditor();
    const before = patternSvg();

    const manual = document.querySelector<HTMLInputElement>(
      '[data-manual-for="bodice.length"]',
    )!;
    manual.value = "999";
    manual.dispatchEvent(new Event("change"));
    await editor.settled();

    const error = document.querySelector<HTMLElement>(
      '[data-error-for="bodice.length"]',
    )!;
    expect(error.hidden).toBe(false);
    expect(error.textContent).toContain("out-of-range");

    // form state equals the last accepted config, SVG untouched
    expect(control<HTMLInputElement>("bodice.length").value).toBe("47");
    expect(manual.value).toBe("47");
    expect(patternSvg()).toBe(before);

    const view = await editor.api.getSession(editor.sessionId);
    expect(view.ok && view.body.config.assignments["bodice.length"]).toBe(47.0);
  });
});

describe("instruction box", () => {
  async function submit(editor: Editor, text: string): Promise<void> {
    const input = document.getElementById("instruction") as HTMLInputElement;
    input.value = text;
    document.getElementById("send")!.dispatchEvent(new Event("click"));
    await editor.settled();
  }

  it("CHANGE THE PANT TO SKIRT flips the bottom control and the SVG", async () => {
    const editor = await freshEditor();
    const before = patternSvg();
    expect(before).toContain("pants_front_left");

    await submit(editor, "CHANGE THE PANT TO SKIRT");

    expect(control<HTMLSelectElement>("meta.bottom.kind").value).toBe("skirt");
    const after = patternSvg();
    expect(after).not.toBe(before);
    expect(after).toContain("skirt_front");
    expect(after).not.toContain("pants_front_left");
    const flashed = document.querySelector('[data-row="meta.bottom.kind"]')!;
    expect(flashed.classList.contains("flash")).toBe(true);
  });

  it("make the sleeve longer advances the length bucket", async () => {
    const editor = await freshEditor();
    // start from half length so there is room to grow
    const slider = control<HTMLInputElement>("sleeve.length");
    slider.value = "0.5";
    slider.dispatchEvent(new Event("change"));
    await editor.settled();

    await submit(editor, "make the sleeve longer");
    const view = await editor.api.getSession(editor.sessionId);
    expect(view.ok && view.body.config.assignments["sleeve.length"]).toBe(0.75);
  });

  it("out-of-grammar text raises an error toast and leaves the form alone", async () => {
    const editor = await freshEditor();
    const before = patternSvg();
    const bottomBefore = control<HTMLSelectElement>("meta.bottom.kind").value;

    await submit(editor, "paint it blue");

    const toasts = Array.from(document.querySelectorAll(".toast.error"));
    expect(toasts.length).toBe(1);
    expect(toasts[0].textContent).toContain("paint it blue");
    expect(control<HTMLSelectElement>("meta.bottom.kind").value).toBe(bottomBefore);
    expect(patternSvg()).toBe(before);
  });
});
