/** The editor: one live session, a schema-driven panel, the SVG view and
 * the instruction box. The server owns all truth: the panel re-syncs to
 * the last accepted config on every rejection, and the pattern view only
 * ever shows bytes from GET pattern.svg. */

import { Api, Assignments, SchemaDoc, SessionView, ViolationDoc } from "./api.js";
import { SchemaForm } from "./form.js";

const DEBOUNCE_MS = 300;

export class Editor {
  readonly api: Api;
  private root: HTMLElement;
  private form!: SchemaForm;
  private schema!: SchemaDoc;
  private session!: SessionView;
  private lastAccepted: Assignments = {};
  private pending = new Map<string, unknown>();
  private timer: ReturnType<typeof setTimeout> | null = null;
  // every server mutation joins this queue, so ops stay ordered and awaitable
  private queue: Promise<void> = Promise.resolve();

  constructor(root: HTMLElement, api: Api) {
    this.root = root;
    this.api = api;
  }

  get sessionId(): string {
    return this.session.id;
  }

  async init(sessionId?: string): Promise<void> {
    this.renderSkeleton();
    this.schema = await this.api.schema();
    if (sessionId) {
      const existing = await this.api.getSession(sessionId);
      this.session = existing.ok ? existing.body : await this.api.createSession();
    } else {
      this.session = await this.api.createSession();
    }
    this.lastAccepted = { ...this.session.config.assignments };
    this.form = new SchemaForm(
      this.root.querySelector("#panel")!,
      this.schema,
      (path, value) => this.onControlChange(path, value),
    );
    this.form.render(this.lastAccepted);
    this.wireInstructionBox();
    await this.refreshSvg();
    this.renderMeta();
  }

  private renderSkeleton(): void {
    this.root.innerHTML = `
      <header class="topbar">
        <h1>pattern editor</h1>
        <span id="session-label"></span>
        <span id="validity-badge" class="badge"></span>
        <span id="stats-badge" class="badge"></span>
      </header>
      <main class="columns">
        <section class="left"><form id="panel" autocomplete="off"></form></section>
        <section class="right">
          <div id="pattern" class="pattern-view"></div>
          <div class="instruction-bar">
            <input id="instruction" type="text"
                   placeholder='edit instruction, e.g. "CHANGE THE PANT TO SKIRT"'>
            <button id="send" type="button">apply</button>
          </div>
          <ul id="history" class="history"></ul>
        </section>
      </main>
      <div id="toasts" class="toasts"></div>`;
  }

  private wireInstructionBox(): void {
    const input = this.root.querySelector<HTMLInputElement>("#instruction")!;
    const send = this.root.querySelector<HTMLButtonElement>("#send")!;
    const submit = () => {
      const text = input.value.trim();
      if (text) this.enqueue(() => this.submitInstruction(text));
    };
    send.addEventListener("click", submit);
    input.addEventListener("keydown", (event) => {
      if ((event as KeyboardEvent).key === "Enter") submit();
    });
  }

  // --- debounced parameter patches ---

  private onControlChange(path: string, value: unknown): void {
    this.pending.set(path, value);
    if (this.timer !== null) clearTimeout(this.timer);
    this.timer = setTimeout(() => void this.flush(), DEBOUNCE_MS);
  }

  private enqueue(op: () => Promise<void>): Promise<void> {
    this.queue = this.queue.then(op).catch((err) => {
      this.toast(String(err), "error");
    });
    return this.queue;
  }

  /** Push pending edits immediately (the debounce timer normally does this). */
  flush(): Promise<void> {
    if (this.timer !== null) {
      clearTimeout(this.timer);
      this.timer = null;
    }
    if (this.pending.size === 0) return this.queue;
    const updates = Object.fromEntries(this.pending);
    this.pending.clear();
    return this.enqueue(() => this.patch(updates));
  }

  /** Resolves once nothing is pending, debouncing, or in flight. */
  async settled(): Promise<void> {
    while (this.timer !== null || this.pending.size > 0) {
      await this.flush();
    }
    await this.queue;
  }

  private async patch(updates: Assignments): Promise<void> {
    const result = await this.api.patchConfig(this.session.id, updates);
    if (result.ok) {
      await this.acceptView(result.body, Object.keys(updates));
    } else {
      // roll the panel back to the last accepted config
      this.form.setValues(this.lastAccepted);
      const details = (result.error.details ?? []) as ViolationDoc[];
      this.form.showErrors(Array.isArray(details) ? details : []);
      this.toast(`rejected: ${result.error.message}`, "error");
    }
  }

  private async submitInstruction(text: string): Promise<void> {
    const result = await this.api.postEdit(this.session.id, text);
    if (!result.ok) {
      const detail = (result.error.details ?? {}) as { instruction?: string };
      const remainder = detail.instruction ? ` (${detail.instruction})` : "";
      this.toast(`${result.error.message}${remainder}`, "error");
      return;
    }
    this.toast(`applied: ${result.body.applied}`, "info");
    for (const notice of result.body.notices) this.toast(notice, "info");
    await this.acceptView(result.body.session, result.body.changed_paths);
  }

  private async acceptView(view: SessionView, changedPaths: string[]): Promise<void> {
    this.session = view;
    this.lastAccepted = { ...view.config.assignments };
    this.form.clearErrors();
    this.form.setValues(this.lastAccepted);
    this.form.flash(changedPaths);
    this.renderMeta();
    await this.refreshSvg();
  }

  private async refreshSvg(): Promise<void> {
    const svg = await this.api.getSvg(this.session.id);
    this.root.querySelector<HTMLElement>("#pattern")!.innerHTML = svg;
  }

  private renderMeta(): void {
    this.root.querySelector("#session-label")!.textContent =
      `session ${this.session.id}`;
    const validity = this.root.querySelector<HTMLElement>("#validity-badge")!;
    validity.textContent = this.session.validity.passed
      ? "valid"
      : `${this.session.validity.violations.length} violations`;
    validity.classList.toggle("ok", this.session.validity.passed);
    validity.classList.toggle("bad", !this.session.validity.passed);
    const stats = this.session.stats;
    this.root.querySelector("#stats-badge")!.textContent =
      `${stats.num_panels} panels / ${stats.num_stitches} stitches`;

    const history = this.root.querySelector<HTMLElement>("#history")!;
    history.innerHTML = "";
    for (const entry of this.session.history.slice().reverse()) {
      const li = document.createElement("li");
      const kind = String(entry.kind ?? "event");
      const detail = entry.applied ?? entry.paths ?? entry.agent ?? "";
      li.textContent = `${kind} ${Array.isArray(detail) ? detail.join(", ") : detail}`;
      history.appendChild(li);
    }
  }

  toast(message: string, level: "info" | "error"): void {
    const holder = this.root.querySelector<HTMLElement>("#toasts")!;
    const el = document.createElement("div");
    el.className = `toast ${level}`;
    el.textContent = message;
    holder.appendChild(el);
    setTimeout(() => el.remove(), 5000);
  }
}
