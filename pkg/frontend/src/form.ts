/** Schema-driven parameter panel: every control is generated from the
 * schema document; nothing about specific parameters is hardcoded. */

import type { Assignments, ParamDoc, SchemaDoc, ViolationDoc } from "./api.js";

export type ChangeHandler = (path: string, value: unknown) => void;

function groupOf(path: string): string {
  const dot = path.indexOf(".");
  return dot < 0 ? path : path.slice(0, dot);
}

function labelText(param: ParamDoc): string {
  const dot = param.path.indexOf(".");
  return dot < 0 ? param.path : param.path.slice(dot + 1).replace(/[._]/g, " ");
}

export class SchemaForm {
  private controls = new Map<string, HTMLElement>();
  private params = new Map<string, ParamDoc>();

  constructor(
    private readonly container: HTMLElement,
    private readonly schema: SchemaDoc,
    private readonly onChange: ChangeHandler,
  ) {
    for (const p of schema.params) this.params.set(p.path, p);
  }

  render(assignments: Assignments): void {
    this.container.innerHTML = "";
    this.controls.clear();
    const groups = new Map<string, HTMLFieldSetElement>();
    for (const param of this.schema.params) {
      const group = groupOf(param.path);
      let fieldset = groups.get(group);
      if (!fieldset) {
        fieldset = document.createElement("fieldset");
        fieldset.className = "param-group";
        const legend = document.createElement("legend");
        legend.textContent = group.replace(/_/g, " ");
        fieldset.appendChild(legend);
        groups.set(group, fieldset);
        this.container.appendChild(fieldset);
      }
      fieldset.appendChild(this.buildRow(param, assignments[param.path]));
    }
  }

  private buildRow(param: ParamDoc, value: unknown): HTMLElement {
    const row = document.createElement("div");
    row.className = "param-row";
    row.dataset.row = param.path;
    const label = document.createElement("label");
    label.textContent = labelText(param);
    label.title = param.description ?? param.path;
    row.appendChild(label);

    let control: HTMLElement;
    switch (param.kind) {
      case "boolean":
        control = this.booleanControl(param, Boolean(value));
        break;
      case "select":
        control = this.selectControl(param, String(value));
        break;
      case "integer":
        control = this.integerControl(param, Number(value));
        break;
      default:
        control = this.floatControl(param, Number(value));
    }
    control.classList.add("control");
    row.appendChild(control);

    const error = document.createElement("span");
    error.className = "field-error";
    error.dataset.errorFor = param.path;
    error.hidden = true;
    row.appendChild(error);

    this.controls.set(param.path, control);
    return row;
  }

  private booleanControl(param: ParamDoc, value: boolean): HTMLElement {
    const input = document.createElement("input");
    input.type = "checkbox";
    input.checked = value;
    input.dataset.path = param.path;
    input.addEventListener("change", () => this.onChange(param.path, input.checked));
    return input;
  }

  private selectControl(param: ParamDoc, value: string): HTMLElement {
    const select = document.createElement("select");
    select.dataset.path = param.path;
    for (const option of param.options ?? []) {
      const el = document.createElement("option");
      el.value = option;
      el.textContent = option.replace(/_/g, " ");
      select.appendChild(el);
    }
    select.value = value;
    select.addEventListener("change", () => this.onChange(param.path, select.value));
    return select;
  }

  private integerControl(param: ParamDoc, value: number): HTMLElement {
    const input = document.createElement("input");
    input.type = "number";
    input.step = "1";
    if (param.range) {
      input.min = String(param.range[0]);
      input.max = String(param.range[1]);
    }
    input.value = String(value);
    input.dataset.path = param.path;
    input.addEventListener("change", () =>
      this.onChange(param.path, Number.parseInt(input.value, 10)),
    );
    return input;
  }

  /** Slider plus manual entry plus one button per descriptive bucket. */
  private floatControl(param: ParamDoc, value: number): HTMLElement {
    const wrap = document.createElement("div");
    wrap.className = "float-control";
    const [lo, hi] = param.range ?? [0, 1];

    const slider = document.createElement("input");
    slider.type = "range";
    slider.min = String(lo);
    slider.max = String(hi);
    slider.step = String((hi - lo) / 100);
    slider.value = String(value);
    slider.dataset.path = param.path;

    const manual = document.createElement("input");
    manual.type = "number";
    manual.value = String(value);
    manual.step = "any";
    manual.dataset.manualFor = param.path;

    slider.addEventListener("change", () => {
      manual.value = slider.value;
      this.onChange(param.path, Number(slider.value));
    });
    manual.addEventListener("change", () => {
      this.onChange(param.path, Number(manual.value));
    });

    wrap.appendChild(slider);
    wrap.appendChild(manual);

    const buckets = document.createElement("div");
    buckets.className = "buckets";
    for (const bucket of param.descriptive_buckets ?? []) {
      const btn = document.createElement("button");
      btn.type = "button";
      btn.className = "bucket";
      btn.textContent = bucket.label;
      btn.addEventListener("click", () => {
        slider.value = String(bucket.value);
        manual.value = String(bucket.value);
        this.onChange(param.path, bucket.value);
      });
      buckets.appendChild(btn);
    }
    wrap.appendChild(buckets);
    return wrap;
  }

  /** Sync every control to the given assignments (used for rollback too). */
  setValues(assignments: Assignments): void {
    for (const [path, control] of this.controls) {
      const param = this.params.get(path)!;
      const value = assignments[path];
      if (param.kind === "boolean") {
        (control as HTMLInputElement).checked = Boolean(value);
      } else if (param.kind === "select") {
        (control as HTMLSelectElement).value = String(value);
      } else if (param.kind === "integer") {
        (control as HTMLInputElement).value = String(value);
      } else {
        const slider = control.querySelector<HTMLInputElement>("input[type=range]")!;
        const manual = control.querySelector<HTMLInputElement>("input[type=number]")!;
        slider.value = String(value);
        manual.value = String(value);
      }
    }
  }

  value(path: string): unknown {
    const param = this.params.get(path);
    const control = this.controls.get(path);
    if (!param || !control) return undefined;
    if (param.kind === "boolean") return (control as HTMLInputElement).checked;
    if (param.kind === "select") return (control as HTMLSelectElement).value;
    if (param.kind === "integer")
      return Number.parseInt((control as HTMLInputElement).value, 10);
    return Number(control.querySelector<HTMLInputElement>("input[type=range]")!.value);
  }

  flash(paths: string[]): void {
    for (const path of paths) {
      const row = this.container.querySelector<HTMLElement>(
        `[data-row="${path}"]`,
      );
      if (!row) continue;
      row.classList.add("flash");
      setTimeout(() => row.classList.remove("flash"), 900);
    }
  }

  showErrors(violations: ViolationDoc[]): void {
    this.clearErrors();
    for (const violation of violations) {
      const span = this.container.querySelector<HTMLElement>(
        `[data-error-for="${violation.path}"]`,
      );
      if (span) {
        span.textContent = violation.message;
        span.hidden = false;
      }
    }
  }

  clearErrors(): void {
    for (const span of this.container.querySelectorAll<HTMLElement>(".field-error")) {
      span.hidden = true;
      span.textContent = "";
    }
  }
}
