// Wires the pure pieces to the DOM: controls on the left, the graph in the
// middle, the property panel on the right, an error banner on top.

import { ApiClient, ApiError, isAbort } from "./api.js";
import { computeLayout } from "./layout.js";
import { propertyLines, renderPanel } from "./panel.js";
import {
  SessionState,
  canUndo,
  cycleExogenous,
  explainRequest,
  initialState,
  recordDocument,
  setIntervention,
  setPolicy,
  undo,
} from "./state.js";
import type { ModelSummary } from "./types.js";
import { validateDocument } from "./types.js";
import { buildViewModel, renderSvg } from "./view.js";

const WIDTH = 720;
const HEIGHT = 420;

const api = new ApiClient("");

function el<T extends HTMLElement>(id: string): T {
  const found = document.getElementById(id);
  if (!found) throw new Error(`missing #${id}`);
  return found as T;
}

let state: SessionState;
let model: ModelSummary;
let layout: ReturnType<typeof computeLayout>;

function showError(message: string, retry?: () => void): void {
  const banner = el<HTMLDivElement>("banner");
  banner.innerHTML = "";
  banner.textContent = message;
  if (retry) {
    const button = document.createElement("button");
    button.textContent = "retry";
    button.addEventListener("click", () => {
      banner.hidden = true;
      retry();
    });
    banner.append(" ", button);
  }
  banner.hidden = false;
}

function clearError(): void {
  el<HTMLDivElement>("banner").hidden = true;
}

function renderControls(): void {
  const inputs = el<HTMLDivElement>("inputs");
  inputs.innerHTML = "";
  for (const variable of model.variables.filter((v) => v.kind === "exogenous")) {
    const row = document.createElement("div");
    row.className = "control-row";
    const label = document.createElement("span");
    label.textContent = variable.name;
    const button = document.createElement("button");
    button.textContent = state.current.input[variable.name];
    button.title = `advance ${variable.name} to its next value`;
    button.addEventListener("click", () => {
      transition(cycleExogenous(state, model, variable.name));
    });
    row.append(label, button);
    inputs.append(row);
  }

  const pins = el<HTMLDivElement>("interventions");
  pins.innerHTML = "";
  for (const variable of model.variables.filter((v) => v.kind === "endogenous")) {
    const row = document.createElement("div");
    row.className = "control-row";
    const label = document.createElement("span");
    label.textContent = `do(${variable.name})`;
    const select = document.createElement("select");
    const none = document.createElement("option");
    none.value = "";
    none.textContent = "off";
    select.append(none);
    const domain = model.domains.find((d) => d.name === variable.domain);
    for (const value of domain?.values ?? []) {
      const option = document.createElement("option");
      option.value = value;
      option.textContent = value;
      select.append(option);
    }
    const active = state.current.interventions.find((i) => i.variable === variable.name);
    select.value = active ? active.value : "";
    select.addEventListener("change", () => {
      transition(setIntervention(state, variable.name, select.value || null));
    });
    row.append(label, select);
    pins.append(row);
  }

  const policy = el<HTMLSelectElement>("policy");
  if (!policy.dataset.ready) {
    for (const option of ["all", "involved"]) {
      const element = document.createElement("option");
      element.value = option;
      element.textContent = option;
      policy.append(element);
    }
    for (const variable of model.variables) {
      const element = document.createElement("option");
      element.value = `focused:${variable.name}`;
      element.textContent = `focused:${variable.name}`;
      policy.append(element);
    }
    policy.dataset.ready = "1";
    policy.addEventListener("change", () => {
      transition(setPolicy(state, policy.value));
    });
  }
  policy.value = state.current.policy;

  const undoButton = el<HTMLButtonElement>("undo");
  undoButton.disabled = !canUndo(state);
}

function renderGraph(): void {
  const host = el<HTMLDivElement>("graph");
  const doc = state.current.document;
  if (!doc) {
    host.innerHTML = '<p class="muted">loading…</p>';
    return;
  }
  const problems = validateDocument(doc);
  if (problems.length > 0) {
    showError(`the service returned an unusable document: ${problems[0]}`);
    return;
  }
  host.innerHTML = renderSvg(buildViewModel(doc, model, layout), WIDTH, HEIGHT);
  const report = doc.property_report;
  el<HTMLDivElement>("panel").innerHTML = renderPanel(report);
  el<HTMLPreElement>("report-lines").textContent = report
    ? propertyLines(report).join("\n")
    : "";
}

function renderAll(): void {
  renderControls();
  renderGraph();
}

async function refetch(): Promise<void> {
  const snapshot = state.current;
  try {
    const doc = await api.explain(explainRequest(state));
    if (state.current === snapshot) {
      state = recordDocument(state, doc);
      clearError();
      renderAll();
    }
  } catch (err) {
    if (isAbort(err)) return; // a newer request took over
    const message = err instanceof ApiError ? `${err.code}: ${err.message}` : String(err);
    showError(message, () => void refetch());
  }
}

function transition(next: SessionState): void {
  state = next;
  renderAll();
  void refetch();
}

async function boot(): Promise<void> {
  try {
    model = await api.getModel();
  } catch (err) {
    showError(`cannot load the model: ${String(err)}`, () => void boot());
    return;
  }
  layout = computeLayout(model, WIDTH, HEIGHT);
  el<HTMLSpanElement>("model-name").textContent = model.name;
  state = initialState(model);
  el<HTMLButtonElement>("undo").addEventListener("click", () => {
    if (!canUndo(state)) return;
    state = undo(state); // the previous document is in the snapshot: no fetch
    clearError();
    renderAll();
  });
  renderAll();
  await refetch();
}

void boot();
