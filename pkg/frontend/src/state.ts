// Session state and its pure transitions. The server is stateless: every
// snapshot carries the whole what-if context, and undo simply restores an
// earlier snapshot together with the document it already rendered.

import type { ExplanationDocument, InterventionEntry, ModelSummary } from "./types.js";

export interface Snapshot {
  input: Record<string, string>;
  interventions: InterventionEntry[];
  policy: string;
  document: ExplanationDocument | null;
}

export interface SessionState {
  current: Snapshot;
  history: Snapshot[];
}

export function domainOf(model: ModelSummary, variable: string): string[] {
  const info = model.variables.find((v) => v.name === variable);
  if (!info) throw new Error(`unknown variable ${variable}`);
  const domain = model.domains.find((d) => d.name === info.domain);
  if (!domain) throw new Error(`unknown domain ${info.domain}`);
  return domain.values;
}

export function initialState(model: ModelSummary): SessionState {
  const input: Record<string, string> = {};
  for (const variable of model.variables) {
    if (variable.kind === "exogenous") {
      input[variable.name] = domainOf(model, variable.name)[0];
    }
  }
  return {
    current: { input, interventions: [], policy: "all", document: null },
    history: [],
  };
}

function pushHistory(state: SessionState, next: Omit<Snapshot, "document">): SessionState {
  return {
    current: { ...next, document: null },
    history: [...state.history, state.current],
  };
}

export function setExogenous(state: SessionState, name: string, value: string): SessionState {
  return pushHistory(state, {
    input: { ...state.current.input, [name]: value },
    interventions: state.current.interventions,
    policy: state.current.policy,
  });
}

/** Step an exogenous variable to the next value in its domain order. */
export function cycleExogenous(
  state: SessionState,
  model: ModelSummary,
  name: string
): SessionState {
  const values = domainOf(model, name);
  const index = values.indexOf(state.current.input[name]);
  const next = values[(index + 1) % values.length];
  return setExogenous(state, name, next);
}

/** Pin a variable with an intervention, or clear it with value null. */
export function setIntervention(
  state: SessionState,
  variable: string,
  value: string | null
): SessionState {
  const kept = state.current.interventions.filter((i) => i.variable !== variable);
  if (value !== null) kept.push({ variable, value });
  kept.sort((a, b) => a.variable.localeCompare(b.variable));
  return pushHistory(state, {
    input: state.current.input,
    interventions: kept,
    policy: state.current.policy,
  });
}

export function setPolicy(state: SessionState, policy: string): SessionState {
  return pushHistory(state, {
    input: state.current.input,
    interventions: state.current.interventions,
    policy,
  });
}

/** Attach the document the service returned for the current snapshot. */
export function recordDocument(
  state: SessionState,
  document: ExplanationDocument
): SessionState {
  return { current: { ...state.current, document }, history: state.history };
}

export function canUndo(state: SessionState): boolean {
  return state.history.length > 0;
}

/** Return to the previous snapshot; its document is already there, so no fetch. */
export function undo(state: SessionState): SessionState {
  if (!canUndo(state)) return state;
  const history = state.history.slice(0, -1);
  return { current: state.history[state.history.length - 1], history };
}

/** The request body the service expects for the current snapshot. */
export function explainRequest(state: SessionState): {
  input: Record<string, string>;
  interventions: InterventionEntry[];
  policy: string;
} {
  return {
    input: state.current.input,
    interventions: state.current.interventions,
    policy: state.current.policy,
  };
}
