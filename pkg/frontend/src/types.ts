// Shapes of the documents the service returns, plus a structural validator.

export interface ArgumentEntry {
  name: string;
  value: string;
  kind: "exogenous" | "endogenous";
  accepted?: boolean;
}

export interface PropertyEntry {
  name: string;
  applicable: boolean;
  passed: boolean | null;
  witness: string | null;
}

export interface PropertyReport {
  all_passed: boolean;
  properties: PropertyEntry[];
}

export interface EdgeAnnotation {
  source: string;
  target: string;
  role: "attack" | "support";
  witness_value: string;
  witness_outcome: string;
  baseline: string;
}

export interface InterventionEntry {
  variable: string;
  value: string;
}

export interface ExplanationDocument {
  model: string;
  input: Record<string, string>;
  interventions: InterventionEntry[];
  policy: string;
  arguments: ArgumentEntry[];
  attacks: [string, string][];
  supports: [string, string][];
  edge_annotations: EdgeAnnotation[];
  property_report?: PropertyReport;
}

export interface DomainInfo {
  name: string;
  values: string[];
  order: [string, string][];
}

export interface VariableInfo {
  name: string;
  kind: "exogenous" | "endogenous";
  domain: string;
}

export interface ModelSummary {
  name: string;
  binary: boolean;
  domains: DomainInfo[];
  variables: VariableInfo[];
  influences: [string, string][];
}

function isRecord(x: unknown): x is Record<string, unknown> {
  return typeof x === "object" && x !== null && !Array.isArray(x);
}

function isEdgeList(x: unknown): x is [string, string][] {
  return (
    Array.isArray(x) &&
    x.every(
      (e) => Array.isArray(e) && e.length === 2 && e.every((n) => typeof n === "string")
    )
  );
}

/** Structural problems with a document; an empty list means it is usable. */
export function validateDocument(x: unknown): string[] {
  const problems: string[] = [];
  if (!isRecord(x)) return ["document is not an object"];
  if (typeof x.model !== "string") problems.push("missing model name");
  if (!isRecord(x.input)) problems.push("missing input map");
  if (!Array.isArray(x.interventions)) problems.push("missing interventions list");
  if (!Array.isArray(x.arguments)) {
    problems.push("missing arguments list");
  } else {
    for (const entry of x.arguments) {
      if (!isRecord(entry) || typeof entry.name !== "string" || typeof entry.value !== "string") {
        problems.push("malformed argument entry");
        break;
      }
    }
  }
  if (!isEdgeList(x.attacks)) problems.push("malformed attacks");
  if (!isEdgeList(x.supports)) problems.push("malformed supports");
  if (problems.length > 0) return problems;

  const names = new Set((x.arguments as ArgumentEntry[]).map((a) => a.name));
  for (const [from, to] of [
    ...(x.attacks as [string, string][]),
    ...(x.supports as [string, string][]),
  ]) {
    if (!names.has(from) || !names.has(to)) {
      problems.push(`edge ${from} -> ${to} references an unlisted argument`);
    }
  }
  const report = (x as { property_report?: unknown }).property_report;
  if (report !== undefined) {
    if (!isRecord(report) || !Array.isArray(report.properties)) {
      problems.push("malformed property report");
    }
  }
  return problems;
}

export function validateModelSummary(x: unknown): string[] {
  if (!isRecord(x)) return ["model summary is not an object"];
  const problems: string[] = [];
  if (typeof x.name !== "string") problems.push("missing name");
  if (!Array.isArray(x.variables)) problems.push("missing variables");
  if (!Array.isArray(x.domains)) problems.push("missing domains");
  if (!isEdgeList(x.influences)) problems.push("malformed influences");
  return problems;
}
