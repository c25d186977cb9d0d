// Pure view model for the explanation graph, plus its SVG rendering.
// Everything here is a function of (document, model, layout): the tests
// work on the view model, the DOM only ever receives finished markup.

import type { Point } from "./layout.js";
import type { EdgeAnnotation, ExplanationDocument, ModelSummary } from "./types.js";

export interface NodeView {
  name: string;
  value: string;
  kind: "exogenous" | "endogenous";
  accepted: boolean | null;
  intervened: boolean;
  dimmed: boolean;
  x: number;
  y: number;
}

export interface EdgeView {
  source: string;
  target: string;
  role: "attack" | "support";
  tooltip: string;
  x1: number;
  y1: number;
  x2: number;
  y2: number;
}

export interface GraphViewModel {
  nodes: NodeView[];
  edges: EdgeView[];
}

function tooltipFor(annotation: EdgeAnnotation | undefined, role: string): string {
  if (!annotation) return role;
  const direction =
    annotation.role === "attack"
      ? "raising it can only lower the target"
      : "raising it can only raise the target";
  return (
    `setting ${annotation.source} to ${annotation.witness_value} moves ` +
    `${annotation.target} from ${annotation.baseline} to ${annotation.witness_outcome}; ` +
    direction
  );
}

export function buildViewModel(
  doc: ExplanationDocument,
  model: ModelSummary,
  layout: Record<string, Point>
): GraphViewModel {
  const annotations = new Map<string, EdgeAnnotation>();
  for (const a of doc.edge_annotations ?? []) {
    annotations.set(`${a.source}->${a.target}`, a);
  }
  const touched = new Set<string>();
  const edges: EdgeView[] = [];
  const fallback: Point = { x: 0, y: 0, layer: 0 };
  const pairs: [readonly [string, string], "attack" | "support"][] = [
    ...doc.attacks.map((e) => [e, "attack"] as [readonly [string, string], "attack"]),
    ...doc.supports.map((e) => [e, "support"] as [readonly [string, string], "support"]),
  ];
  pairs.sort((a, b) =>
    `${a[0][0]}->${a[0][1]}:${a[1]}`.localeCompare(`${b[0][0]}->${b[0][1]}:${b[1]}`)
  );
  for (const [[source, target], role] of pairs) {
    touched.add(source);
    touched.add(target);
    const from = layout[source] ?? fallback;
    const to = layout[target] ?? fallback;
    edges.push({
      source,
      target,
      role,
      tooltip: tooltipFor(annotations.get(`${source}->${target}`), role),
      x1: from.x,
      y1: from.y,
      x2: to.x,
      y2: to.y,
    });
  }
  const intervened = new Set(doc.interventions.map((i) => i.variable));
  const nodes: NodeView[] = [...doc.arguments]
    .sort((a, b) => a.name.localeCompare(b.name))
    .map((argument) => {
      const point = layout[argument.name] ?? fallback;
      return {
        name: argument.name,
        value: argument.value,
        kind: argument.kind,
        accepted: argument.accepted ?? null,
        intervened: intervened.has(argument.name),
        dimmed: doc.policy === "all" && !touched.has(argument.name),
        x: point.x,
        y: point.y,
      };
    });
  return { nodes, edges };
}

/** Canonical "source->target:role" strings, for comparisons in tests. */
export function edgeSet(vm: GraphViewModel): string[] {
  return vm.edges.map((e) => `${e.source}->${e.target}:${e.role}`).sort();
}

function escape(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

const NODE_RADIUS = 26;

/** Shorten an edge so the arrowhead stops at the node border. */
function trim(edge: EdgeView): { x1: number; y1: number; x2: number; y2: number } {
  const dx = edge.x2 - edge.x1;
  const dy = edge.y2 - edge.y1;
  const length = Math.hypot(dx, dy) || 1;
  const pad = NODE_RADIUS + 4;
  return {
    x1: edge.x1 + (dx / length) * pad,
    y1: edge.y1 + (dy / length) * pad,
    x2: edge.x2 - (dx / length) * pad,
    y2: edge.y2 - (dy / length) * pad,
  };
}

export function renderSvg(vm: GraphViewModel, width: number, height: number): string {
  const parts: string[] = [];
  parts.push(
    `<svg viewBox="0 0 ${width} ${height}" xmlns="http://www.w3.org/2000/svg" role="img">`
  );
  parts.push(
    "<defs>" +
      '<marker id="arrow-attack" viewBox="0 0 10 10" refX="9" refY="5" markerWidth="7" markerHeight="7" orient="auto-start-reverse">' +
      '<path d="M 0 0 L 10 5 L 0 10 z" class="arrow attack"/></marker>' +
      '<marker id="arrow-support" viewBox="0 0 10 10" refX="9" refY="5" markerWidth="7" markerHeight="7" orient="auto-start-reverse">' +
      '<path d="M 0 0 L 10 5 L 0 10 z" class="arrow support"/></marker>' +
      "</defs>"
  );
  for (const edge of vm.edges) {
    const t = trim(edge);
    parts.push(
      `<g class="edge ${edge.role}">` +
        `<line x1="${t.x1.toFixed(1)}" y1="${t.y1.toFixed(1)}" x2="${t.x2.toFixed(1)}" y2="${t.y2.toFixed(1)}" ` +
        `marker-end="url(#arrow-${edge.role})"><title>${escape(edge.tooltip)}</title></line></g>`
    );
  }
  for (const node of vm.nodes) {
    const classes = [
      "node",
      node.kind,
      node.accepted === true ? "accepted" : "",
      node.accepted === false ? "rejected" : "",
      node.dimmed ? "dimmed" : "",
      node.intervened ? "intervened" : "",
    ]
      .filter(Boolean)
      .join(" ");
    parts.push(
      `<g class="${classes}" data-node="${escape(node.name)}">` +
        `<circle cx="${node.x}" cy="${node.y}" r="${NODE_RADIUS}"/>` +
        `<text x="${node.x}" y="${node.y + 5}" text-anchor="middle">${escape(node.name)}=${escape(node.value)}</text>` +
        "</g>"
    );
  }
  parts.push("</svg>");
  return parts.join("");
}
