// Property report panel. The lines must match the service's verify output
// character for character, so the panel is a faithful mirror of the CLI.

import type { PropertyEntry, PropertyReport } from "./types.js";

export function propertyLine(entry: PropertyEntry): string {
  if (!entry.applicable) return `${entry.name}: not applicable`;
  if (entry.passed) return `${entry.name}: pass`;
  return `${entry.name}: fail (${entry.witness})`;
}

export function propertyLines(report: PropertyReport): string[] {
  return report.properties.map(propertyLine);
}

function escape(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

export function renderPanel(report: PropertyReport | undefined): string {
  if (!report) return '<p class="muted">no report</p>';
  const header = report.all_passed
    ? '<p class="report-ok">all applicable properties hold</p>'
    : '<p class="report-bad">property violations found</p>';
  const blocks = report.properties
    .map((entry) => {
      const state = !entry.applicable ? "na" : entry.passed ? "ok" : "bad";
      const detail = entry.witness
        ? `<p class="witness">${escape(entry.witness)}</p>`
        : '<p class="muted">holds for every probed alternative</p>';
      return (
        `<details class="prop ${state}"><summary>${escape(propertyLine(entry))}</summary>` +
        detail +
        "</details>"
      );
    })
    .join("");
  return header + blocks;
}
