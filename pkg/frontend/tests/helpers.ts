import { readFileSync } from "node:fs";

import type { ExplanationDocument, ModelSummary } from "../src/types.js";

function load(name: string): unknown {
  const url = new URL(`./fixtures/${name}`, import.meta.url);
  return JSON.parse(readFileSync(url, "utf8"));
}

export const pizzaModel = load("model.json") as ModelSummary;
export const doc10 = load("explain_10.json") as ExplanationDocument;
export const doc11 = load("explain_11.json") as ExplanationDocument;
export const doc00 = load("explain_00.json") as ExplanationDocument;

export function verifyOutput(): string {
  const url = new URL("./fixtures/verify_11.txt", import.meta.url);
  return readFileSync(url, "utf8");
}

export function documentEdges(doc: ExplanationDocument): string[] {
  return [
    ...doc.attacks.map(([a, b]) => `${a}->${b}:attack`),
    ...doc.supports.map(([a, b]) => `${a}->${b}:support`),
  ].sort();
}
