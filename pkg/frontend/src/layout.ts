// Layered placement from the model's influence edges. The layout depends
// only on the model, never on the current input, so nodes stay put while
// the user explores.

import type { ModelSummary } from "./types.js";

export interface Point {
  x: number;
  y: number;
  layer: number;
}

export function computeLayout(
  model: ModelSummary,
  width: number,
  height: number
): Record<string, Point> {
  const names = model.variables.map((v) => v.name).sort();
  const incoming = new Map<string, string[]>(names.map((n) => [n, []]));
  for (const [from, to] of model.influences) {
    incoming.get(to)?.push(from);
  }
  // layer = longest influence path from any source
  const layer = new Map<string, number>();
  const depth = (name: string): number => {
    const known = layer.get(name);
    if (known !== undefined) return known;
    const parents = incoming.get(name) ?? [];
    const value = parents.length === 0 ? 0 : 1 + Math.max(...parents.map(depth));
    layer.set(name, value);
    return value;
  };
  names.forEach(depth);

  const layerCount = Math.max(...names.map((n) => layer.get(n) ?? 0)) + 1;
  const byLayer = new Map<number, string[]>();
  for (const name of names) {
    const l = layer.get(name) ?? 0;
    const bucket = byLayer.get(l) ?? [];
    bucket.push(name);
    byLayer.set(l, bucket);
  }
  const points: Record<string, Point> = {};
  for (const [l, bucket] of byLayer) {
    bucket.sort();
    const x = layerCount === 1 ? width / 2 : (width * (l + 0.5)) / layerCount;
    bucket.forEach((name, index) => {
      const y = (height * (index + 0.5)) / bucket.length;
      points[name] = { x: Math.round(x), y: Math.round(y), layer: l };
    });
  }
  return points;
}
