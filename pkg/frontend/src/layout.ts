// Deterministic force-directed layout. A seeded PRNG places nodes, then a
// fixed number of spring/repulsion iterations relax the positions, so the
// same document always renders the same picture (stable for tests and
// screenshots).

import type { Point, ViewEdge, ViewNode } from "./types.js";

function mulberry32(seed: number): () => number {
  let state = seed >>> 0;
  return () => {
    state = (state + 0x6d2b79f5) >>> 0;
    let t = state;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

export interface LayoutOptions {
  width: number;
  height: number;
  seed?: number;
  iterations?: number;
}

export function computeLayout(
  nodes: ViewNode[],
  edges: ViewEdge[],
  options: LayoutOptions,
): Map<string, Point> {
  const { width, height } = options;
  const seed = options.seed ?? 42;
  const iterations = options.iterations ?? 200;
  const rand = mulberry32(seed);

  const index = new Map<string, number>();
  nodes.forEach((node, i) => index.set(node.id, i));
  const xs = nodes.map(() => rand() * width);
  const ys = nodes.map(() => rand() * height);

  const springLength = Math.min(width, height) / Math.max(3, Math.sqrt(nodes.length));
  const repulsion = springLength * springLength;

  for (let step = 0; step < iterations; step++) {
    const cooling = 1 - step / iterations;
    const fx = nodes.map(() => 0);
    const fy = nodes.map(() => 0);

    for (let i = 0; i < nodes.length; i++) {
      for (let j = i + 1; j < nodes.length; j++) {
        let dx = xs[i] - xs[j];
        let dy = ys[i] - ys[j];
        let d2 = dx * dx + dy * dy;
        if (d2 < 0.01) {
          dx = 0.1;
          dy = 0.1;
          d2 = 0.02;
        }
        const force = repulsion / d2;
        const d = Math.sqrt(d2);
        fx[i] += (dx / d) * force;
        fy[i] += (dy / d) * force;
        fx[j] -= (dx / d) * force;
        fy[j] -= (dy / d) * force;
      }
    }
    for (const edge of edges) {
      const a = index.get(edge.from);
      const b = index.get(edge.to);
      if (a === undefined || b === undefined) continue;
      const dx = xs[b] - xs[a];
      const dy = ys[b] - ys[a];
      const d = Math.max(0.1, Math.sqrt(dx * dx + dy * dy));
      const force = (d - springLength) * 0.08;
      fx[a] += (dx / d) * force;
      fy[a] += (dy / d) * force;
      fx[b] -= (dx / d) * force;
      fy[b] -= (dy / d) * force;
    }

    const maxStep = springLength * 0.5 * cooling;
    for (let i = 0; i < nodes.length; i++) {
      const len = Math.sqrt(fx[i] * fx[i] + fy[i] * fy[i]);
      const scale = len > maxStep ? maxStep / len : 1;
      xs[i] += fx[i] * scale;
      ys[i] += fy[i] * scale;
      const margin = 40;
      xs[i] = Math.min(width - margin, Math.max(margin, xs[i]));
      ys[i] = Math.min(height - margin, Math.max(margin, ys[i]));
    }
  }

  const out = new Map<string, Point>();
  nodes.forEach((node, i) => out.set(node.id, { x: xs[i], y: ys[i] }));
  return out;
}
