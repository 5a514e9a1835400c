// Seeded force-directed layout. No randomness outside the provided seed and a
// fixed iteration count, so a given graph always lands in the same positions
// (stable screenshots, stable tests).

export interface LayoutEdge {
  source: number;
  target: number;
}

export interface Point {
  x: number;
  y: number;
}

/** Small deterministic PRNG (mulberry32). */
export function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) >>> 0;
    let t = a;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

export function forceLayout(nodeCount: number, edges: LayoutEdge[], seed = 7, iterations = 120): Point[] {
  if (nodeCount === 0) return [];
  const rand = mulberry32(seed);
  const px = new Array<number>(nodeCount);
  const py = new Array<number>(nodeCount);
  for (let i = 0; i < nodeCount; i++) {
    px[i] = rand() * 2 - 1;
    py[i] = rand() * 2 - 1;
  }
  if (nodeCount === 1) return [{ x: 0.5, y: 0.5 }];
  const k = 1 / Math.sqrt(nodeCount);
  let temperature = 0.12;
  const dx = new Array<number>(nodeCount);
  const dy = new Array<number>(nodeCount);
  for (let iter = 0; iter < iterations; iter++) {
    dx.fill(0);
    dy.fill(0);
    for (let i = 0; i < nodeCount; i++) {
      for (let j = i + 1; j < nodeCount; j++) {
        let vx = px[i] - px[j];
        let vy = py[i] - py[j];
        let dist2 = vx * vx + vy * vy;
        if (dist2 < 1e-12) {
          // split coincident nodes deterministically
          vx = 1e-4 * (i - j);
          vy = 1e-4;
          dist2 = vx * vx + vy * vy;
        }
        const repel = (k * k) / dist2;
        dx[i] += vx * repel;
        dy[i] += vy * repel;
        dx[j] -= vx * repel;
        dy[j] -= vy * repel;
      }
    }
    for (const { source, target } of edges) {
      const vx = px[source] - px[target];
      const vy = py[source] - py[target];
      const dist = Math.max(Math.sqrt(vx * vx + vy * vy), 1e-6);
      const pull = dist / k;
      dx[source] -= (vx / dist) * pull * dist;
      dy[source] -= (vy / dist) * pull * dist;
      dx[target] += (vx / dist) * pull * dist;
      dy[target] += (vy / dist) * pull * dist;
    }
    for (let i = 0; i < nodeCount; i++) {
      const len = Math.max(Math.sqrt(dx[i] * dx[i] + dy[i] * dy[i]), 1e-9);
      const step = Math.min(len, temperature);
      px[i] += (dx[i] / len) * step;
      py[i] += (dy[i] / len) * step;
    }
    temperature *= 0.96;
  }
  // normalize into the unit square with a small margin
  let minX = Infinity;
  let maxX = -Infinity;
  let minY = Infinity;
  let maxY = -Infinity;
  for (let i = 0; i < nodeCount; i++) {
    minX = Math.min(minX, px[i]);
    maxX = Math.max(maxX, px[i]);
    minY = Math.min(minY, py[i]);
    maxY = Math.max(maxY, py[i]);
  }
  const spanX = maxX - minX || 1;
  const spanY = maxY - minY || 1;
  const out: Point[] = [];
  for (let i = 0; i < nodeCount; i++) {
    out.push({
      x: 0.05 + 0.9 * ((px[i] - minX) / spanX),
      y: 0.05 + 0.9 * ((py[i] - minY) / spanY),
    });
  }
  return out;
}
