import { describe, expect, it } from 'vitest';

import { forceLayout, mulberry32 } from '../src/layout.js';

describe('seeded force layout', () => {
  const edges = [
    { source: 0, target: 1 },
    { source: 1, target: 2 },
    { source: 0, target: 2 },
    { source: 2, target: 3 },
  ];

  it('is deterministic for a fixed seed', () => {
    expect(forceLayout(4, edges, 42)).toEqual(forceLayout(4, edges, 42));
  });

  it('different seeds give different arrangements', () => {
    expect(forceLayout(4, edges, 1)).not.toEqual(forceLayout(4, edges, 2));
  });

  it('positions land in the unit square', () => {
    for (const p of forceLayout(12, edges, 9)) {
      expect(p.x).toBeGreaterThanOrEqual(0);
      expect(p.x).toBeLessThanOrEqual(1);
      expect(p.y).toBeGreaterThanOrEqual(0);
      expect(p.y).toBeLessThanOrEqual(1);
    }
  });

  it('handles empty and single-node graphs', () => {
    expect(forceLayout(0, [], 1)).toEqual([]);
    expect(forceLayout(1, [], 1)).toEqual([{ x: 0.5, y: 0.5 }]);
  });

  it('adjacent nodes end up nearer than the graph diameter pair', () => {
    const chain = [
      { source: 0, target: 1 },
      { source: 1, target: 2 },
      { source: 2, target: 3 },
      { source: 3, target: 4 },
    ];
    const pos = forceLayout(5, chain, 3, 200);
    const dist = (a: number, b: number) => Math.hypot(pos[a].x - pos[b].x, pos[a].y - pos[b].y);
    expect(dist(0, 1)).toBeLessThan(dist(0, 4));
  });

  it('prng stream is stable', () => {
    const rand = mulberry32(123);
    const seq = [rand(), rand(), rand()];
    const rand2 = mulberry32(123);
    expect([rand2(), rand2(), rand2()]).toEqual(seq);
  });
});
