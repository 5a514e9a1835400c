import { describe, expect, it } from 'vitest';

import { buildDistributionView } from '../src/views/distribution.js';
import { distributionsFixture } from './fixtures.js';

describe('distribution view against fixture API payloads', () => {
  it('one box per state with payload quartiles', () => {
    const payload = distributionsFixture();
    const model = buildDistributionView(payload);
    expect(model.boxes).toHaveLength(payload.groups.length);
    for (const box of model.boxes) {
      const group = payload.groups.find((g) => g.group === box.group)!;
      expect(box.median).toBe(group.median);
      expect(box.q1).toBe(group.q1);
      expect(box.q3).toBe(group.q3);
      expect(box.count).toBe(group.count);
    }
  });

  it('colors boxes consistently by region', () => {
    const model = buildDistributionView(distributionsFixture());
    const byRegion = new Map<string, Set<string>>();
    for (const box of model.boxes) {
      if (!byRegion.has(box.region)) byRegion.set(box.region, new Set());
      byRegion.get(box.region)!.add(box.color);
    }
    for (const colors of byRegion.values()) {
      expect(colors.size).toBe(1);
    }
    expect(new Set(model.boxes.map((b) => b.color)).size).toBe(byRegion.size);
  });

  it('value range spans every group', () => {
    const payload = distributionsFixture();
    const model = buildDistributionView(payload);
    for (const g of payload.groups) {
      expect(model.valueMin).toBeLessThanOrEqual(g.min);
      expect(model.valueMax).toBeGreaterThanOrEqual(g.max);
    }
  });
});
