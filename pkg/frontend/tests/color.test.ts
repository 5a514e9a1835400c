import { describe, expect, it } from 'vitest';

import { COOL, NEUTRAL, WARM, curvatureColor, curvatureSide } from '../src/color.js';

describe('diverging curvature scale', () => {
  it('maps zero exactly to the neutral midpoint', () => {
    expect(curvatureColor(0)).toEqual(NEUTRAL);
  });

  it('hits the endpoints at the bounds', () => {
    expect(curvatureColor(-2)).toEqual(COOL);
    expect(curvatureColor(1)).toEqual(WARM);
  });

  it('classifies sides by sign', () => {
    expect(curvatureSide(-2 / 3)).toBe('cool');
    expect(curvatureSide(0.5)).toBe('warm');
    expect(curvatureSide(0)).toBe('neutral');
  });

  it('negative values sit on the cool side of neutral (bluer)', () => {
    const color = curvatureColor(-0.5);
    expect(color[2]).toBeGreaterThan(color[0]); // more blue than red
  });

  it('positive values sit on the warm side of neutral (redder)', () => {
    const color = curvatureColor(0.5);
    expect(color[0]).toBeGreaterThan(color[2]); // more red than blue
  });
});
