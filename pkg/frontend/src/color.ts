// Color scales for the explorer.
//
// Edge curvature uses a diverging scale anchored at zero: negative values
// read cool (blue-gray), positive warm (orange), and exactly zero maps to the
// neutral midpoint.

export type Rgb = [number, number, number];

export const COOL: Rgb = [91, 125, 177]; // blue-gray end (-2)
export const NEUTRAL: Rgb = [240, 238, 232]; // midpoint (0)
export const WARM: Rgb = [224, 134, 26]; // orange end (+1)

export const CURVATURE_MIN = -2;
export const CURVATURE_MAX = 1;

function mix(a: Rgb, b: Rgb, t: number): Rgb {
  const clamped = Math.min(1, Math.max(0, t));
  return [
    Math.round(a[0] + (b[0] - a[0]) * clamped),
    Math.round(a[1] + (b[1] - a[1]) * clamped),
    Math.round(a[2] + (b[2] - a[2]) * clamped),
  ];
}

export function rgbCss([r, g, b]: Rgb): string {
  return `rgb(${r}, ${g}, ${b})`;
}

/** Side of the diverging scale a value falls on. */
export function curvatureSide(value: number): 'cool' | 'neutral' | 'warm' {
  if (value < 0) return 'cool';
  if (value > 0) return 'warm';
  return 'neutral';
}

/** Diverging color for a curvature value; 0 is exactly the neutral midpoint. */
export function curvatureColor(value: number): Rgb {
  if (value === 0) return NEUTRAL;
  if (value < 0) {
    return mix(COOL, NEUTRAL, 1 - value / CURVATURE_MIN);
  }
  return mix(NEUTRAL, WARM, value / CURVATURE_MAX);
}

/** Sequential ramp for node color (degree): light to saturated. */
export function sequentialColor(t: number): Rgb {
  return mix([225, 238, 210], [38, 110, 64], t);
}

/** Categorical palette for regions/groups, stable by sorted key order. */
const CATEGORICAL: Rgb[] = [
  [31, 119, 180],
  [255, 127, 14],
  [44, 160, 44],
  [214, 39, 40],
  [148, 103, 189],
  [140, 86, 75],
  [227, 119, 194],
  [127, 127, 127],
  [188, 189, 34],
  [23, 190, 207],
];

export function categoricalColor(index: number): Rgb {
  return CATEGORICAL[((index % CATEGORICAL.length) + CATEGORICAL.length) % CATEGORICAL.length];
}
