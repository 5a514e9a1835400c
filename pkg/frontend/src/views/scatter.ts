// Correlation scatter: one point per network, sized by provider count,
// colored by group, with the per-group coefficients from the API shown as
// badges. Clicking a point drills down into that network's structure view.

import { categoricalColor, rgbCss } from '../color.js';
import type { CorrelationEntry, FeatureRow } from '../types.js';

export interface ScatterPointModel {
  hsa: string;
  year: number;
  x: number;
  y: number;
  /** normalized [0,1] plot coordinates */
  px: number;
  py: number;
  radius: number;
  color: string;
  group: string;
  tooltip: string;
}

export interface ScatterRenderModel {
  x: string;
  y: string;
  points: ScatterPointModel[];
  badges: string[];
  groupColors: Record<string, string>;
}

const MIN_RADIUS = 3;
const MAX_RADIUS = 14;

function numeric(row: FeatureRow, column: string): number | null {
  const value = row[column];
  return typeof value === 'number' && isFinite(value) ? value : null;
}

export function buildScatterView(
  rows: FeatureRow[],
  x: string,
  y: string,
  groupColumn: string | null,
  results: CorrelationEntry[],
): ScatterRenderModel {
  const usable = rows.filter((r) => numeric(r, x) !== null && numeric(r, y) !== null);
  const groups = [...new Set(usable.map((r) => String(r[groupColumn ?? ''] ?? 'all')))].sort();
  const groupColors: Record<string, string> = {};
  groups.forEach((g, i) => {
    groupColors[g] = rgbCss(categoricalColor(i));
  });
  let xMin = Infinity;
  let xMax = -Infinity;
  let yMin = Infinity;
  let yMax = -Infinity;
  let sizeMax = 1;
  for (const row of usable) {
    const xv = numeric(row, x)!;
    const yv = numeric(row, y)!;
    xMin = Math.min(xMin, xv);
    xMax = Math.max(xMax, xv);
    yMin = Math.min(yMin, yv);
    yMax = Math.max(yMax, yv);
    sizeMax = Math.max(sizeMax, numeric(row, 'node_count') ?? 1);
  }
  const xSpan = xMax - xMin || 1;
  const ySpan = yMax - yMin || 1;
  const points: ScatterPointModel[] = usable.map((row) => {
    const xv = numeric(row, x)!;
    const yv = numeric(row, y)!;
    const size = numeric(row, 'node_count') ?? 1;
    const group = String(row[groupColumn ?? ''] ?? 'all');
    return {
      hsa: String(row.hsa),
      year: Number(row.year),
      x: xv,
      y: yv,
      px: (xv - xMin) / xSpan,
      py: (yv - yMin) / ySpan,
      radius: MIN_RADIUS + (MAX_RADIUS - MIN_RADIUS) * (size / sizeMax),
      color: groupColors[group],
      group,
      tooltip: `${row.hsa}/${row.year}\n${x} = ${xv}\n${y} = ${yv}\nproviders ${size}`,
    };
  });
  const badges = results.map((r) => {
    const label = r.group ?? 'all';
    const p = r.p_value === null ? '' : `, p=${r.p_value}`;
    return `${label}: r=${r.coefficient.toFixed(3)} (n=${r.n}${p})`;
  });
  return { x, y, points, badges, groupColors };
}
