// Box panel per group (usually states) colored by region, built from the
// server's precomputed distribution summaries.

import { categoricalColor, rgbCss } from '../color.js';
import type { DistributionPayload } from '../types.js';

export interface BoxModel {
  group: string;
  region: string;
  color: string;
  /** x slot in [0, 1), one lane per group */
  lane: number;
  /** value-space coordinates straight from the payload */
  q1: number;
  median: number;
  q3: number;
  whiskerLo: number;
  whiskerHi: number;
  count: number;
  tooltip: string;
}

export interface DistributionRenderModel {
  metric: string;
  groupBy: string;
  valueMin: number;
  valueMax: number;
  boxes: BoxModel[];
  regionColors: Record<string, string>;
}

export function buildDistributionView(payload: DistributionPayload): DistributionRenderModel {
  const regions = [...new Set(payload.groups.map((g) => g.region ?? 'unassigned'))].sort();
  const regionColors: Record<string, string> = {};
  regions.forEach((region, i) => {
    regionColors[region] = rgbCss(categoricalColor(i));
  });
  let valueMin = Infinity;
  let valueMax = -Infinity;
  for (const g of payload.groups) {
    valueMin = Math.min(valueMin, g.min);
    valueMax = Math.max(valueMax, g.max);
  }
  if (!isFinite(valueMin)) {
    valueMin = 0;
    valueMax = 1;
  }
  const boxes: BoxModel[] = payload.groups.map((g, i) => {
    const region = g.region ?? 'unassigned';
    return {
      group: g.group,
      region,
      color: regionColors[region],
      lane: payload.groups.length ? i / payload.groups.length : 0,
      q1: g.q1,
      median: g.median,
      q3: g.q3,
      whiskerLo: g.whisker_lo,
      whiskerHi: g.whisker_hi,
      count: g.count,
      tooltip: `${g.group} (${region})\nn=${g.count}\nmedian ${g.median}\nIQR [${g.q1}, ${g.q3}]`,
    };
  });
  return {
    metric: payload.metric,
    groupBy: payload.group,
    valueMin,
    valueMax,
    boxes,
    regionColors,
  };
}
