// Shareable view state: everything needed to reproduce the current screens
// serializes to the URL query fragment and back without loss.

import type { SchemaPayload } from './types.js';

export interface ViewState {
  /** active filters */
  state: string | null;
  region: string | null;
  year: number | null;
  /** selected network for the structure panel */
  network: { hsa: string; year: number } | null;
  /** metric shown in the distribution panel (frc | orc | feature column) */
  metric: string;
  /** scatter axes */
  x: string;
  y: string;
  /** node encodings of the network panel */
  sizeBy: 'betweenness' | 'degree';
  colorBy: 'degree' | 'betweenness';
}

export const DEFAULT_STATE: ViewState = {
  state: null,
  region: null,
  year: null,
  network: null,
  metric: 'orc',
  x: 'frc_mean',
  y: 'node_count',
  sizeBy: 'betweenness',
  colorBy: 'degree',
};

// fixed key order keeps encoded URLs stable and diffable
const KEYS = ['state', 'region', 'year', 'net', 'metric', 'x', 'y', 'size', 'color'] as const;

export function encodeViewState(view: ViewState): string {
  const params = new URLSearchParams();
  const values: Record<(typeof KEYS)[number], string | null> = {
    state: view.state,
    region: view.region,
    year: view.year === null ? null : String(view.year),
    net: view.network === null ? null : `${view.network.hsa}/${view.network.year}`,
    metric: view.metric === DEFAULT_STATE.metric ? null : view.metric,
    x: view.x === DEFAULT_STATE.x ? null : view.x,
    y: view.y === DEFAULT_STATE.y ? null : view.y,
    size: view.sizeBy === DEFAULT_STATE.sizeBy ? null : view.sizeBy,
    color: view.colorBy === DEFAULT_STATE.colorBy ? null : view.colorBy,
  };
  for (const key of KEYS) {
    const value = values[key];
    if (value !== null && value !== '') params.set(key, value);
  }
  return params.toString();
}

export function decodeViewState(encoded: string): ViewState {
  const params = new URLSearchParams(encoded.startsWith('#') ? encoded.slice(1) : encoded);
  const view: ViewState = { ...DEFAULT_STATE };
  const state = params.get('state');
  if (state) view.state = state;
  const region = params.get('region');
  if (region) view.region = region;
  const year = params.get('year');
  if (year !== null && /^-?\d+$/.test(year)) view.year = parseInt(year, 10);
  const net = params.get('net');
  if (net) {
    const slash = net.lastIndexOf('/');
    const netYear = slash >= 0 ? net.slice(slash + 1) : '';
    if (slash > 0 && /^-?\d+$/.test(netYear)) {
      view.network = { hsa: net.slice(0, slash), year: parseInt(netYear, 10) };
    }
  }
  const metric = params.get('metric');
  if (metric) view.metric = metric;
  const x = params.get('x');
  if (x) view.x = x;
  const y = params.get('y');
  if (y) view.y = y;
  const size = params.get('size');
  if (size === 'betweenness' || size === 'degree') view.sizeBy = size;
  const color = params.get('color');
  if (color === 'degree' || color === 'betweenness') view.colorBy = color;
  return view;
}

/**
 * Columns referenced by the view must exist in what /schema reports; a stale
 * shared URL must surface as a visible error, never a blank screen.
 */
export function validateViewState(view: ViewState, schema: SchemaPayload): string[] {
  const errors: string[] = [];
  const columns = schema.columns;
  if (!(view.metric in columns) && !schema.metrics.includes(view.metric)) {
    errors.push(`unknown metric "${view.metric}"`);
  }
  for (const [label, column] of [
    ['x', view.x],
    ['y', view.y],
  ] as const) {
    if (!(column in columns)) {
      errors.push(`unknown ${label} column "${column}"`);
    } else if (columns[column] !== 'number') {
      errors.push(`${label} column "${column}" is not numeric`);
    }
  }
  return errors;
}

/** Scatter-point drill-down: open the clicked HSA's structure view. */
export function drillDownToNetwork(view: ViewState, hsa: string, year: number): ViewState {
  return { ...view, network: { hsa, year } };
}

export function setFilter(
  view: ViewState,
  name: 'state' | 'region' | 'year',
  value: string | null,
): ViewState {
  const next = { ...view };
  if (name === 'year') {
    next.year = value === null || value === '' ? null : parseInt(value, 10);
  } else {
    next[name] = value === '' ? null : value;
  }
  // a changed filter invalidates the drilled-in selection
  next.network = null;
  return next;
}
