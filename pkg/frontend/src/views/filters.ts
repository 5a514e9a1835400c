// Filter panel model: the option lists come from the network index so every
// choice is guaranteed to match at least one network.

import type { NetworkSummary } from '../types.js';
import type { ViewState } from '../state.js';

export interface FilterOptions {
  states: string[];
  regions: string[];
  years: number[];
}

export function filterOptions(networks: NetworkSummary[]): FilterOptions {
  return {
    states: [...new Set(networks.map((n) => n.state))].sort(),
    regions: [...new Set(networks.map((n) => n.region))].sort(),
    years: [...new Set(networks.map((n) => n.year))].sort((a, b) => a - b),
  };
}

/** Query parameters shared by every data request for the current view. */
export function filterParams(view: ViewState): Record<string, string> {
  const params: Record<string, string> = {};
  if (view.state !== null) params.state = view.state;
  if (view.region !== null) params.region = view.region;
  if (view.year !== null) params.year = String(view.year);
  return params;
}
