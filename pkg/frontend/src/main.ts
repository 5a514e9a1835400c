// App wiring: URL hash <-> ViewState, filter panel, and the three data panels.
// Every panel re-queries the API when the state changes; the URL always holds
// the current state so any view is shareable.

import { ApiClient, ApiError } from './api.js';
import { renderDistribution, renderNetwork, renderScatter } from './render.js';
import {
  DEFAULT_STATE,
  ViewState,
  decodeViewState,
  drillDownToNetwork,
  encodeViewState,
  setFilter,
  validateViewState,
} from './state.js';
import type { NetworkSummary, SchemaPayload } from './types.js';
import { buildDistributionView } from './views/distribution.js';
import { buildNetworkView } from './views/network.js';
import { buildScatterView } from './views/scatter.js';
import { filterOptions, filterParams } from './views/filters.js';

const api = new ApiClient('');

let view: ViewState = { ...DEFAULT_STATE };
let schema: SchemaPayload | null = null;
let applyingHash = false;

function el<T extends HTMLElement>(id: string): T {
  const found = document.getElementById(id);
  if (!found) throw new Error(`missing #${id}`);
  return found as T;
}

function showError(message: string | null): void {
  const banner = el<HTMLDivElement>('error-banner');
  banner.textContent = message ?? '';
  banner.style.display = message ? 'block' : 'none';
}

function pushState(next: ViewState): void {
  view = next;
  applyingHash = true;
  window.location.hash = encodeViewState(view);
  applyingHash = false;
  void refresh();
}

function bindFilter(id: string, name: 'state' | 'region' | 'year'): void {
  el<HTMLSelectElement>(id).addEventListener('change', (ev) => {
    const value = (ev.target as HTMLSelectElement).value || null;
    pushState(setFilter(view, name, value));
  });
}

function fillSelect(id: string, values: Array<string | number>, current: string | number | null): void {
  const select = el<HTMLSelectElement>(id);
  select.replaceChildren();
  const blank = document.createElement('option');
  blank.value = '';
  blank.textContent = '(all)';
  select.appendChild(blank);
  for (const value of values) {
    const option = document.createElement('option');
    option.value = String(value);
    option.textContent = String(value);
    select.appendChild(option);
  }
  select.value = current === null ? '' : String(current);
}

async function refreshNetworkPanel(): Promise<void> {
  const container = el<HTMLDivElement>('network-panel');
  if (!view.network) {
    container.replaceChildren();
    const hint = document.createElement('p');
    hint.className = 'empty-state';
    hint.textContent = 'select a network: click a scatter point or a row in the list';
    container.appendChild(hint);
    return;
  }
  const payload = await api.graph(view.network.hsa, view.network.year);
  el<HTMLHeadingElement>('network-title').textContent = `network ${payload.hsa} / ${payload.year}`;
  renderNetwork(buildNetworkView(payload, view), container);
}

async function refreshDistributionPanel(): Promise<void> {
  const payload = await api.distributions(view.metric, 'state', {
    ...(view.year !== null ? { year: String(view.year) } : {}),
  });
  renderDistribution(buildDistributionView(payload), el<HTMLDivElement>('distribution-panel'));
}

async function refreshScatterPanel(): Promise<void> {
  const params = filterParams(view);
  const [featuresPage, correlations] = await Promise.all([
    api.features(params),
    api.correlate(view.x, view.y, { method: 'pearson', group: 'region' }).catch((err) => {
      if (err instanceof ApiError) return { results: [] };
      throw err;
    }),
  ]);
  const model = buildScatterView(featuresPage.items, view.x, view.y, 'region', correlations.results);
  renderScatter(model, el<HTMLDivElement>('scatter-panel'), (point) => {
    pushState(drillDownToNetwork(view, point.hsa, point.year));
  });
}

async function refreshNetworkList(networks: NetworkSummary[]): Promise<void> {
  const list = el<HTMLUListElement>('network-list');
  list.replaceChildren();
  for (const net of networks) {
    const item = document.createElement('li');
    const link = document.createElement('a');
    link.href = '#';
    link.textContent = `${net.hsa}/${net.year} — ${net.node_count} providers, ${net.edge_count} links (${net.state}, ${net.region})`;
    link.addEventListener('click', (ev) => {
      ev.preventDefault();
      pushState(drillDownToNetwork(view, net.hsa, net.year));
    });
    item.appendChild(link);
    list.appendChild(item);
  }
}

async function refresh(): Promise<void> {
  if (!schema) return;
  const problems = validateViewState(view, schema);
  if (problems.length > 0) {
    showError(`cannot render this view: ${problems.join('; ')}`);
    return;
  }
  showError(null);
  try {
    const networks = await api.networks(filterParams(view));
    await Promise.all([refreshNetworkList(networks.items), refreshNetworkPanel(), refreshDistributionPanel(), refreshScatterPanel()]);
  } catch (err) {
    if (err instanceof DOMException && err.name === 'AbortError') return; // superseded by a newer request
    showError(err instanceof ApiError ? err.message : `request failed: ${String(err)}`);
  }
}

async function start(): Promise<void> {
  view = decodeViewState(window.location.hash);
  try {
    schema = await api.schema();
  } catch (err) {
    showError(`API unreachable: ${String(err)}`);
    return;
  }
  const allNetworks = await api.networks();
  const options = filterOptions(allNetworks.items);
  fillSelect('filter-state', options.states, view.state);
  fillSelect('filter-region', options.regions, view.region);
  fillSelect('filter-year', options.years, view.year);
  bindFilter('filter-state', 'state');
  bindFilter('filter-region', 'region');
  bindFilter('filter-year', 'year');
  const numericColumns = Object.entries(schema.columns)
    .filter(([, kind]) => kind === 'number')
    .map(([name]) => name)
    .sort();
  for (const [selectId, key] of [
    ['scatter-x', 'x'],
    ['scatter-y', 'y'],
  ] as const) {
    const select = el<HTMLSelectElement>(selectId);
    select.replaceChildren();
    for (const column of numericColumns) {
      const option = document.createElement('option');
      option.value = column;
      option.textContent = column;
      select.appendChild(option);
    }
    select.value = view[key];
    select.addEventListener('change', () => pushState({ ...view, [key]: select.value }));
  }
  const metricSelect = el<HTMLSelectElement>('metric-select');
  metricSelect.replaceChildren();
  for (const metric of [...schema.metrics, ...numericColumns]) {
    const option = document.createElement('option');
    option.value = metric;
    option.textContent = metric;
    metricSelect.appendChild(option);
  }
  metricSelect.value = view.metric;
  metricSelect.addEventListener('change', () => pushState({ ...view, metric: metricSelect.value }));

  window.addEventListener('hashchange', () => {
    if (applyingHash) return;
    view = decodeViewState(window.location.hash);
    void refresh();
  });
  await refresh();
}

void start();
