// Thin DOM layer: turns view models into SVG. All numbers shown in tooltips
// and badges come from the models, which carry API payload values verbatim.

import type { DistributionRenderModel } from './views/distribution.js';
import type { NetworkRenderModel } from './views/network.js';
import type { ScatterRenderModel, ScatterPointModel } from './views/scatter.js';

const SVG_NS = 'http://www.w3.org/2000/svg';

function svgElement<K extends keyof SVGElementTagNameMap>(
  tag: K,
  attrs: Record<string, string | number>,
): SVGElementTagNameMap[K] {
  const el = document.createElementNS(SVG_NS, tag);
  for (const [key, value] of Object.entries(attrs)) {
    el.setAttribute(key, String(value));
  }
  return el;
}

function withTooltip<T extends SVGElement>(el: T, text: string): T {
  const title = document.createElementNS(SVG_NS, 'title');
  title.textContent = text;
  el.appendChild(title);
  return el;
}

export function renderNetwork(model: NetworkRenderModel, container: HTMLElement, size = 640): void {
  container.replaceChildren();
  if (model.empty) {
    const msg = document.createElement('p');
    msg.className = 'empty-state';
    msg.textContent = model.message ?? 'nothing to show';
    container.appendChild(msg);
    return;
  }
  const svg = svgElement('svg', { viewBox: `0 0 ${size} ${size}`, width: size, height: size });
  for (const edge of model.edges) {
    svg.appendChild(
      withTooltip(
        svgElement('line', {
          x1: edge.x1 * size,
          y1: edge.y1 * size,
          x2: edge.x2 * size,
          y2: edge.y2 * size,
          stroke: edge.color,
          'stroke-width': edge.width,
          'data-side': edge.side,
        }),
        edge.tooltip,
      ),
    );
  }
  for (const node of model.nodes) {
    svg.appendChild(
      withTooltip(
        svgElement('circle', {
          cx: node.x * size,
          cy: node.y * size,
          r: node.radius,
          fill: node.color,
          stroke: 'white',
          'stroke-width': 1,
          'data-id': node.id,
        }),
        node.tooltip,
      ),
    );
  }
  container.appendChild(svg);
}

export function renderDistribution(model: DistributionRenderModel, container: HTMLElement, width = 760, height = 360): void {
  container.replaceChildren();
  if (model.boxes.length === 0) {
    const msg = document.createElement('p');
    msg.className = 'empty-state';
    msg.textContent = 'no distribution data for the current filters';
    container.appendChild(msg);
    return;
  }
  const svg = svgElement('svg', { viewBox: `0 0 ${width} ${height}`, width, height });
  const span = model.valueMax - model.valueMin || 1;
  const toY = (v: number) => height - 20 - (height - 40) * ((v - model.valueMin) / span);
  const laneWidth = (width - 40) / model.boxes.length;
  model.boxes.forEach((box, i) => {
    const cx = 30 + laneWidth * (i + 0.5);
    const boxWidth = Math.min(26, laneWidth * 0.6);
    const group = svgElement('g', { 'data-group': box.group });
    group.appendChild(
      svgElement('line', { x1: cx, y1: toY(box.whiskerLo), x2: cx, y2: toY(box.whiskerHi), stroke: '#555', 'stroke-width': 1 }),
    );
    group.appendChild(
      withTooltip(
        svgElement('rect', {
          x: cx - boxWidth / 2,
          y: toY(box.q3),
          width: boxWidth,
          height: Math.max(1, toY(box.q1) - toY(box.q3)),
          fill: box.color,
          'fill-opacity': 0.8,
          stroke: '#333',
        }),
        box.tooltip,
      ),
    );
    group.appendChild(
      svgElement('line', {
        x1: cx - boxWidth / 2,
        y1: toY(box.median),
        x2: cx + boxWidth / 2,
        y2: toY(box.median),
        stroke: '#111',
        'stroke-width': 2,
      }),
    );
    const label = svgElement('text', { x: cx, y: height - 4, 'text-anchor': 'middle', 'font-size': 10 });
    label.textContent = box.group;
    group.appendChild(label);
    svg.appendChild(group);
  });
  if (model.valueMin < 0 && model.valueMax > 0) {
    svg.appendChild(
      svgElement('line', { x1: 26, y1: toY(0), x2: width - 10, y2: toY(0), stroke: '#999', 'stroke-dasharray': '4 3' }),
    );
  }
  container.appendChild(svg);
}

export function renderScatter(
  model: ScatterRenderModel,
  container: HTMLElement,
  onPointClick: (point: ScatterPointModel) => void,
  width = 760,
  height = 420,
): void {
  container.replaceChildren();
  if (model.points.length === 0) {
    const msg = document.createElement('p');
    msg.className = 'empty-state';
    msg.textContent = 'no complete (x, y) pairs for the current filters';
    container.appendChild(msg);
    return;
  }
  const svg = svgElement('svg', { viewBox: `0 0 ${width} ${height}`, width, height });
  for (const point of model.points) {
    const circle = withTooltip(
      svgElement('circle', {
        cx: 30 + point.px * (width - 60),
        cy: height - 30 - point.py * (height - 60),
        r: point.radius,
        fill: point.color,
        'fill-opacity': 0.75,
        stroke: 'white',
        'stroke-width': 0.5,
        cursor: 'pointer',
        'data-hsa': point.hsa,
        'data-year': point.year,
      }),
      point.tooltip,
    );
    circle.addEventListener('click', () => onPointClick(point));
    svg.appendChild(circle);
  }
  container.appendChild(svg);
  const badgeBox = document.createElement('div');
  badgeBox.className = 'badges';
  for (const badge of model.badges) {
    const span = document.createElement('span');
    span.className = 'badge';
    span.textContent = badge;
    badgeBox.appendChild(span);
  }
  container.appendChild(badgeBox);
}
