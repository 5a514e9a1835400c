// Force-directed network view model.
//
// Encodings follow the server's visual contract: node size from betweenness,
// node color from degree, edge width from shared-patient weight, edge color
// from Ollivier curvature on the zero-centered diverging scale. All displayed
// numbers are taken verbatim from the API payload; nothing is recomputed.

import { curvatureColor, curvatureSide, rgbCss, sequentialColor } from '../color.js';
import { forceLayout } from '../layout.js';
import type { GraphPayload } from '../types.js';
import type { ViewState } from '../state.js';

export interface NetworkNodeModel {
  id: string;
  x: number;
  y: number;
  radius: number;
  color: string;
  tooltip: string;
  payload: GraphPayload['nodes'][number];
}

export interface NetworkEdgeModel {
  source: string;
  target: string;
  x1: number;
  y1: number;
  x2: number;
  y2: number;
  width: number;
  color: string;
  side: 'cool' | 'neutral' | 'warm';
  tooltip: string;
  payload: GraphPayload['edges'][number];
}

export interface NetworkRenderModel {
  empty: boolean;
  message: string | null;
  nodes: NetworkNodeModel[];
  edges: NetworkEdgeModel[];
}

const MIN_RADIUS = 4;
const MAX_RADIUS = 16;
const MIN_WIDTH = 0.75;
const MAX_WIDTH = 5;

function fmt(value: number | null): string {
  return value === null ? 'n/a' : String(value);
}

export function buildNetworkView(
  payload: GraphPayload,
  encodings: Pick<ViewState, 'sizeBy' | 'colorBy'>,
  seed = 7,
): NetworkRenderModel {
  if (payload.nodes.length === 0) {
    return { empty: true, message: `network ${payload.hsa}/${payload.year} has no providers`, nodes: [], edges: [] };
  }
  const index = new Map<string, number>();
  payload.nodes.forEach((node, i) => index.set(node.id, i));
  const layoutEdges = payload.edges.map((e) => ({
    source: index.get(e.source) ?? 0,
    target: index.get(e.target) ?? 0,
  }));
  const pos = forceLayout(payload.nodes.length, layoutEdges, seed);

  const sizeValues = payload.nodes.map((n) => (encodings.sizeBy === 'degree' ? n.degree : (n.betweenness ?? 0)));
  const colorValues = payload.nodes.map((n) => (encodings.colorBy === 'betweenness' ? (n.betweenness ?? 0) : n.degree));
  const sizeMax = Math.max(...sizeValues, 0);
  const colorMax = Math.max(...colorValues, 0);

  const nodes: NetworkNodeModel[] = payload.nodes.map((node, i) => ({
    id: node.id,
    x: pos[i].x,
    y: pos[i].y,
    radius: MIN_RADIUS + (MAX_RADIUS - MIN_RADIUS) * (sizeMax > 0 ? sizeValues[i] / sizeMax : 0),
    color: rgbCss(sequentialColor(colorMax > 0 ? colorValues[i] / colorMax : 0)),
    tooltip:
      `${node.id}\ndegree ${node.degree}\n` +
      `degree centrality ${fmt(node.degree_centrality)}\n` +
      `betweenness ${fmt(node.betweenness)}\n` +
      `frc ${fmt(node.frc)} / orc ${fmt(node.orc)}`,
    payload: node,
  }));

  const weightMax = payload.edges.reduce((acc, e) => Math.max(acc, e.weight), 0);
  const edges: NetworkEdgeModel[] = payload.edges.map((edge) => {
    const a = pos[index.get(edge.source) ?? 0];
    const b = pos[index.get(edge.target) ?? 0];
    const orc = edge.orc;
    return {
      source: edge.source,
      target: edge.target,
      x1: a.x,
      y1: a.y,
      x2: b.x,
      y2: b.y,
      width: MIN_WIDTH + (MAX_WIDTH - MIN_WIDTH) * (weightMax > 0 ? edge.weight / weightMax : 0),
      color: orc === null ? 'rgb(160, 160, 160)' : rgbCss(curvatureColor(orc)),
      side: orc === null ? 'neutral' : curvatureSide(orc),
      tooltip:
        `${edge.source} — ${edge.target}\nshared patients ${edge.weight}\n` +
        `frc ${fmt(edge.frc)} / orc ${fmt(edge.orc)}`,
      payload: edge,
    };
  });
  return { empty: false, message: null, nodes, edges };
}
