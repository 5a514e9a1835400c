// API payload shapes, mirrored from the server's /schema definitions.

export interface NetworkSummary {
  hsa: string;
  year: number;
  node_count: number;
  edge_count: number;
  state: string;
  region: string;
}

export interface Paged<T> {
  items: T[];
  total: number;
  offset: number;
  limit: number;
}

export interface GraphNodePayload {
  id: string;
  degree: number;
  degree_centrality: number | null;
  betweenness: number | null;
  frc: number | null;
  orc: number | null;
}

export interface GraphEdgePayload {
  source: string;
  target: string;
  weight: number;
  frc: number | null;
  orc: number | null;
}

export interface GraphPayload {
  hsa: string;
  year: number;
  nodes: GraphNodePayload[];
  edges: GraphEdgePayload[];
}

export type FeatureRow = Record<string, string | number | null>;

export interface DistributionGroup {
  group: string;
  region: string | null;
  count: number;
  min: number;
  q1: number;
  median: number;
  q3: number;
  max: number;
  whisker_lo: number;
  whisker_hi: number;
  bin_edges: number[];
  bin_counts: number[];
}

export interface DistributionPayload {
  metric: string;
  group: string;
  groups: DistributionGroup[];
}

export interface CorrelationEntry {
  x: string;
  y: string;
  method: 'pearson' | 'spearman';
  group: string | null;
  coefficient: number;
  n: number;
  p_value: number | null;
}

export interface CorrelationPayload {
  results: CorrelationEntry[];
}

export interface SchemaPayload {
  endpoints: Record<string, unknown>;
  columns: Record<string, 'number' | 'string'>;
  filters: string[];
  metrics: string[];
}
