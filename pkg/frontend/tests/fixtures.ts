// Loader for payloads captured from the fixture API
// (regenerate with: python3 scripts/gen_ui_fixtures.py from the repo root).

import { readFileSync } from 'node:fs';
import { dirname, join } from 'node:path';
import { fileURLToPath } from 'node:url';

import type {
  CorrelationPayload,
  DistributionPayload,
  FeatureRow,
  GraphPayload,
  NetworkSummary,
  Paged,
  SchemaPayload,
} from '../src/types.js';

const here = dirname(fileURLToPath(import.meta.url));

function load<T>(name: string): T {
  return JSON.parse(readFileSync(join(here, 'fixtures', name), 'utf-8')) as T;
}

export const schemaFixture = (): SchemaPayload => load('schema.json');
export const networksFixture = (): Paged<NetworkSummary> => load('networks.json');
export const k3GraphFixture = (): GraphPayload => load('graph_k3.json');
export const dumbbellGraphFixture = (): GraphPayload => load('graph_dumb.json');
export const featuresFixture = (): Paged<FeatureRow> => load('features.json');
export const distributionsFixture = (): DistributionPayload => load('distributions.json');
export const correlateFixture = (): CorrelationPayload => load('correlate.json');
