import { readFileSync } from 'node:fs';
import { dirname, join } from 'node:path';
import { fileURLToPath } from 'node:url';

import type { WireKeyEvent } from '../src/events.js';

export interface SessionFixture {
  name: string;
  phrase_id: string;
  events: WireKeyEvent[];
  expected: { accepted: boolean; reason: string | null };
  /** Server-computed feature vector, present for accepted sessions. */
  features?: number[];
}

const here = dirname(fileURLToPath(import.meta.url));

export function loadFixtures(): SessionFixture[] {
  const raw = readFileSync(join(here, 'fixtures', 'sessions.json'), 'utf-8');
  return JSON.parse(raw) as SessionFixture[];
}

/** Replay a wire event stream as the DOM-level inputs the recorder sees. */
export function toKeyInputs(events: WireKeyEvent[]) {
  return events.map((ev) => ({
    key: wireKeyToDomKey(ev.key),
    type: ev.kind === 'down' ? ('keydown' as const) : ('keyup' as const),
    repeat: false,
    timeStamp: ev.t_us / 1000,
  }));
}

const TOKEN_TO_DOM: Record<string, string> = {
  space: ' ',
  period: '.',
  five: '5',
};

function wireKeyToDomKey(token: string): string {
  return TOKEN_TO_DOM[token] ?? token;
}
