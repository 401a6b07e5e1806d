import { beforeEach, describe, expect, it } from 'vitest';

import type { SessionApi, SessionPayload, SubmitResult } from '../src/api.js';
import { CaptureWizard, SESSIONS_PER_PHRASE } from '../src/wizard.js';
import { loadFixtures, toKeyInputs } from './fixtures.js';

const fixtures = loadFixtures();
const byName = (name: string) => fixtures.find((f) => f.name === name)!;

/** In-memory stand-in for the ingest service, quota rules included. */
class FakeApi implements SessionApi {
  submitted: SessionPayload[] = [];
  counts = new Map<string, number>();
  failNext: string | null = null;
  networkDown = false;

  async submitSession(payload: SessionPayload): Promise<SubmitResult> {
    if (this.networkDown) throw new Error('connection refused');
    if (this.failNext) {
      const reason = this.failNext;
      this.failNext = null;
      return { status: 'rejected', reason };
    }
    this.submitted.push(payload);
    const n = (this.counts.get(payload.phrase_id) ?? 0) + 1;
    this.counts.set(payload.phrase_id, n);
    return { status: 'accepted', session_count: n };
  }
}

const subject = {
  subject_id: 9,
  gender: 'F' as const,
  age_group: 'child' as const,
  birth_year: 2013,
};

let api: FakeApi;
let warnings: string[];
let wizard: CaptureWizard;

beforeEach(() => {
  api = new FakeApi();
  warnings = [];
  wizard = new CaptureWizard(api, { onWarning: (m) => warnings.push(m) });
  wizard.submitMetadata(subject);
  wizard.submitSurvey({ handedness: 'right', owns_computer: true });
});

async function typeFixture(name: string): Promise<void> {
  let submit = false;
  for (const input of toKeyInputs(byName(name).events)) {
    submit = wizard.handleKey(input) || submit;
  }
  if (submit) await wizard.submit();
}

describe('capture flow', () => {
  it('walks metadata -> survey -> typing', () => {
    expect(wizard.screen).toBe('typing');
    expect(wizard.phrase.phrase_id).toBe('turkish');
    expect(wizard.sessionCount).toBe(0);
  });

  it('5 accepted sessions advance to the next phrase', async () => {
    for (let i = 0; i < SESSIONS_PER_PHRASE; i++) {
      expect(wizard.phrase.phrase_id).toBe('turkish');
      await typeFixture('valid_turkish');
      expect(wizard.counters['turkish']).toBe(i + 1);
    }
    expect(wizard.phrase.phrase_id).toBe('password');
    expect(wizard.sessionCount).toBe(0);
    expect(api.submitted.map((p) => p.session_index)).toEqual([1, 2, 3, 4, 5]);
  });

  it('completing both phrases reaches the done screen', async () => {
    for (let i = 0; i < SESSIONS_PER_PHRASE; i++) await typeFixture('valid_turkish');
    for (let i = 0; i < SESSIONS_PER_PHRASE; i++) await typeFixture('valid_password');
    expect(wizard.screen).toBe('done');
    expect(api.counts.get('password')).toBe(SESSIONS_PER_PHRASE);
  });

  it('counter never increments on client-side rejection', async () => {
    await typeFixture('case_mismatch');
    expect(wizard.counters['turkish']).toBe(0);
    expect(api.submitted).toHaveLength(0); // never reached the server
    expect(warnings.some((w) => w.includes('text_mismatch'))).toBe(true);
    expect(wizard.bufferedEvents).toHaveLength(0); // cleared for restart
  });

  it('counter never increments on server rejection', async () => {
    api.failNext = 'quota_exceeded';
    await typeFixture('valid_turkish');
    expect(wizard.counters['turkish']).toBe(0);
    expect(warnings.some((w) => w.includes('quota_exceeded'))).toBe(true);
  });

  it('backspace warns and clears immediately, no submission', async () => {
    wizard.handleKey({ key: 'M', type: 'keydown', repeat: false, timeStamp: 1 });
    wizard.handleKey({ key: 'M', type: 'keyup', repeat: false, timeStamp: 2 });
    wizard.handleKey({ key: 'Backspace', type: 'keydown', repeat: false, timeStamp: 3 });
    expect(warnings).toHaveLength(1);
    expect(wizard.bufferedEvents).toHaveLength(0);
    expect(wizard.typedMirror).toBe('');
    // a clean retype afterwards is accepted
    await typeFixture('valid_turkish');
    expect(wizard.counters['turkish']).toBe(1);
  });

  it('restart clears buffer and mirror', () => {
    wizard.handleKey({ key: 'M', type: 'keydown', repeat: false, timeStamp: 1 });
    expect(wizard.typedMirror).toBe('M');
    wizard.restart();
    expect(wizard.typedMirror).toBe('');
    expect(wizard.bufferedEvents).toHaveLength(0);
  });

  it('network failure keeps the buffer and retry succeeds', async () => {
    api.networkDown = true;
    await typeFixture('valid_turkish');
    expect(wizard.counters['turkish']).toBe(0);
    expect(wizard.bufferedEvents.length).toBeGreaterThan(0);

    api.networkDown = false;
    await wizard.retry();
    expect(wizard.counters['turkish']).toBe(1);
  });

  it('submission payload declares clock resolution and session index', async () => {
    await typeFixture('valid_turkish');
    const payload = api.submitted[0];
    expect(payload.clock_resolution_us).toBe(1000);
    expect(payload.session_index).toBe(1);
    expect(payload.subject.survey?.handedness).toBe('right');
  });

  it('mirror tracks typed characters', () => {
    for (const input of toKeyInputs(byName('valid_turkish').events)) {
      wizard.handleKey(input);
    }
    expect(wizard.typedMirror).toBe('Mercan Otu');
  });
});
