/** Thin client for the ingest service. */

import { WireKeyEvent } from './events.js';

export interface Survey {
  handedness: 'left' | 'right';
  owns_computer: boolean;
}

export interface Subject {
  subject_id: number;
  gender: 'M' | 'F';
  age_group: 'child' | 'adult' | 'impostor';
  birth_year: number;
  survey?: Survey;
}

export interface SessionPayload {
  subject: Subject;
  phrase_id: string;
  session_index: number;
  events: WireKeyEvent[];
  /** Browser clocks are millisecond-grained; declare it so the analysis
   * side knows the effective resolution of the microsecond fields. */
  clock_resolution_us: number;
}

export type SubmitResult =
  | { status: 'accepted'; session_count: number }
  | { status: 'rejected'; reason: string };

export interface SessionApi {
  submitSession(payload: SessionPayload): Promise<SubmitResult>;
}

export class HttpSessionApi implements SessionApi {
  constructor(private baseUrl = '') {}

  async submitSession(payload: SessionPayload): Promise<SubmitResult> {
    const response = await fetch(`${this.baseUrl}/api/session`, {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify(payload),
    });
    const body = await response.json();
    if (response.ok) {
      return { status: 'accepted', session_count: body.session_count };
    }
    if (response.status === 422 && body.detail?.reason) {
      return { status: 'rejected', reason: body.detail.reason };
    }
    throw new Error(`submission failed: HTTP ${response.status}`);
  }
}
