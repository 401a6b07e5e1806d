/** Capture flow state machine, kept free of DOM code so it can be tested
 * against recorded fixtures. Screens: metadata form -> survey -> one typing
 * screen per phrase (5 accepted sessions each) -> done.
 *
 * The client pre-check is advisory only; the session counter moves only on
 * a server `accepted`, and any rejection (client or server) clears the
 * buffer for a restart.
 */

import { SessionApi, SessionPayload, Subject, Survey } from './api.js';
import { KeyInput, KeyRecorder } from './events.js';
import { DELETION_KEYS, PHRASES, PhraseSpec, TERMINATOR, tokenToChar } from './phrases.js';
import { validateSession } from './validate.js';

export type Screen = 'metadata' | 'survey' | 'typing' | 'done';

export const SESSIONS_PER_PHRASE = 5;

/** Effective resolution of browser timing, declared in each submission. */
export const CLOCK_RESOLUTION_US = 1000;

export interface WizardEvents {
  onWarning?(message: string): void;
  onScreenChange?(screen: Screen): void;
}

export class CaptureWizard {
  screen: Screen = 'metadata';
  subject: Subject | null = null;
  phraseIndex = 0;
  /** Accepted sessions per phrase id. */
  counters: Record<string, number> = {};
  typedMirror = '';
  submitting = false;
  lastError: string | null = null;

  private recorder = new KeyRecorder();

  constructor(
    private api: SessionApi,
    private hooks: WizardEvents = {},
    private phrases: PhraseSpec[] = PHRASES,
  ) {
    for (const p of phrases) this.counters[p.phrase_id] = 0;
  }

  get phrase(): PhraseSpec {
    return this.phrases[this.phraseIndex];
  }

  get sessionCount(): number {
    return this.counters[this.phrase.phrase_id];
  }

  get bufferedEvents() {
    return this.recorder.events;
  }

  submitMetadata(subject: Subject): void {
    this.subject = subject;
    this.setScreen('survey');
  }

  submitSurvey(survey: Survey): void {
    if (!this.subject) throw new Error('metadata missing');
    this.subject = { ...this.subject, survey };
    this.setScreen('typing');
  }

  restart(): void {
    this.recorder.clear();
    this.typedMirror = '';
    this.lastError = null;
  }

  /** Feed one DOM key event; returns true when a submission was started. */
  handleKey(input: KeyInput): boolean {
    if (this.screen !== 'typing' || this.submitting) return false;
    const event = this.recorder.record(input);
    if (!event) return false; // auto-repeat

    if (event.kind === 'down' && DELETION_KEYS.has(event.key)) {
      this.warn('Backspace and Delete are not allowed; the session restarts.');
      this.restart();
      return false;
    }
    if (event.kind === 'down' && event.key !== TERMINATOR) {
      try {
        this.typedMirror += tokenToChar(event.key);
      } catch {
        // unknown named key (arrows etc.); leave it to server validation
      }
    }
    // submit once Enter is released, so its release is in the buffer
    if (event.kind === 'up' && event.key === TERMINATOR) return true;
    return false;
  }

  async submit(): Promise<void> {
    if (!this.subject) throw new Error('metadata missing');
    const events = this.recorder.events;

    let verdict;
    try {
      verdict = validateSession(events, this.phrase);
    } catch (err) {
      verdict = { accepted: false, reason: 'malformed_payload' };
    }
    if (!verdict.accepted) {
      this.warn(`Session rejected (${verdict.reason}); please type it again.`);
      this.restart();
      return;
    }

    const payload: SessionPayload = {
      subject: this.subject,
      phrase_id: this.phrase.phrase_id,
      session_index: this.sessionCount + 1,
      events,
      clock_resolution_us: CLOCK_RESOLUTION_US,
    };
    this.submitting = true;
    let result;
    try {
      result = await this.api.submitSession(payload);
    } catch (err) {
      // network failure: keep the buffer so the user can retry
      this.submitting = false;
      this.lastError = 'network';
      this.warn('Could not reach the server; the session is kept for retry.');
      return;
    }
    this.submitting = false;

    if (result.status === 'rejected') {
      this.warn(`Server rejected the session (${result.reason}); please retype.`);
      this.restart();
      return;
    }

    this.counters[this.phrase.phrase_id] += 1;
    this.restart();
    if (this.sessionCount >= SESSIONS_PER_PHRASE) {
      if (this.phraseIndex + 1 < this.phrases.length) {
        this.phraseIndex += 1;
        this.setScreen('typing');
      } else {
        this.setScreen('done');
      }
    }
  }

  async retry(): Promise<void> {
    if (this.lastError !== 'network') return;
    this.lastError = null;
    await this.submit();
  }

  private setScreen(screen: Screen): void {
    this.screen = screen;
    this.hooks.onScreenChange?.(screen);
  }

  private warn(message: string): void {
    this.hooks.onWarning?.(message);
  }
}
