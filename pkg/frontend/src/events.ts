/** Key event capture: DOM events to the wire format the server expects. */

import { charToToken } from './phrases.js';

export type WireKind = 'down' | 'up';

export interface WireKeyEvent {
  key: string;
  kind: WireKind;
  t_us: number;
}

/** The subset of KeyboardEvent the recorder needs (testable without a DOM). */
export interface KeyInput {
  key: string;
  type: 'keydown' | 'keyup';
  repeat: boolean;
  /** High-resolution timestamp in milliseconds (performance.now() origin). */
  timeStamp: number;
}

/** Named keys passed through as-is; everything else maps char -> token. */
const NAMED_KEYS = new Set([
  'Enter',
  'Shift',
  'CapsLock',
  'Backspace',
  'Delete',
]);

export function keyToken(domKey: string): string {
  if (NAMED_KEYS.has(domKey)) return domKey;
  return charToToken(domKey);
}

export function msToMicros(ms: number): number {
  return Math.round(ms * 1000);
}

/**
 * Buffers key events for one typing attempt.
 *
 * Auto-repeat keydowns are dropped so every press pairs exactly one
 * release; timestamps are clamped to be non-decreasing (browser event
 * timestamps occasionally jitter backwards by less than the clock
 * resolution).
 */
export class KeyRecorder {
  private buffer: WireKeyEvent[] = [];
  private lastT = 0;

  record(input: KeyInput): WireKeyEvent | null {
    if (input.type === 'keydown' && input.repeat) return null;
    const t = Math.max(this.lastT, msToMicros(input.timeStamp));
    this.lastT = t;
    const event: WireKeyEvent = {
      key: keyToken(input.key),
      kind: input.type === 'keydown' ? 'down' : 'up',
      t_us: t,
    };
    this.buffer.push(event);
    return event;
  }

  get events(): WireKeyEvent[] {
    return this.buffer.slice();
  }

  clear(): void {
    this.buffer = [];
    this.lastT = 0;
  }
}
