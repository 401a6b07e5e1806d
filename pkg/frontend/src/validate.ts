/** Client-side port of the server's session validation rules.
 *
 * The server stays authoritative; this pre-check exists so the user gets
 * the warning immediately. Rules, in order: deletion keys never pressed;
 * non-modifier presses spell the phrase text case-sensitively; Enter is
 * the single, final measured key; every measured press pairs one release.
 */

import { WireKeyEvent } from './events.js';
import {
  DELETION_KEYS,
  MODIFIER_KEYS,
  PhraseSpec,
  TERMINATOR,
  tokenToChar,
} from './phrases.js';

export interface Verdict {
  accepted: boolean;
  reason: string | null;
}

const ok: Verdict = { accepted: true, reason: null };
const rejected = (reason: string): Verdict => ({ accepted: false, reason });

export function validateSession(events: WireKeyEvent[], spec: PhraseSpec): Verdict {
  if (events.length === 0) throw new Error('empty event list');
  for (let i = 1; i < events.length; i++) {
    if (events[i].t_us < events[i - 1].t_us) {
      throw new Error('timestamps must be non-decreasing');
    }
  }

  for (const ev of events) {
    if (ev.kind === 'down' && DELETION_KEYS.has(ev.key)) {
      return rejected('deletion_used');
    }
  }

  const measuredPresses = events
    .filter((ev) => ev.kind === 'down' && !MODIFIER_KEYS.has(ev.key))
    .map((ev) => ev.key);
  const typed = measuredPresses
    .filter((k) => k !== TERMINATOR)
    .map(tokenToChar)
    .join('');
  if (typed !== spec.text) return rejected('text_mismatch');

  const enters = measuredPresses.filter((k) => k === TERMINATOR).length;
  if (
    measuredPresses.length === 0 ||
    measuredPresses[measuredPresses.length - 1] !== TERMINATOR ||
    enters !== 1
  ) {
    return rejected('no_terminator');
  }

  const open = new Set<string>();
  for (const ev of events) {
    if (MODIFIER_KEYS.has(ev.key)) continue;
    if (ev.kind === 'down') {
      if (open.has(ev.key)) return rejected('unpaired_key');
      open.add(ev.key);
    } else {
      if (!open.has(ev.key)) return rejected('unpaired_key');
      open.delete(ev.key);
    }
  }
  if (open.size > 0) return rejected('unpaired_key');

  return ok;
}
