/** Client-side port of the digraph feature extraction.
 *
 * Used only for the fidelity tests (accepted buffers must featurize
 * identically to the server); the app itself submits raw events.
 */

import { WireKeyEvent } from './events.js';
import { MODIFIER_KEYS, PhraseSpec } from './phrases.js';
import { validateSession } from './validate.js';

interface Stroke {
  key: string;
  tDown: number;
  tUp: number;
}

function measuredStrokes(events: WireKeyEvent[], spec: PhraseSpec): Stroke[] {
  const verdict = validateSession(events, spec);
  if (!verdict.accepted) throw new Error(`malformed session: ${verdict.reason}`);

  const strokes: Stroke[] = [];
  const openAt = new Map<string, number>(); // key -> stroke index
  for (const ev of events) {
    if (MODIFIER_KEYS.has(ev.key)) continue;
    if (ev.kind === 'down') {
      openAt.set(ev.key, strokes.length);
      strokes.push({ key: ev.key, tDown: ev.t_us, tUp: -1 });
    } else {
      const idx = openAt.get(ev.key)!;
      openAt.delete(ev.key);
      strokes[idx].tUp = ev.t_us;
    }
  }
  return strokes;
}

/**
 * Dwell and digraph timings in typing order: for consecutive strokes
 * k1, k2 the layout is D(k1), PP(k1,k2), RP(k1,k2), D(k2), ... — 3n+1
 * integer microsecond values for n+1 measured keys.
 */
export function extractFeatures(events: WireKeyEvent[], spec: PhraseSpec): number[] {
  const strokes = measuredStrokes(events, spec);
  const values: number[] = [];
  for (let i = 0; i < strokes.length; i++) {
    values.push(strokes[i].tUp - strokes[i].tDown);
    if (i + 1 < strokes.length) {
      values.push(strokes[i + 1].tDown - strokes[i].tDown);
      values.push(strokes[i + 1].tDown - strokes[i].tUp);
    }
  }
  return values;
}
