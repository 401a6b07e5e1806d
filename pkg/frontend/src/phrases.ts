/** Phrase definitions mirroring the server's key-token vocabulary. */

export interface PhraseSpec {
  phrase_id: string;
  text: string;
  key_tokens: string[];
}

export const MODIFIER_KEYS = new Set(['Shift', 'CapsLock']);
export const DELETION_KEYS = new Set(['Backspace', 'Delete']);
export const TERMINATOR = 'Enter';

const TOKEN_TO_CHAR: Record<string, string> = {
  space: ' ',
  period: '.',
  comma: ',',
  zero: '0',
  one: '1',
  two: '2',
  three: '3',
  four: '4',
  five: '5',
  six: '6',
  seven: '7',
  eight: '8',
  nine: '9',
};
const CHAR_TO_TOKEN: Record<string, string> = Object.fromEntries(
  Object.entries(TOKEN_TO_CHAR).map(([t, c]) => [c, t]),
);

export function tokenToChar(token: string): string {
  if (token.length === 1) return token;
  const ch = TOKEN_TO_CHAR[token];
  if (ch === undefined) throw new Error(`unknown key token: ${token}`);
  return ch;
}

export function charToToken(ch: string): string {
  return CHAR_TO_TOKEN[ch] ?? ch;
}

function fromText(phrase_id: string, text: string): PhraseSpec {
  return {
    phrase_id,
    text,
    key_tokens: [...text].map(charToToken).concat([TERMINATOR]),
  };
}

export const PHRASES: PhraseSpec[] = [
  fromText('turkish', 'Mercan Otu'),
  fromText('password', '.tie5Roanl'),
];

export function phraseById(id: string): PhraseSpec {
  const spec = PHRASES.find((p) => p.phrase_id === id);
  if (!spec) throw new Error(`unknown phrase: ${id}`);
  return spec;
}
