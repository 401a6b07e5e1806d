"""Phrase definitions and key-token vocabulary.

A phrase is typed as a fixed sequence of measured keys: one key per
character plus a terminating Enter. Keys are named by tokens; characters
that are awkward as bare CSV/JSON values (space, period, digits) get
word tokens.
"""

from __future__ import annotations

from dataclasses import dataclass

# Keys that may appear in a session but are never measured.
MODIFIER_KEYS = frozenset({"Shift", "CapsLock"})

# Pressing either of these invalidates the session.
DELETION_KEYS = frozenset({"Backspace", "Delete"})

TERMINATOR = "Enter"

_TOKEN_TO_CHAR = {
    "space": " ",
    "period": ".",
    "comma": ",",
    "zero": "0",
    "one": "1",
    "two": "2",
    "three": "3",
    "four": "4",
    "five": "5",
    "six": "6",
    "seven": "7",
    "eight": "8",
    "nine": "9",
}
_CHAR_TO_TOKEN = {c: t for t, c in _TOKEN_TO_CHAR.items()}


def token_to_char(token: str) -> str:
    """Character produced by pressing a measured, non-Enter key."""
    if len(token) == 1:
        return token
    try:
        return _TOKEN_TO_CHAR[token]
    except KeyError:
        raise ValueError(f"unknown key token: {token!r}") from None


def char_to_token(ch: str) -> str:
    return _CHAR_TO_TOKEN.get(ch, ch)


@dataclass(frozen=True)
class PhraseSpec:
    """A fixed phrase and the ordered keys that type it.

    ``key_tokens`` holds one token per character plus a final Enter;
    modifier keys never appear in it.
    """

    phrase_id: str
    text: str
    key_tokens: tuple[str, ...]

    def __post_init__(self) -> None:
        if len(self.key_tokens) != len(self.text) + 1:
            raise ValueError("key_tokens must cover every character plus Enter")
        if self.key_tokens[-1] != TERMINATOR:
            raise ValueError("last key token must be Enter")
        if any(t in MODIFIER_KEYS for t in self.key_tokens):
            raise ValueError("modifier keys cannot be measured keys")
        typed = "".join(token_to_char(t) for t in self.key_tokens[:-1])
        if typed != self.text:
            raise ValueError("key_tokens do not spell the phrase text")

    @classmethod
    def from_text(cls, phrase_id: str, text: str) -> "PhraseSpec":
        tokens = tuple(char_to_token(c) for c in text) + (TERMINATOR,)
        return cls(phrase_id=phrase_id, text=text, key_tokens=tokens)

    @property
    def n_keys(self) -> int:
        return len(self.key_tokens)

    @property
    def vector_length(self) -> int:
        """3n+1 timing values for n typed characters."""
        return 3 * len(self.text) + 1


TURKISH = PhraseSpec.from_text("turkish", "Mercan Otu")
PASSWORD = PhraseSpec.from_text("password", ".tie5Roanl")

PHRASES: dict[str, PhraseSpec] = {p.phrase_id: p for p in (TURKISH, PASSWORD)}
