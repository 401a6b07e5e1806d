"""Raw key events and session validation.

A session is the full key event stream recorded while a subject types
one phrase. It is accepted only if it spells the phrase exactly,
case-sensitively, with no deletion keys, every measured key properly
press/release paired, and Enter as the final measured key.
"""

from __future__ import annotations

from dataclasses import dataclass

from keydyn.phrases import (
    DELETION_KEYS,
    MODIFIER_KEYS,
    TERMINATOR,
    PhraseSpec,
    token_to_char,
)

PRESS = "press"
RELEASE = "release"


@dataclass(frozen=True)
class KeyEvent:
    """One press or release of a named key, in integer microseconds."""

    key: str
    kind: str  # "press" | "release"
    t_us: int

    def __post_init__(self) -> None:
        if self.kind not in (PRESS, RELEASE):
            raise ValueError(f"kind must be press or release, got {self.kind!r}")
        if self.t_us < 0:
            raise ValueError("t_us must be non-negative")


@dataclass(frozen=True)
class SessionVerdict:
    accepted: bool
    reason: str | None = None

    @classmethod
    def ok(cls) -> "SessionVerdict":
        return cls(accepted=True)

    @classmethod
    def rejected(cls, reason: str) -> "SessionVerdict":
        return cls(accepted=False, reason=reason)


class MalformedSessionError(ValueError):
    """Raised when an operation requires an accepted session."""

    def __init__(self, reason: str):
        super().__init__(f"malformed session: {reason}")
        self.reason = reason


def _check_monotone(events: list[KeyEvent]) -> None:
    if not events:
        raise ValueError("empty event list")
    for a, b in zip(events, events[1:]):
        if b.t_us < a.t_us:
            raise ValueError("timestamps must be non-decreasing")


def validate_session(events: list[KeyEvent], spec: PhraseSpec) -> SessionVerdict:
    """Decide whether a raw event stream is an acceptable typing of ``spec``.

    Rules, checked in order (the first violated one names the reason):
    deletion keys never pressed; non-modifier presses spell the phrase
    text case-sensitively; the final measured key is Enter; every
    measured key press is released before that key's next press.
    """
    _check_monotone(events)

    for ev in events:
        if ev.kind == PRESS and ev.key in DELETION_KEYS:
            return SessionVerdict.rejected("deletion_used")

    measured_presses = [
        ev.key for ev in events if ev.kind == PRESS and ev.key not in MODIFIER_KEYS
    ]
    typed = "".join(
        token_to_char(k) for k in measured_presses if k != TERMINATOR
    )
    if typed != spec.text:
        return SessionVerdict.rejected("text_mismatch")

    if (
        not measured_presses
        or measured_presses[-1] != TERMINATOR
        or measured_presses.count(TERMINATOR) != 1
    ):
        return SessionVerdict.rejected("no_terminator")

    open_keys: set[str] = set()
    for ev in events:
        if ev.key in MODIFIER_KEYS:
            continue
        if ev.kind == PRESS:
            if ev.key in open_keys:
                return SessionVerdict.rejected("unpaired_key")
            open_keys.add(ev.key)
        else:
            if ev.key not in open_keys:
                return SessionVerdict.rejected("unpaired_key")
            open_keys.discard(ev.key)
    if open_keys:
        return SessionVerdict.rejected("unpaired_key")

    return SessionVerdict.ok()


def measured_keystrokes(
    events: list[KeyEvent], spec: PhraseSpec
) -> list[tuple[str, int, int]]:
    """Press-ordered (key, t_press, t_release) for the measured keys.

    Requires an accepted session; raises MalformedSessionError otherwise.
    """
    verdict = validate_session(events, spec)
    if not verdict.accepted:
        raise MalformedSessionError(verdict.reason or "rejected")

    strokes: list[tuple[str, int, int]] = []
    open_at: dict[str, tuple[int, int]] = {}  # key -> (stroke index, t_press)
    for ev in events:
        if ev.key in MODIFIER_KEYS:
            continue
        if ev.kind == PRESS:
            open_at[ev.key] = (len(strokes), ev.t_us)
            strokes.append((ev.key, ev.t_us, -1))
        else:
            idx, t_press = open_at.pop(ev.key)
            strokes[idx] = (ev.key, t_press, ev.t_us)
    return strokes
