"""Regenerate tests/fixtures/sessions.json from the server implementation.

Each fixture holds a raw wire event stream plus the server's verdict and,
for accepted sessions, the server-computed feature vector. The client-side
validation and featurization tests compare against these goldens.

Run from the frontend directory: python3 scripts/make_fixtures.py
"""

import json
from pathlib import Path

import numpy as np

from keydyn.events import KeyEvent, validate_session
from keydyn.features import extract_features
from keydyn.phrases import PHRASES
from keydyn.store import events_to_wire
from keydyn.synthetic import synth_session_events


def base_events(phrase_id, seed):
    rng = np.random.default_rng(seed)
    return synth_session_events(
        PHRASES[phrase_id], rng, dwell_ms=100, gap_ms=260, dwell_sd=12, gap_sd=35
    )


def with_key_renamed(events, old, new, count=1):
    out, done = [], 0
    for ev in events:
        if ev.key == old and done < 2 * count:
            out.append(KeyEvent(key=new, kind=ev.kind, t_us=ev.t_us))
            done += 1
        else:
            out.append(ev)
    return out


def cases():
    yield "valid_turkish", "turkish", base_events("turkish", 1)
    yield "valid_password", "password", base_events("password", 2)

    # overlapping strokes: shift the second press before the first release
    rng = np.random.default_rng(3)
    tight = synth_session_events(
        PHRASES["turkish"], rng, dwell_ms=140, gap_ms=70, dwell_sd=5, gap_sd=5
    )
    yield "valid_overlapping", "turkish", tight

    # modifier noise: Shift held around the capital M
    ev = base_events("turkish", 4)
    first = ev[0].t_us
    noisy = sorted(
        ev
        + [
            KeyEvent(key="Shift", kind="press", t_us=max(0, first - 40_000)),
            KeyEvent(key="Shift", kind="release", t_us=first + 90_000),
        ],
        key=lambda e: e.t_us,
    )
    yield "valid_with_shift", "turkish", noisy

    ev = base_events("turkish", 5)
    mid = ev[len(ev) // 2].t_us
    bad = sorted(
        ev + [KeyEvent(key="Backspace", kind="press", t_us=mid)], key=lambda e: e.t_us
    )
    yield "backspace_midway", "turkish", bad

    # case mismatch: lowercase m instead of M
    yield "case_mismatch", "turkish", with_key_renamed(base_events("turkish", 6), "M", "m")

    # Enter never pressed
    ev = [e for e in base_events("turkish", 7) if e.key != "Enter"]
    yield "no_terminator", "turkish", ev

    # one release missing
    ev = base_events("turkish", 8)
    dropped = [e for e in ev if not (e.key == "c" and e.kind == "release")]
    yield "unpaired_key", "turkish", dropped


def main():
    fixtures = []
    for name, phrase_id, events in cases():
        spec = PHRASES[phrase_id]
        verdict = validate_session(events, spec)
        entry = {
            "name": name,
            "phrase_id": phrase_id,
            "events": events_to_wire(events),
            "expected": {"accepted": verdict.accepted, "reason": verdict.reason},
        }
        if verdict.accepted:
            entry["features"] = list(extract_features(events, spec).values)
        fixtures.append(entry)

    out = Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "sessions.json"
    out.write_text(json.dumps(fixtures, indent=1) + "\n")
    print(f"wrote {len(fixtures)} fixtures to {out}")


if __name__ == "__main__":
    main()
