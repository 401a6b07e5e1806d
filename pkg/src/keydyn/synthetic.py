"""Synthetic typing populations for tests and demos.

Adults type fast with low variance; children slow with high variance,
matching the qualitative spread seen in real collections. Sessions are
generated as raw event streams and run through the real extraction
pipeline, so every synthetic vector satisfies the digraph identities.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from keydyn.dataset import Dataset, LabeledSample, SubjectMeta
from keydyn.events import KeyEvent
from keydyn.features import extract_features
from keydyn.phrases import PHRASES, PhraseSpec


@dataclass(frozen=True)
class GroupProfile:
    """Millisecond-scale timing profile for one age group."""

    dwell_ms: float
    dwell_subject_sd: float
    dwell_session_sd: float
    gap_ms: float  # press-to-press interval
    gap_subject_sd: float
    gap_session_sd: float


ADULT_PROFILE = GroupProfile(
    dwell_ms=95.0,
    dwell_subject_sd=8.0,
    dwell_session_sd=6.0,
    gap_ms=180.0,
    gap_subject_sd=20.0,
    gap_session_sd=15.0,
)
CHILD_PROFILE = GroupProfile(
    dwell_ms=140.0,
    dwell_subject_sd=35.0,
    dwell_session_sd=25.0,
    gap_ms=550.0,
    gap_subject_sd=180.0,
    gap_session_sd=120.0,
)
IMPOSTOR_PROFILE = GroupProfile(
    dwell_ms=120.0,
    dwell_subject_sd=25.0,
    dwell_session_sd=20.0,
    gap_ms=420.0,
    gap_subject_sd=150.0,
    gap_session_sd=110.0,
)

PROFILES = {"adult": ADULT_PROFILE, "child": CHILD_PROFILE, "impostor": IMPOSTOR_PROFILE}


def synth_session_events(
    spec: PhraseSpec,
    rng: np.random.Generator,
    dwell_ms: float,
    gap_ms: float,
    dwell_sd: float,
    gap_sd: float,
) -> list[KeyEvent]:
    """Raw events for one valid typing of the phrase."""
    t = 0
    events: list[tuple[int, str, str]] = []
    for i, key in enumerate(spec.key_tokens):
        dwell = max(15.0, rng.normal(dwell_ms, dwell_sd))
        events.append((t, key, "press"))
        events.append((t + int(dwell * 1000), key, "release"))
        if i + 1 < len(spec.key_tokens):
            gap = max(dwell * 0.4, rng.normal(gap_ms, gap_sd))
            t += int(gap * 1000)
    events.sort(key=lambda e: e[0])
    return [KeyEvent(key=k, kind=kind, t_us=ts) for ts, k, kind in events]


def synth_subject_sessions(
    subject: SubjectMeta,
    phrase_id: str,
    rng: np.random.Generator,
    n_sessions: int = 5,
    profile: GroupProfile | None = None,
) -> list[LabeledSample]:
    profile = profile or PROFILES[subject.age_group]
    spec = PHRASES[phrase_id]
    dwell = max(20.0, rng.normal(profile.dwell_ms, profile.dwell_subject_sd))
    gap = max(40.0, rng.normal(profile.gap_ms, profile.gap_subject_sd))
    samples = []
    for session in range(1, n_sessions + 1):
        events = synth_session_events(
            spec,
            rng,
            dwell_ms=dwell,
            gap_ms=gap,
            dwell_sd=profile.dwell_session_sd,
            gap_sd=profile.gap_session_sd,
        )
        samples.append(
            LabeledSample(
                meta=subject, session=session, features=extract_features(events, spec)
            )
        )
    return samples


def synth_population(
    phrase_id: str,
    n_adults: int = 50,
    n_children: int = 50,
    n_sessions: int = 5,
    seed: int = 0,
    first_subject_id: int = 1,
    age_groups: tuple[str, str] = ("adult", "child"),
) -> Dataset:
    """Balanced two-group population typed through the real pipeline."""
    rng = np.random.default_rng(seed)
    samples: list[LabeledSample] = []
    sid = first_subject_id
    for group, count in zip(age_groups, (n_adults, n_children)):
        for i in range(count):
            meta = SubjectMeta(
                subject_id=sid,
                gender="M" if i % 2 == 0 else "F",
                age_group=group,
                birth_year=2012 if group == "child" else 1990,
            )
            samples.extend(
                synth_subject_sessions(meta, phrase_id, rng, n_sessions=n_sessions)
            )
            sid += 1
    return Dataset(phrase_id=phrase_id, samples=samples)


def synth_impostors(
    phrase_id: str,
    n_impostors: int = 20,
    n_sessions: int = 5,
    seed: int = 1,
    first_subject_id: int = 1001,
) -> Dataset:
    rng = np.random.default_rng(seed)
    samples: list[LabeledSample] = []
    for i in range(n_impostors):
        meta = SubjectMeta(
            subject_id=first_subject_id + i,
            gender="M" if i % 2 == 0 else "F",
            age_group="impostor",
            birth_year=1985,
        )
        samples.extend(
            synth_subject_sessions(
                meta, phrase_id, rng, n_sessions=n_sessions, profile=IMPOSTOR_PROFILE
            )
        )
    return Dataset(phrase_id=phrase_id, samples=samples)
