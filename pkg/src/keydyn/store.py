"""Append-only session store with a derived per-phrase CSV view.

The raw JSONL log is the source of truth; derived CSVs are rebuilt from
it whenever they disagree (e.g. after a crash between the two appends),
so a derived row can never outlive or precede its raw session.
"""

from __future__ import annotations

import json
import os
from pathlib import Path

from keydyn.dataset import (
    Dataset,
    LabeledSample,
    SubjectMeta,
    serialize_dataset_csv,
)
from keydyn.events import KeyEvent, validate_session
from keydyn.features import extract_features
from keydyn.phrases import PHRASES

MAX_SESSIONS = 5

_KIND_FROM_WIRE = {"down": "press", "up": "release"}
_KIND_TO_WIRE = {v: k for k, v in _KIND_FROM_WIRE.items()}


class SubmissionError(ValueError):
    """Rejected submission; ``reason`` is machine-readable."""

    def __init__(self, reason: str, detail: str = ""):
        super().__init__(detail or reason)
        self.reason = reason


def events_from_wire(raw: list[dict]) -> list[KeyEvent]:
    try:
        return [
            KeyEvent(key=e["key"], kind=_KIND_FROM_WIRE[e["kind"]], t_us=int(e["t_us"]))
            for e in raw
        ]
    except (KeyError, TypeError, ValueError) as exc:
        raise SubmissionError("malformed_payload", f"bad event list: {exc}") from exc


def events_to_wire(events: list[KeyEvent]) -> list[dict]:
    return [
        {"key": e.key, "kind": _KIND_TO_WIRE[e.kind], "t_us": e.t_us} for e in events
    ]


class SessionStore:
    """Accepted raw sessions plus their derived feature rows on disk."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self.raw_path = self.root / "raw.jsonl"
        self._records: list[dict] = []
        self._index: dict[tuple[int, str], set[int]] = {}  # (subject, phrase) -> sessions
        self._metas: dict[int, SubjectMeta] = {}
        self._load()
        self._reconcile_derived()

    # -- loading / recovery -------------------------------------------------

    def _load(self) -> None:
        if not self.raw_path.exists():
            return
        with self.raw_path.open() as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                self._register(json.loads(line))

    def _register(self, record: dict) -> None:
        subject = record["subject"]
        sid = int(subject["subject_id"])
        key = (sid, record["phrase_id"])
        self._index.setdefault(key, set()).add(int(record["session_index"]))
        self._metas[sid] = SubjectMeta(
            subject_id=sid,
            gender=subject["gender"],
            age_group=subject["age_group"],
            birth_year=int(subject["birth_year"]),
            survey=subject.get("survey"),
        )
        self._records.append(record)

    def _derived_path(self, phrase_id: str) -> Path:
        return self.root / f"derived_{phrase_id}.csv"

    def _reconcile_derived(self) -> None:
        """Rebuild any derived CSV that disagrees with the raw log."""
        for phrase_id in PHRASES:
            expected = serialize_dataset_csv(self._dataset(phrase_id))
            path = self._derived_path(phrase_id)
            on_disk = path.read_text() if path.exists() else None
            if on_disk != expected:
                path.write_text(expected)

    # -- views --------------------------------------------------------------

    def _sample(self, record: dict) -> LabeledSample:
        sid = int(record["subject"]["subject_id"])
        events = events_from_wire(record["events"])
        features = extract_features(events, PHRASES[record["phrase_id"]])
        return LabeledSample(
            meta=self._metas[sid],
            session=int(record["session_index"]),
            features=features,
        )

    def _dataset(self, phrase_id: str) -> Dataset:
        samples = [
            self._sample(r) for r in self._records if r["phrase_id"] == phrase_id
        ]
        return Dataset(phrase_id=phrase_id, samples=samples)

    def session_count(self, subject_id: int, phrase_id: str) -> int:
        return len(self._index.get((subject_id, phrase_id), set()))

    def progress(self, subject_id: int) -> dict[str, int]:
        return {pid: self.session_count(subject_id, pid) for pid in PHRASES}

    def phrases_present(self) -> list[str]:
        return [pid for pid in PHRASES if any(r["phrase_id"] == pid for r in self._records)]

    def fingerprint(self) -> int:
        return len(self._records)

    # -- writes -------------------------------------------------------------

    def submit(self, record: dict, _crash_after_raw: bool = False) -> int:
        """Validate and append one session; returns the new session count.

        ``_crash_after_raw`` is a test hook simulating a crash between
        the raw append and the derived update.
        """
        try:
            subject = record["subject"]
            sid = int(subject["subject_id"])
            phrase_id = record["phrase_id"]
            session_index = int(record["session_index"])
            spec = PHRASES[phrase_id]
            # constructing the meta validates gender / age_group values
            SubjectMeta(
                subject_id=sid,
                gender=subject["gender"],
                age_group=subject["age_group"],
                birth_year=int(subject["birth_year"]),
                survey=subject.get("survey"),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise SubmissionError("malformed_payload", str(exc)) from exc

        key = (sid, phrase_id)
        accepted = self._index.get(key, set())
        if session_index in accepted:
            raise SubmissionError("duplicate_session")
        if len(accepted) >= MAX_SESSIONS:
            raise SubmissionError("quota_exceeded")
        if session_index != len(accepted) + 1:
            raise SubmissionError(
                "malformed_payload",
                f"session_index must be {len(accepted) + 1}, got {session_index}",
            )

        events = events_from_wire(record["events"])
        try:
            verdict = validate_session(events, spec)
        except ValueError as exc:
            raise SubmissionError("malformed_payload", str(exc)) from exc
        if not verdict.accepted:
            raise SubmissionError(verdict.reason or "rejected")

        with self.raw_path.open("a") as fh:
            fh.write(json.dumps(record, separators=(",", ":")) + "\n")
            fh.flush()
            os.fsync(fh.fileno())
        self._register(record)
        if _crash_after_raw:
            raise RuntimeError("injected crash between raw and derived append")
        self._reconcile_derived()
        return self.session_count(sid, phrase_id)

    # -- export -------------------------------------------------------------

    def export_csv(self, phrase_id: str | None = None, deidentify: bool = False) -> str:
        """Canonical dataset CSV for one phrase.

        With deidentify, subject ids become stable pseudonymous integers
        (rank of the original id) and birth_year is zeroed; age_group is
        retained.
        """
        if not self._records:
            raise SubmissionError("empty_store")
        present = self.phrases_present()
        if phrase_id is None:
            if len(present) != 1:
                raise SubmissionError(
                    "ambiguous_phrase",
                    f"store holds {present}; pass an explicit phrase",
                )
            phrase_id = present[0]
        dataset = self._dataset(phrase_id)
        if not dataset.samples:
            raise SubmissionError("empty_store", f"no sessions for {phrase_id}")
        if deidentify:
            pseudo = {
                sid: i + 1 for i, sid in enumerate(sorted(self._metas))
            }
            dataset = Dataset(
                phrase_id=phrase_id,
                samples=[
                    LabeledSample(
                        meta=SubjectMeta(
                            subject_id=pseudo[s.meta.subject_id],
                            gender=s.meta.gender,
                            age_group=s.meta.age_group,
                            birth_year=0,
                        ),
                        session=s.session,
                        features=s.features,
                    )
                    for s in dataset.samples
                ],
            )
        return serialize_dataset_csv(dataset)
