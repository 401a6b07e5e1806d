"""Labeled samples, datasets, and the canonical CSV format.

A dataset file holds one phrase layout (turkish, password, or concat).
Header: subject_id,gender,age_group,birth_year,session,phrase_id then
the feature columns in digraph order; concat files prefix each feature
column with its phrase. Features are integer microseconds.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field

from keydyn.features import CONCAT_ID, FeatureVector, concat_features, feature_names
from keydyn.phrases import PHRASES

AGE_GROUPS = ("child", "adult", "impostor")
GENDERS = ("M", "F")

META_COLUMNS = ["subject_id", "gender", "age_group", "birth_year", "session", "phrase_id"]


class DatasetFormatError(ValueError):
    pass


class DuplicateSampleError(ValueError):
    def __init__(self, subject_id: int, session: int, phrase_id: str):
        super().__init__(
            f"duplicate sample: subject {subject_id} session {session} phrase {phrase_id}"
        )
        self.key = (subject_id, session, phrase_id)


@dataclass(frozen=True)
class SubjectMeta:
    """Identity and demographics of one subject.

    Children are under 15 at collection time, adults over 17 (teens
    excluded); impostors are adults deliberately imitating children.
    """

    subject_id: int
    gender: str
    age_group: str
    birth_year: int
    survey: dict | None = None

    def __post_init__(self) -> None:
        if self.gender not in GENDERS:
            raise ValueError(f"gender must be one of {GENDERS}")
        if self.age_group not in AGE_GROUPS:
            raise ValueError(f"age_group must be one of {AGE_GROUPS}")


@dataclass(frozen=True)
class LabeledSample:
    meta: SubjectMeta
    session: int
    features: FeatureVector

    def __post_init__(self) -> None:
        if not 1 <= self.session <= 5:
            raise ValueError("session must be in 1..5")

    @property
    def key(self) -> tuple[int, int, str]:
        return (self.meta.subject_id, self.session, self.features.phrase_id)


@dataclass
class Dataset:
    """Samples sharing one phrase layout, unique per (subject, session)."""

    phrase_id: str
    samples: list[LabeledSample] = field(default_factory=list)

    def __post_init__(self) -> None:
        seen: set[tuple[int, int, str]] = set()
        length = self.vector_length
        for s in self.samples:
            if s.features.phrase_id != self.phrase_id:
                raise DatasetFormatError(
                    f"sample phrase {s.features.phrase_id!r} in {self.phrase_id!r} dataset"
                )
            if len(s.features) != length:
                raise DatasetFormatError("inconsistent feature vector length")
            if s.key in seen:
                raise DuplicateSampleError(*s.key)
            seen.add(s.key)

    @property
    def vector_length(self) -> int:
        if self.phrase_id == CONCAT_ID:
            return sum(p.vector_length for p in PHRASES.values())
        return PHRASES[self.phrase_id].vector_length

    def __len__(self) -> int:
        return len(self.samples)

    def subjects(self) -> dict[int, str]:
        """subject_id -> age_group."""
        return {s.meta.subject_id: s.meta.age_group for s in self.samples}


def dataset_columns(phrase_id: str) -> list[str]:
    if phrase_id == CONCAT_ID:
        feats = [
            f"{pid}.{name}"
            for pid in ("turkish", "password")
            for name in feature_names(PHRASES[pid])
        ]
    else:
        feats = feature_names(PHRASES[phrase_id])
    return META_COLUMNS + feats


def serialize_dataset_csv(d: Dataset) -> str:
    out = io.StringIO()
    out.write(",".join(dataset_columns(d.phrase_id)) + "\n")
    for s in d.samples:
        row = [
            str(s.meta.subject_id),
            s.meta.gender,
            s.meta.age_group,
            str(s.meta.birth_year),
            str(s.session),
            d.phrase_id,
        ] + [str(v) for v in s.features.values]
        out.write(",".join(row) + "\n")
    return out.getvalue()


def parse_dataset_csv(text: str) -> Dataset:
    """Parse the canonical CSV; layout inferred from the header.

    Raises DatasetFormatError naming the offending row, or
    DuplicateSampleError on a repeated (subject, session, phrase) key.
    """
    lines = text.splitlines()
    if not lines:
        raise DatasetFormatError("bad_header: empty file")
    header = lines[0].split(",")
    phrase_id = None
    for pid in (*PHRASES, CONCAT_ID):
        if header == dataset_columns(pid):
            phrase_id = pid
            break
    if phrase_id is None:
        raise DatasetFormatError("bad_header: unrecognized column list")

    n_feats = len(header) - len(META_COLUMNS)
    samples: list[LabeledSample] = []
    for n, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        cells = line.split(",")
        if len(cells) != len(header):
            raise DatasetFormatError(f"bad_row({n}, wrong column count)")
        try:
            meta = SubjectMeta(
                subject_id=int(cells[0]),
                gender=cells[1],
                age_group=cells[2],
                birth_year=int(cells[3]),
            )
            session = int(cells[4])
            row_phrase = cells[5]
            if row_phrase != phrase_id:
                raise ValueError(f"phrase_id {row_phrase!r} does not match header")
            values = tuple(int(c) for c in cells[len(META_COLUMNS):])
            if len(values) != n_feats:
                raise ValueError("wrong feature count")
            sample = LabeledSample(
                meta=meta,
                session=session,
                features=FeatureVector(phrase_id=phrase_id, values=values),
            )
        except DuplicateSampleError:
            raise
        except ValueError as exc:
            raise DatasetFormatError(f"bad_row({n}, {exc})") from exc
        samples.append(sample)
    return Dataset(phrase_id=phrase_id, samples=samples)


def concat_datasets(turkish: Dataset, password: Dataset) -> Dataset:
    """Join two per-phrase datasets on (subject, session).

    Every (subject, session) must appear in both inputs; metadata must
    agree.
    """
    if {turkish.phrase_id, password.phrase_id} != {"turkish", "password"}:
        raise DatasetFormatError("concat needs one turkish and one password dataset")
    if turkish.phrase_id != "turkish":
        turkish, password = password, turkish

    by_key = {(s.meta.subject_id, s.session): s for s in password.samples}
    if len(by_key) != len(password.samples):
        raise DatasetFormatError("password dataset has duplicate (subject, session)")
    samples: list[LabeledSample] = []
    matched: set[tuple[int, int]] = set()
    for t in turkish.samples:
        key = (t.meta.subject_id, t.session)
        p = by_key.get(key)
        if p is None:
            raise DatasetFormatError(f"subject {key[0]} session {key[1]} missing password half")
        if p.meta != t.meta:
            raise DatasetFormatError(f"metadata mismatch for subject {key[0]}")
        matched.add(key)
        samples.append(
            LabeledSample(
                meta=t.meta,
                session=t.session,
                features=concat_features(t.features, p.features),
            )
        )
    unmatched = set(by_key) - matched
    if unmatched:
        key = min(unmatched)
        raise DatasetFormatError(f"subject {key[0]} session {key[1]} missing turkish half")
    return Dataset(phrase_id=CONCAT_ID, samples=samples)
