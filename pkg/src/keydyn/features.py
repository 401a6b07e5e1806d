"""Digraph feature extraction.

The feature vector for an n-character phrase has 3n+1 integer values in
microseconds, laid out key by key:

    D(k1), PP(k1,k2), RP(k1,k2), D(k2), ..., D(kn+1)

where D is how long a key stays down, PP the press-to-press interval of
consecutive keys, and RP the release-to-press interval (negative when
keystrokes overlap). PP(a,b) == D(a) + RP(a,b) holds exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

from keydyn.events import KeyEvent, measured_keystrokes
from keydyn.phrases import PhraseSpec

CONCAT_ID = "concat"


@dataclass(frozen=True)
class FeatureVector:
    """Ordered digraph timings for one typing session of one phrase.

    ``phrase_id`` is a phrase name or "concat" for a joined
    Turkish+Password vector (62 values, Turkish half first).
    """

    phrase_id: str
    values: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.phrase_id == CONCAT_ID:
            if len(self.values) % 2 != 0 or (len(self.values) // 2 - 1) % 3 != 0:
                raise ValueError("concat vector must be two 3n+1 halves")
        elif (len(self.values) - 1) % 3 != 0:
            raise ValueError("vector length must be 3n+1")

    def __len__(self) -> int:
        return len(self.values)

    def halves(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        if self.phrase_id != CONCAT_ID:
            raise ValueError("not a concatenated vector")
        mid = len(self.values) // 2
        return self.values[:mid], self.values[mid:]

    def total_time_us(self) -> int:
        """Elapsed first-press to last-release time.

        Equals the sum of all press-to-press intervals plus the final
        key's duration. Concatenated vectors sum both phrase halves.
        """
        if self.phrase_id == CONCAT_ID:
            a, b = self.halves()
            return _segment_total(a) + _segment_total(b)
        return _segment_total(self.values)


def _segment_total(values: tuple[int, ...]) -> int:
    n_pairs = (len(values) - 1) // 3
    pp = sum(values[1 + 3 * i] for i in range(n_pairs))
    return pp + values[-1]


def extract_features(events: list[KeyEvent], spec: PhraseSpec) -> FeatureVector:
    """Compute the 3n+1 digraph vector from an accepted session.

    Modifier events contribute nothing; raises MalformedSessionError on
    a stream that validate_session rejects.
    """
    strokes = measured_keystrokes(events, spec)
    values: list[int] = []
    for i, (_, t_press, t_release) in enumerate(strokes):
        values.append(t_release - t_press)  # D(k_i)
        if i + 1 < len(strokes):
            next_press = strokes[i + 1][1]
            values.append(next_press - t_press)  # PP(k_i, k_i+1)
            values.append(next_press - t_release)  # RP(k_i, k_i+1)
    return FeatureVector(phrase_id=spec.phrase_id, values=tuple(values))


def concat_features(turkish: FeatureVector, password: FeatureVector) -> FeatureVector:
    """Join per-session Turkish and Password vectors, Turkish half first."""
    if turkish.phrase_id == password.phrase_id:
        raise ValueError("concat requires two different phrases")
    if turkish.phrase_id == CONCAT_ID or password.phrase_id == CONCAT_ID:
        raise ValueError("cannot concatenate an already concatenated vector")
    return FeatureVector(phrase_id=CONCAT_ID, values=turkish.values + password.values)


def feature_names(spec: PhraseSpec) -> list[str]:
    """Column names in vector order: H.<k>, DD.<k1>.<k2>, UD.<k1>.<k2>."""
    names: list[str] = []
    toks = spec.key_tokens
    for i, k in enumerate(toks):
        names.append(f"H.{k}")
        if i + 1 < len(toks):
            names.append(f"DD.{k}.{toks[i + 1]}")
            names.append(f"UD.{k}.{toks[i + 1]}")
    return names
