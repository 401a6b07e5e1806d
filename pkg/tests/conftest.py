import numpy as np
import pytest

from keydyn.events import KeyEvent
from keydyn.phrases import PhraseSpec


def events_from_timings(spec: PhraseSpec, presses, releases, extra=()):
    """Build a sorted event stream from parallel press/release time lists."""
    evs = []
    for key, tp, tr in zip(spec.key_tokens, presses, releases):
        evs.append(KeyEvent(key=key, kind="press", t_us=int(tp)))
        evs.append(KeyEvent(key=key, kind="release", t_us=int(tr)))
    evs.extend(extra)
    evs.sort(key=lambda e: e.t_us)
    return evs


def random_session(spec: PhraseSpec, rng: np.random.Generator):
    """A random well-formed session, overlaps included, integer microseconds."""
    presses, releases = [], []
    t = int(rng.integers(0, 1000))
    for i in range(spec.n_keys):
        dwell = int(rng.integers(20_000, 250_000))
        presses.append(t)
        releases.append(t + dwell)
        # next press may land before this release (negative flight time)
        t += int(rng.integers(max(1, dwell // 2), 600_000))
    return events_from_timings(spec, presses, releases), presses, releases


def oracle_feature_vector(spec: PhraseSpec, presses, releases):
    """Independent brute-force recomputation straight from the timestamps."""
    out = []
    for i in range(spec.n_keys):
        out.append(releases[i] - presses[i])
        if i + 1 < spec.n_keys:
            out.append(presses[i + 1] - presses[i])
            out.append(presses[i + 1] - releases[i])
    return out


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
