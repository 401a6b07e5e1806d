"""Keystroke-dynamics toolkit for child/adult typist classification.

Converts raw key press/release streams into digraph timing vectors,
trains a suite of distance, discriminant, kernel, and neural classifiers,
and evaluates them with subject-grouped cross-validation and ROC/EER
metrics, including an impostor-resistance protocol.
"""

__version__ = "0.1.0"

from keydyn.phrases import PASSWORD, PHRASES, TURKISH, PhraseSpec
from keydyn.events import KeyEvent, SessionVerdict, validate_session
from keydyn.features import FeatureVector, concat_features, extract_features

__all__ = [
    "PASSWORD",
    "PHRASES",
    "TURKISH",
    "PhraseSpec",
    "KeyEvent",
    "SessionVerdict",
    "validate_session",
    "FeatureVector",
    "concat_features",
    "extract_features",
]
