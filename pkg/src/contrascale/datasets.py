"""Bundled example contexts."""

from __future__ import annotations

from .context import FormalContext

__all__ = ["medical_diagnosis", "MEDICAL_DIAGNOSIS_ATTRIBUTES"]

# Clarified and reduced symptom/diagnosis context of 14 patients (from the
# UCI acute-inflammations data, scaled to binary attributes).  Attribute keys
# are single letters; the readable description of each column is below.
MEDICAL_DIAGNOSIS_ATTRIBUTES = {
    "a": "lumbar pain: yes",
    "b": "bladder inflammation: yes",
    "c": "burning: no",
    "d": "lumbar pain: no",
    "e": "nausea: no",
    "f": "burning: yes",
    "g": "temperature in [40.0, 42.0]",
    "h": "micturition pains: no",
    "i": "temperature in [35.0, 37.5]",
    "j": "pelvis nephritis: no",
    "k": "micturition pains: yes",
    "l": "pelvis nephritis: yes",
    "m": "urine pushing: yes",
    "n": "temperature in [37.5, 40.0]",
    "o": "bladder inflammation: no",
}

_PATIENTS = (
    ("111", "001110110100001"),
    ("119", "100011110001101"),
    ("31", "011110001110100"),
    ("32", "101010011100001"),
    ("17", "010111001110100"),
    ("27", "011110011100100"),
    ("105", "110001100011100"),
    ("58", "010111000110110"),
    ("65", "100011010001111"),
    ("103", "101000100011001"),
    ("56", "011110000110110"),
    ("98", "111000100011100"),
    ("43", "011110010100110"),
    ("50", "101010010100011"),
)


def medical_diagnosis() -> FormalContext:
    """14 patients x 15 symptom/diagnosis attributes, clarified and reduced."""
    objects = [name for name, _ in _PATIENTS]
    incidence = [[int(c) for c in bits] for _, bits in _PATIENTS]
    return FormalContext(objects, list(MEDICAL_DIAGNOSIS_ATTRIBUTES), incidence)
