"""Hypothesis sets: density operators with prior probabilities.

The on-disk format is a JSON document

    {"states": [{"bloch": [x, y, z]} | {"angles": {"theta": t, "phi": p}},
                ...],
     "priors": [p1, ..., pN]}        # optional, defaults to equiprobable

Angles are radians and always denote a pure state; Bloch vectors may have
|b| <= 1 (mixed states allowed).  Numbers are 64-bit floats.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError
from .operators import (
    TOL_CERT,
    TOL_STRUCT,
    HermitianOp2,
    bloch_vector,
    density_from_bloch,
    is_pure,
)


@dataclass(frozen=True, eq=False)
class Ensemble:
    """Ordered density operators with priors summing to one."""

    states: tuple[HermitianOp2, ...]
    priors: np.ndarray
    duplicate_pairs: tuple[tuple[int, int], ...] = field(default=())

    def __post_init__(self):
        states = tuple(self.states)
        priors = np.asarray(self.priors, dtype=float)
        if len(states) < 2:
            raise ValidationError("an ensemble needs at least 2 states")
        if priors.shape != (len(states),):
            raise ValidationError(
                f"got {len(states)} states but {priors.size} priors"
            )
        if np.any(priors < -TOL_STRUCT):
            raise ValidationError("priors must be nonnegative", code="priors-sum")
        if abs(priors.sum() - 1.0) > TOL_STRUCT:
            raise ValidationError(
                f"priors must sum to 1, got {priors.sum()!r}", code="priors-sum"
            )
        for j, rho in enumerate(states):
            if abs(rho.scalar - 0.5) > TOL_STRUCT:
                raise ValidationError(f"state {j} does not have unit trace")
            if rho.bloch_norm > 0.5 + TOL_CERT:
                raise ValidationError(
                    f"state {j} has Bloch norm {2 * rho.bloch_norm} > 1",
                    code="bloch-norm",
                )
        dups = []
        for j in range(len(states)):
            for k in range(j + 1, len(states)):
                if np.abs(states[j].bloch - states[k].bloch).max() <= TOL_STRUCT:
                    dups.append((j, k))
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "priors", priors)
        object.__setattr__(self, "duplicate_pairs", tuple(dups))

    @property
    def size(self) -> int:
        return len(self.states)

    @classmethod
    def from_bloch_vectors(cls, vectors, priors=None) -> "Ensemble":
        states = [density_from_bloch(v) for v in vectors]
        n = len(states)
        if priors is None:
            priors = np.full(n, 1.0 / n)
        return cls(tuple(states), priors)

    def bloch(self, j: int) -> np.ndarray:
        return bloch_vector(self.states[j])

    def bloch_matrix(self) -> np.ndarray:
        return np.array([self.bloch(j) for j in range(self.size)])

    def weighted(self, j: int) -> HermitianOp2:
        """The operator p_j * rho_j."""
        return self.priors[j] * self.states[j]

    def is_pure(self, j: int) -> bool:
        return is_pure(self.states[j])

    @property
    def all_pure(self) -> bool:
        return all(self.is_pure(j) for j in range(self.size))

    @property
    def equiprobable(self) -> bool:
        return bool(np.abs(self.priors - 1.0 / self.size).max() <= TOL_STRUCT)

    def to_dict(self) -> dict:
        return {
            "states": [{"bloch": [float(x) for x in self.bloch(j)]}
                       for j in range(self.size)],
            "priors": [float(p) for p in self.priors],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _state_from_entry(entry, index: int) -> HermitianOp2:
    if not isinstance(entry, dict):
        raise ValidationError(f"state {index} is not an object", code="malformed")
    if ("bloch" in entry) == ("angles" in entry):
        raise ValidationError(
            f"state {index} must have exactly one of 'bloch' or 'angles'",
            code="malformed",
        )
    if "bloch" in entry:
        b = entry["bloch"]
        if not (isinstance(b, list) and len(b) == 3):
            raise ValidationError(
                f"state {index}: 'bloch' must be a 3-element array", code="malformed"
            )
        try:
            vec = [float(x) for x in b]
        except (TypeError, ValueError):
            raise ValidationError(
                f"state {index}: non-numeric Bloch component", code="malformed"
            ) from None
        return density_from_bloch(vec)
    ang = entry["angles"]
    if not isinstance(ang, dict) or set(ang) != {"theta", "phi"}:
        raise ValidationError(
            f"state {index}: 'angles' must hold 'theta' and 'phi'", code="malformed"
        )
    try:
        theta, phi = float(ang["theta"]), float(ang["phi"])
    except (TypeError, ValueError):
        raise ValidationError(
            f"state {index}: non-numeric angle", code="malformed"
        ) from None
    b = [math.sin(theta) * math.cos(phi), math.sin(theta) * math.sin(phi),
         math.cos(theta)]
    return density_from_bloch(b)


def ensemble_from_dict(doc) -> Ensemble:
    if not isinstance(doc, dict) or "states" not in doc:
        raise ValidationError("document must be an object with 'states'",
                              code="malformed")
    raw_states = doc["states"]
    if not isinstance(raw_states, list) or len(raw_states) < 2:
        raise ValidationError("'states' must list at least 2 states",
                              code="malformed")
    states = tuple(_state_from_entry(s, j) for j, s in enumerate(raw_states))
    n = len(states)
    if "priors" in doc and doc["priors"] is not None:
        raw = doc["priors"]
        if not isinstance(raw, list):
            raise ValidationError("'priors' must be an array", code="malformed")
        try:
            priors = np.array([float(p) for p in raw])
        except (TypeError, ValueError):
            raise ValidationError("non-numeric prior", code="malformed") from None
    else:
        priors = np.full(n, 1.0 / n)
    return Ensemble(states, priors)


def load_ensemble(text: str) -> Ensemble:
    """Parse and validate an ensemble from its JSON document."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"invalid JSON: {exc}", code="malformed") from None
    return ensemble_from_dict(doc)


def load_ensemble_file(path) -> Ensemble:
    with open(path, "r", encoding="utf-8") as fh:
        return load_ensemble(fh.read())


def pairwise_overlap(e: Ensemble, j: int, k: int) -> float:
    """(1 + b_j . b_k)/2: the squared inner product for pure pairs.

    For mixed inputs the same expression equals tr(rho_j rho_k), which is
    what the binary-fallback ordering uses.
    """
    if not (0 <= j < e.size and 0 <= k < e.size):
        raise ValidationError(f"state index out of range: ({j}, {k})")
    return 0.5 * (1.0 + float(e.bloch(j) @ e.bloch(k)))
