"""Optimality certificates for discrimination strategies.

A strategy is optimal iff the weighted outcome operator
C = sum_j p_j rho_j Pi_j is Hermitian and C - p_j rho_j is positive
semidefinite for every hypothesis.  The weaker stationarity conditions
(C - p_k rho_k) Pi_k = 0 say only that the error probability has zero
first derivative, so they never certify optimality on their own.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .ensembles import Ensemble
from .errors import ValidationError
from .operators import (
    TOL_CERT,
    TOL_STRUCT,
    GeneralOp2,
    HermitianOp2,
    op_mul,
    trace_product,
)

VERDICT_OPTIMAL = "optimal"
VERDICT_STATIONARY = "stationary-only"
VERDICT_NON_OPTIMAL = "non-optimal"


@dataclass(frozen=True, eq=False)
class Povm:
    """Ordered effects, one per hypothesis; zero operators allowed."""

    elements: tuple[HermitianOp2, ...]

    def __post_init__(self):
        elements = tuple(self.elements)
        if not elements:
            raise ValidationError("a POVM needs at least one element")
        total = HermitianOp2.zero()
        for k, el in enumerate(elements):
            hi, lo = el.eigenvalues()
            if lo < -TOL_STRUCT or hi > 1.0 + TOL_STRUCT:
                raise ValidationError(
                    f"element {k} has eigenvalues ({hi}, {lo}) outside [0, 1]"
                )
            total = total + el
        defect = total - HermitianOp2.identity()
        if defect.op_norm() > TOL_CERT:
            raise ValidationError(
                f"elements sum to identity only within {defect.op_norm()}"
            )
        object.__setattr__(self, "elements", elements)

    @property
    def size(self) -> int:
        return len(self.elements)

    def to_dict(self) -> dict:
        return {
            "elements": [
                {"scalar": float(el.scalar), "bloch": [float(x) for x in el.bloch]}
                for el in self.elements
            ]
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def povm_from_dict(doc) -> Povm:
    if not isinstance(doc, dict) or "elements" not in doc:
        raise ValidationError("document must be an object with 'elements'",
                              code="malformed")
    raw = doc["elements"]
    if not isinstance(raw, list) or not raw:
        raise ValidationError("'elements' must be a non-empty array",
                              code="malformed")
    elements = []
    for k, entry in enumerate(raw):
        if (not isinstance(entry, dict) or "scalar" not in entry
                or "bloch" not in entry):
            raise ValidationError(
                f"element {k} must be an object with 'scalar' and 'bloch'",
                code="malformed",
            )
        b = entry["bloch"]
        if not (isinstance(b, list) and len(b) == 3):
            raise ValidationError(
                f"element {k}: 'bloch' must be a 3-element array", code="malformed"
            )
        try:
            elements.append(HermitianOp2(float(entry["scalar"]),
                                         [float(x) for x in b]))
        except (TypeError, ValueError):
            raise ValidationError(
                f"element {k}: non-numeric entry", code="malformed"
            ) from None
    return Povm(tuple(elements))


def load_povm(text: str) -> Povm:
    """Parse a POVM document; run reports containing one are unwrapped."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"invalid JSON: {exc}", code="malformed") from None
    if isinstance(doc, dict) and "elements" not in doc:
        if isinstance(doc.get("solution"), dict) \
                and "canonical_povm" in doc["solution"]:
            doc = doc["solution"]["canonical_povm"]
        elif "recovered_povm" in doc:
            doc = doc["recovered_povm"]
        elif "povm" in doc:
            doc = doc["povm"]
    return povm_from_dict(doc)


def load_povm_file(path) -> Povm:
    with open(path, "r", encoding="utf-8") as fh:
        return load_povm(fh.read())


def _require_match(p: Povm, e: Ensemble):
    if p.size != e.size:
        raise ValidationError(
            f"POVM has {p.size} elements but the ensemble has {e.size} states"
        )


def compute_lagrangian(p: Povm, e: Ensemble) -> tuple[GeneralOp2, float]:
    """sum_j p_j rho_j Pi_j and the norm of its anti-Hermitian part."""
    _require_match(p, e)
    scalar = 0.0 + 0.0j
    bloch = np.zeros(3, dtype=complex)
    for j in range(e.size):
        term = op_mul(e.weighted(j), p.elements[j])
        scalar += term.scalar
        bloch = bloch + term.bloch
    lag = GeneralOp2(scalar, bloch)
    return lag, lag.antihermitian_norm()


def error_probability(p: Povm, e: Ensemble) -> float:
    """1 - sum_k p_k tr(rho_k Pi_k), clamped to [0, 1] after a tolerance check."""
    _require_match(p, e)
    success = sum(
        trace_product(e.weighted(k), p.elements[k]) for k in range(e.size)
    )
    pe = 1.0 - success
    if pe < -TOL_STRUCT or pe > 1.0 + TOL_STRUCT:
        raise ValidationError(f"error probability {pe} outside [0, 1]")
    return min(1.0, max(0.0, pe))


def check_stationarity(p: Povm, e: Ensemble) -> np.ndarray:
    """Spectral norms of (C - p_k rho_k) Pi_k, one per hypothesis."""
    _require_match(p, e)
    c = compute_lagrangian(p, e)[0].hermitian_part()
    return np.array([
        op_mul(c - e.weighted(k), p.elements[k]).op_norm() for k in range(e.size)
    ])


def check_dual_feasible(c: HermitianOp2, e: Ensemble) -> np.ndarray:
    """Minimum eigenvalues of c - p_k rho_k; feasible iff all >= -1e-9."""
    return np.array([(c - e.weighted(k)).min_eigenvalue() for k in range(e.size)])


def check_det_condition(c: HermitianOp2, e: Ensemble,
                        tol: float = TOL_CERT) -> np.ndarray:
    """Which hypotheses admit a nonzero element: det(c - p_k rho_k) ~ 0.

    Hypotheses where this fails must receive zero POVM elements.
    """
    return np.array([abs((c - e.weighted(k)).det()) <= tol for k in range(e.size)])


@dataclass(frozen=True, eq=False)
class Certificate:
    """Full diagnosis of a strategy against the optimality conditions."""

    lagrangian: HermitianOp2
    error_probability: float
    feasibility_slacks: np.ndarray
    stationarity_residuals: np.ndarray
    hermiticity_residual: float
    verdict: str

    @property
    def optimal(self) -> bool:
        return self.verdict == VERDICT_OPTIMAL

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "error_probability": float(self.error_probability),
            "lagrangian": {
                "scalar": float(self.lagrangian.scalar),
                "bloch": [float(x) for x in self.lagrangian.bloch],
            },
            "hermiticity_residual": float(self.hermiticity_residual),
            "feasibility_slacks": [float(s) for s in self.feasibility_slacks],
            "stationarity_residuals": [float(r) for r in self.stationarity_residuals],
        }


def check_global(p: Povm, e: Ensemble, tol: float = TOL_CERT) -> Certificate:
    """Certify or refute optimality of ``p`` for ``e``.

    "optimal": the Lagrangian operator is Hermitian within ``tol`` and every
    feasibility slack is >= -tol.  "stationary-only": the per-hypothesis
    stationarity residuals pass but some slack fails (a zero-derivative
    point that is not a global optimum).  Otherwise "non-optimal".
    """
    _require_match(p, e)
    lag, herm_residual = compute_lagrangian(p, e)
    c = lag.hermitian_part()
    slacks = check_dual_feasible(c, e)
    residuals = np.array([
        op_mul(c - e.weighted(k), p.elements[k]).op_norm() for k in range(e.size)
    ])
    pe = error_probability(p, e)
    if herm_residual <= tol and slacks.min() >= -tol:
        verdict = VERDICT_OPTIMAL
    elif herm_residual <= tol and residuals.max() <= tol:
        verdict = VERDICT_STATIONARY
    else:
        verdict = VERDICT_NON_OPTIMAL
    return Certificate(c, pe, slacks, residuals, herm_residual, verdict)
