"""Monte Carlo simulation of the discrimination experiment.

Each trial draws a preparation j from the priors and an outcome k from the
Born probabilities tr(Pi_k rho_j).  Randomness is counter-based: trial i
consumes the two 64-bit Philox words at stream positions (2i, 2i + 1) for
key ``seed``, so results are reproducible and independent of how the trial
range is partitioned.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .certify import Povm, error_probability
from .ensembles import Ensemble
from .errors import ValidationError
from .operators import TOL_STRUCT, trace_product

_CHUNK = 1 << 19


@dataclass(frozen=True, eq=False)
class SimulationReport:
    trials: int
    confusion: np.ndarray          # empirical P(k|j); rows sum to 1
    empirical_error: float
    standard_error: float          # from the analytic P_e
    analytic_error: float
    seed: int

    def to_dict(self) -> dict:
        return {
            "trials": int(self.trials),
            "empirical_error": float(self.empirical_error),
            "standard_error": float(self.standard_error),
            "analytic_error": float(self.analytic_error),
            "seed": int(self.seed),
            "confusion": [[float(x) for x in row] for row in self.confusion],
        }

    def confusion_csv(self) -> str:
        n = self.confusion.shape[0]
        lines = ["prepared," + ",".join(f"outcome_{k}" for k in range(n))]
        for j in range(n):
            lines.append(
                str(j) + "," + ",".join(f"{x:.17g}" for x in self.confusion[j])
            )
        return "\n".join(lines) + "\n"


def outcome_matrix(e: Ensemble, p: Povm) -> np.ndarray:
    """Born probabilities P(k|j) = tr(Pi_k rho_j), rows renormalized.

    Entries in [-1e-12, 0) are rounded up to zero; anything lower means the
    strategy is not a valid POVM for this purpose.
    """
    if p.size != e.size:
        raise ValidationError(
            f"POVM has {p.size} elements but the ensemble has {e.size} states"
        )
    n = e.size
    probs = np.empty((n, n))
    for j in range(n):
        for k in range(n):
            probs[j, k] = trace_product(e.states[j], p.elements[k])
    if probs.min() < -TOL_STRUCT:
        raise ValidationError(
            f"outcome probability {probs.min()} below -1e-12: invalid POVM"
        )
    probs = np.maximum(probs, 0.0)
    rows = probs.sum(axis=1)
    # Completeness holds to 1e-9, so each row sums to 1 within a few 1e-9.
    if np.abs(rows - 1.0).max() > 1e-8:
        raise ValidationError("per-trial outcome distribution does not sum to 1")
    return probs / rows[:, None]


def _trial_words(seed: int, start: int, count: int) -> np.ndarray:
    """Uniforms for trials [start, start + count), two per trial."""
    first_word = 2 * start
    counter = first_word // 4
    offset = first_word % 4
    raw = np.random.Philox(key=seed, counter=counter).random_raw(
        offset + 2 * count)
    words = raw[offset:]
    return (words >> np.uint64(11)) * (2.0 ** -53)


def simulate(e: Ensemble, p: Povm, trials: int, seed: int = 0) -> SimulationReport:
    """Run the experiment ``trials`` times; deterministic per seed."""
    if trials < 1:
        raise ValidationError("trials must be >= 1")
    n = e.size
    probs = outcome_matrix(e, p)
    prior_edges = np.cumsum(e.priors)
    prior_edges[-1] = 1.0
    outcome_edges = np.cumsum(probs, axis=1)
    outcome_edges[:, -1] = 1.0
    counts = np.zeros((n, n), dtype=np.int64)
    done = 0
    while done < trials:
        batch = min(_CHUNK, trials - done)
        u = _trial_words(seed, done, batch)
        prepared = np.searchsorted(prior_edges, u[0::2], side="right")
        measured = np.empty(batch, dtype=np.int64)
        for j in range(n):
            mask = prepared == j
            if mask.any():
                measured[mask] = np.searchsorted(
                    outcome_edges[j], u[1::2][mask], side="right")
        np.add.at(counts, (prepared, measured), 1)
        done += batch
    row_totals = counts.sum(axis=1)
    confusion = np.zeros((n, n))
    sampled = row_totals > 0
    confusion[sampled] = counts[sampled] / row_totals[sampled, None]
    analytic = error_probability(p, e)
    empirical = 1.0 - counts.trace() / trials
    return SimulationReport(
        trials=trials,
        confusion=confusion,
        empirical_error=float(empirical),
        standard_error=math.sqrt(analytic * (1.0 - analytic) / trials),
        analytic_error=analytic,
        seed=seed,
    )
