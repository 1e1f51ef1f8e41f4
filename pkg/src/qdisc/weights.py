"""Nonnegative solutions of small linear systems A w = b, w >= 0.

The solution sets here are bounded polytopes (completeness fixes the weight
sum), so every vertex is a basic feasible solution: nonzero only on a
column subset of size <= rank(A).  With the handful of hypotheses this
package deals in, enumerating column subsets is exact, deterministic and
fast; no LP solver is involved.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

SOLVE_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class WeightPolytope:
    """Vertex description of {w >= 0 : A w = b}."""

    matrix: np.ndarray
    rhs: np.ndarray
    vertices: tuple[np.ndarray, ...]
    dimension: int

    @property
    def feasible(self) -> bool:
        return bool(self.vertices)

    @property
    def interior_point(self) -> np.ndarray | None:
        """Centroid of the vertices: a relative-interior point."""
        if not self.vertices:
            return None
        return np.mean(self.vertices, axis=0)

    def to_dict(self) -> dict:
        return {
            "dimension": int(self.dimension) if self.feasible else None,
            "vertices": [[float(x) for x in v] for v in self.vertices],
        }


def nonneg_solutions(matrix, rhs, tol: float = SOLVE_TOL) -> WeightPolytope:
    """Enumerate the vertices of {w >= 0 : A w = b}."""
    a = np.asarray(matrix, dtype=float)
    b = np.asarray(rhs, dtype=float)
    n_rows, n_cols = a.shape
    rank = np.linalg.matrix_rank(a, tol=1e-10)
    vertices: list[np.ndarray] = []
    size = min(rank, n_cols)
    for subset in combinations(range(n_cols), size):
        sub = a[:, subset]
        w_sub, *_ = np.linalg.lstsq(sub, b, rcond=None)
        if np.linalg.norm(sub @ w_sub - b) > tol:
            continue
        if w_sub.min() < -1e-10:
            continue
        w = np.zeros(n_cols)
        w[list(subset)] = np.maximum(w_sub, 0.0)
        if np.linalg.norm(a @ w - b) > tol:
            continue
        if not any(np.abs(w - v).max() <= 1e-9 for v in vertices):
            vertices.append(w)
    if not vertices:
        return WeightPolytope(a, b, (), -1)
    if len(vertices) == 1:
        dim = 0
    else:
        diffs = np.array([v - vertices[0] for v in vertices[1:]])
        dim = int(np.linalg.matrix_rank(diffs, tol=1e-9))
    return WeightPolytope(a, b, tuple(vertices), dim)


def completeness_system(directions) -> tuple[np.ndarray, np.ndarray]:
    """Equations for sum_k w_k (1 + n_k . sigma)/2 = 1.

    Rows: the weight sum (= 2) and the three Bloch components (= 0).
    """
    dirs = np.asarray(directions, dtype=float)
    a = np.vstack([np.ones(len(dirs)), dirs.T])
    b = np.array([2.0, 0.0, 0.0, 0.0])
    return a, b


def completeness_polytope(directions) -> WeightPolytope:
    a, b = completeness_system(directions)
    return nonneg_solutions(a, b)


def min_support_vertex(polytope: WeightPolytope) -> np.ndarray | None:
    """A vertex with the fewest nonzero weights (first among ties)."""
    if not polytope.feasible:
        return None
    best = None
    best_support = None
    for v in polytope.vertices:
        support = int(np.count_nonzero(v > 1e-12))
        if best is None or support < best_support:
            best, best_support = v, support
    return best
