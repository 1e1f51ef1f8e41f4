"""Constructive minimum-error solver for equiprobable pure qubit ensembles.

The strategy is solved for the Lagrangian operator C first; measurements
follow from it.  For each hypothesis that is ever detected,
det(C - p_k rho_k) must vanish, so the corresponding element is
proportional to the rank-1 projector onto that kernel; completeness then
fixes (or leaves free) the element weights.

Case analysis, in order:

1. two states: projective measurement from the eigenspaces of
   p1 rho1 - p2 rho2, any priors and purity;
2. all states sharing a Bloch latitude, with the equatorial candidate
   elements able to complete: C is diagonal in the latitude basis and the
   error depends only on the latitude;
3. states that form a POVM when positively rescaled: C = 1/N;
4. otherwise some hypotheses must get zero elements: search 3-subsets
   (closest to the equator first), then 2-subsets (least overlap first),
   accepting the first candidate whose C is feasible against the *full*
   ensemble.  Acceptance is always by verification, never by prescription.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .certify import Certificate, Povm, check_dual_feasible, check_global
from .ensembles import Ensemble, pairwise_overlap
from .errors import (
    DegenerateConfigurationError,
    NumericFailureError,
    SolverExhaustedError,
    UnsupportedRegimeError,
    ValidationError,
)
from .operators import (
    TOL_CERT,
    TOL_STRUCT,
    BlochDirection,
    HermitianOp2,
    orthonormal_frame,
    projector_from_direction,
)
from .weights import WeightPolytope, completeness_polytope, min_support_vertex

CASE_TWO_STATE = "two-state"
CASE_COMMON_LATITUDE = "common-latitude"
CASE_YUEN = "yuen-pom"
CASE_SUBSET = "subset"
CASE_BINARY_FALLBACK = "binary-fallback"


@dataclass(frozen=True, eq=False)
class LatitudeBasis:
    """Quantization axis in which all states share their diagonal elements.

    Geometrically: every Bloch vector has the same polar angle
    ``common_latitude`` from ``axis``.  The sign convention keeps
    cos(common_latitude) >= 0.
    """

    axis: BlochDirection
    longitude_reference: BlochDirection
    common_latitude: float

    def __post_init__(self):
        if abs(self.axis.vector @ self.longitude_reference.vector) > TOL_STRUCT:
            raise ValidationError("longitude reference must be orthogonal to axis")

    @property
    def cos_latitude(self) -> float:
        return math.cos(self.common_latitude)

    @property
    def sin_latitude(self) -> float:
        return math.sin(self.common_latitude)

    def frame(self) -> tuple[np.ndarray, np.ndarray]:
        e1 = self.longitude_reference.vector
        return e1, np.cross(self.axis.vector, e1)

    def longitude_of(self, b: np.ndarray) -> float:
        e1, e2 = self.frame()
        return math.atan2(float(b @ e2), float(b @ e1)) % (2.0 * math.pi)

    def equatorial_direction(self, phi: float) -> np.ndarray:
        e1, e2 = self.frame()
        return math.cos(phi) * e1 + math.sin(phi) * e2

    def latitude_deviation(self, b: np.ndarray) -> float:
        return abs(float(self.axis.vector @ b) - self.cos_latitude)


@dataclass(frozen=True, eq=False)
class CandidateElements:
    """Equatorial element directions at the states' longitudes."""

    longitudes: tuple[float, ...]
    directions: tuple[np.ndarray, ...]
    polytope: WeightPolytope
    merged_groups: tuple[tuple[int, ...], ...]   # longitude-coincident states

    @property
    def formable(self) -> bool:
        return self.polytope.feasible


@dataclass(frozen=True, eq=False)
class OptimalSolution:
    """A verified minimum-error strategy plus the structure behind it."""

    lagrangian: HermitianOp2
    p_error: float
    case: str
    active_set: tuple[int, ...]
    directions: dict
    weight_polytope: WeightPolytope | None
    canonical_povm: Povm
    certificate: Certificate
    notes: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        dirs = []
        for k in sorted(self.directions):
            d = self.directions[k]
            dirs.append({
                "index": int(k),
                "direction": None if d is None else [float(x) for x in d.vector],
            })
        return {
            "case": self.case,
            "p_error": float(self.p_error),
            "lagrangian": {
                "scalar": float(self.lagrangian.scalar),
                "bloch": [float(x) for x in self.lagrangian.bloch],
            },
            "active_set": [int(k) for k in self.active_set],
            "directions": dirs,
            "weight_polytope": (None if self.weight_polytope is None
                                else self.weight_polytope.to_dict()),
            "canonical_povm": self.canonical_povm.to_dict(),
            "notes": list(self.notes),
        }


def _unit_bloch(states) -> list[np.ndarray]:
    vecs = []
    for j, rho in enumerate(states):
        b = 2.0 * rho.bloch
        n = np.linalg.norm(b)
        if abs(n - 1.0) > TOL_CERT:
            raise ValidationError(f"state {j} is not pure (|b| = {n})")
        vecs.append(b / n)
    return vecs


def find_common_latitude_basis(states) -> LatitudeBasis | None:
    """The shared-latitude basis of pure states, or None if there is none.

    For three states the axis is the normal of their circle,
    (b1 - b2) x (b1 - b3); with more states the first non-degenerate triple
    fixes the axis and the rest are checked for consistency.
    """
    blochs = _unit_bloch(states)
    n_states = len(blochs)
    if n_states < 3:
        raise ValidationError("need at least 3 states to define a latitude")
    axis = None
    for triple in combinations(range(n_states), 3):
        i, j, k = triple
        cross = np.cross(blochs[i] - blochs[j], blochs[i] - blochs[k])
        norm = np.linalg.norm(cross)
        if norm >= 1e-10:
            axis = cross / norm
            break
    if axis is None:
        raise DegenerateConfigurationError(
            "all state triples are collinear or duplicated"
        )
    cos_lat = float(np.mean([axis @ blochs[t] for t in triple]))
    if cos_lat < 0.0:
        axis, cos_lat = -axis, -cos_lat
    elif cos_lat <= TOL_STRUCT:
        nz = np.nonzero(np.abs(axis) > TOL_STRUCT)[0][0]
        if axis[nz] < 0.0:
            axis = -axis
    deviations = [abs(float(axis @ b) - cos_lat) for b in blochs]
    if max(deviations) > TOL_CERT:
        return None
    theta = math.acos(min(1.0, max(-1.0, cos_lat)))
    e1, _ = orthonormal_frame(axis)
    return LatitudeBasis(BlochDirection(axis), BlochDirection(e1), theta)


def construct_candidate_povm(basis: LatitudeBasis, states) -> CandidateElements:
    """Equatorial directions at the states' longitudes, plus their weights.

    The weight equations are the completeness conditions; the candidate is
    formable iff they admit a nonnegative solution, which fails exactly when
    all longitudes fall inside one open semicircle.  Longitude-coincident
    states share a direction; their combined weight freedom shows up as
    extra polytope dimensions.
    """
    blochs = _unit_bloch(states)
    if basis.sin_latitude < TOL_CERT:
        raise DegenerateConfigurationError(
            "states sit at the basis pole; longitudes are undefined"
        )
    for j, b in enumerate(blochs):
        if basis.latitude_deviation(b) > TOL_CERT:
            raise ValidationError(f"state {j} is not on the common latitude")
    longitudes = tuple(basis.longitude_of(b) for b in blochs)
    directions = tuple(basis.equatorial_direction(phi) for phi in longitudes)
    merged = []
    used = set()
    for a in range(len(longitudes)):
        if a in used:
            continue
        group = [a]
        for b in range(a + 1, len(longitudes)):
            gap = abs(longitudes[a] - longitudes[b]) % (2.0 * math.pi)
            if min(gap, 2.0 * math.pi - gap) <= TOL_CERT:
                group.append(b)
                used.add(b)
        if len(group) > 1:
            merged.append(tuple(group))
    polytope = completeness_polytope(directions)
    return CandidateElements(longitudes, directions, polytope, tuple(merged))


def min_error_common_latitude(e: Ensemble, basis: LatitudeBasis) -> float:
    """Minimum error for equiprobable pure states sharing a latitude.

    Depends only on the latitude: with p = 1/N and the diagonal elements
    d+- = (1 +- cos theta)/2 read in the latitude basis,
    P_e = 1 - p - 2 p sqrt(d+ d-) = 1 - p - p sin(theta).
    """
    _require_equiprobable_pure(e)
    p = 1.0 / e.size
    d_plus = 0.5 * (1.0 + basis.cos_latitude)
    d_minus = 0.5 * (1.0 - basis.cos_latitude)
    return 1.0 - p - 2.0 * p * math.sqrt(max(d_plus * d_minus, 0.0))


def _latitude_lagrangian(basis: LatitudeBasis, p: float) -> HermitianOp2:
    # Zero-determinant conditions force the Bloch part (p cos/2) along the
    # axis; the diagonal of completeness fixes the scalar p(1 + sin)/2.
    scalar = 0.5 * p * (1.0 + basis.sin_latitude)
    bloch = 0.5 * p * basis.cos_latitude * basis.axis.vector
    return HermitianOp2(scalar, bloch)


def _zero_padded_povm(n: int, parts: dict) -> Povm:
    elements = [parts.get(k, HermitianOp2.zero()) for k in range(n)]
    return Povm(tuple(elements))


def _require_equiprobable_pure(e: Ensemble):
    if not e.equiprobable:
        raise UnsupportedRegimeError(
            "constructive solver requires equiprobable priors for N >= 3"
        )
    if not e.all_pure:
        raise UnsupportedRegimeError(
            "constructive solver requires pure states for N >= 3"
        )


def helstrom_two_state(e: Ensemble) -> OptimalSolution:
    """Optimal two-hypothesis measurement, any priors and purity.

    Projects onto the positive/negative eigenspaces of p1 rho1 - p2 rho2.
    The returned strategy is certified by check_global; that certificate,
    not the closed form, is the contract.
    """
    if e.size != 2:
        raise ValidationError("helstrom_two_state needs exactly 2 hypotheses")
    w1, w2 = e.weighted(0), e.weighted(1)
    diff = w1 - w2
    r = diff.bloch_norm
    mu_hi = diff.scalar + r
    mu_lo = diff.scalar - r
    notes: tuple[str, ...] = ()
    if mu_hi <= TOL_STRUCT and mu_lo >= -TOL_STRUCT:
        # p1 rho1 = p2 rho2: every strategy is optimal; guess the (first)
        # most likely hypothesis.
        k = 0 if e.priors[0] >= e.priors[1] else 1
        parts = {k: HermitianOp2.identity()}
        lag = e.weighted(k)
        directions = {k: None}
        active = (k,)
        polytope = None
        notes = ("degenerate: hypotheses are indistinguishable",)
    elif mu_lo > TOL_STRUCT:
        parts = {0: HermitianOp2.identity()}
        lag = w1
        directions = {0: None}
        active = (0,)
        polytope = None
    elif mu_hi < -TOL_STRUCT:
        parts = {1: HermitianOp2.identity()}
        lag = w2
        directions = {1: None}
        active = (1,)
        polytope = None
    else:
        v = BlochDirection(diff.bloch / r)
        parts = {0: projector_from_direction(v), 1: projector_from_direction(-v)}
        lag = w2 + mu_hi * parts[0]
        directions = {0: v, 1: -v}
        active = (0, 1)
        polytope = completeness_polytope([v.vector, -v.vector])
    povm = _zero_padded_povm(2, parts)
    cert = check_global(povm, e)
    if not cert.optimal:
        raise NumericFailureError(
            f"two-state construction failed its own certificate: {cert.verdict}"
        )
    return OptimalSolution(
        lagrangian=lag,
        p_error=1.0 - lag.trace,
        case=CASE_TWO_STATE,
        active_set=active,
        directions=directions,
        weight_polytope=polytope,
        canonical_povm=povm,
        certificate=cert,
        notes=notes,
    )


def check_yuen_case(e: Ensemble) -> np.ndarray | None:
    """Weights making the states themselves a POVM, or None.

    Seeks w_k > 0 with sum w_k = 2 and sum w_k b_k = 0.  On success the
    optimal Lagrangian is 1/N and P_e = 1 - 2/N.  The returned vector is
    the centroid of the solution polytope, which is strictly positive
    exactly when a strictly positive solution exists.
    """
    _require_equiprobable_pure(e)
    blochs = _unit_bloch(e.states)
    polytope = completeness_polytope(blochs)
    if not polytope.feasible:
        return None
    w = polytope.interior_point
    if w.min() <= TOL_STRUCT:
        return None
    return w


def _finalize(e: Ensemble, lag: HermitianOp2, case: str, candidate_indices,
              candidate_dirs, notes=()) -> OptimalSolution | None:
    """Assemble and certify a solution from directions; None if it fails."""
    polytope = completeness_polytope(list(candidate_dirs))
    if not polytope.feasible:
        return None
    weights = min_support_vertex(polytope)
    parts = {}
    directions = {}
    for col, k in enumerate(candidate_indices):
        directions[k] = BlochDirection.from_vector(candidate_dirs[col])
        if weights[col] > TOL_STRUCT:
            parts[k] = weights[col] * projector_from_direction(directions[k])
    active = tuple(sorted(parts))
    if len(active) > 4:
        return None
    povm = _zero_padded_povm(e.size, parts)
    cert = check_global(povm, e)
    if not cert.optimal:
        return None
    return OptimalSolution(
        lagrangian=lag,
        p_error=1.0 - lag.trace,
        case=case,
        active_set=active,
        directions=directions,
        weight_polytope=polytope,
        canonical_povm=povm,
        certificate=cert,
        notes=tuple(notes),
    )


def solve_equiprobable_pure(e: Ensemble) -> OptimalSolution:
    """Full case analysis for equiprobable pure states (N = 2: any ensemble).

    Tries, in order: the two-state solution, the common-latitude solution,
    the rescaled-states POVM, 3-subsets closest to the equator, and finally
    binary fallbacks on least-overlap pairs.  Every candidate is accepted
    only after passing dual feasibility against the full ensemble and the
    global certificate.
    """
    if e.size == 2:
        return helstrom_two_state(e)
    _require_equiprobable_pure(e)
    n = e.size
    p = 1.0 / n
    blochs = _unit_bloch(e.states)

    # All states on one latitude, candidate formable.
    try:
        basis = find_common_latitude_basis(e.states)
    except DegenerateConfigurationError:
        basis = None
    if basis is not None:
        try:
            cand = construct_candidate_povm(basis, e.states)
        except DegenerateConfigurationError:
            cand = None
        if cand is not None and cand.formable:
            notes = []
            if cand.merged_groups:
                notes.append(
                    "merged longitudes: " + repr([list(g) for g in cand.merged_groups])
                )
            sol = _finalize(e, _latitude_lagrangian(basis, p),
                            CASE_COMMON_LATITUDE, range(n), cand.directions,
                            notes)
            if sol is not None:
                return sol

    # States form a POVM under positive rescaling: C = 1/N.
    yuen_w = check_yuen_case(e)
    if yuen_w is not None:
        lag = HermitianOp2(1.0 / n, np.zeros(3))
        sol = _finalize(e, lag, CASE_YUEN, range(n), blochs)
        if sol is not None:
            return sol

    # 3-subsets, closest to the equator first.
    triples = []
    for subset in combinations(range(n), 3):
        try:
            sub_basis = find_common_latitude_basis([e.states[i] for i in subset])
        except DegenerateConfigurationError:
            continue
        if sub_basis is None:
            continue
        triples.append((abs(sub_basis.cos_latitude), subset, sub_basis))
    triples.sort(key=lambda item: (item[0], item[1]))
    for _, subset, sub_basis in triples:
        try:
            cand = construct_candidate_povm(sub_basis,
                                            [e.states[i] for i in subset])
        except DegenerateConfigurationError:
            continue
        if not cand.formable:
            continue
        lag = _latitude_lagrangian(sub_basis, p)
        if check_dual_feasible(lag, e).min() < -TOL_CERT:
            continue
        sol = _finalize(e, lag, CASE_SUBSET, subset, cand.directions)
        if sol is not None:
            return sol

    # Binary fallback on the least-overlapping feasible pair.
    pairs = sorted(combinations(range(n), 2),
                   key=lambda ij: (pairwise_overlap(e, *ij), ij))
    for i, j in pairs:
        diff = e.weighted(i) - e.weighted(j)
        r = diff.bloch_norm
        if r <= TOL_STRUCT:
            continue
        v = diff.bloch / r
        lag = e.weighted(j) + (diff.scalar + r) * projector_from_direction(
            BlochDirection(v))
        if check_dual_feasible(lag, e).min() < -TOL_CERT:
            continue
        sol = _finalize(e, lag, CASE_BINARY_FALLBACK, (i, j), (v, -v))
        if sol is not None:
            return sol

    raise SolverExhaustedError(
        "case analysis exhausted without a verified solution; "
        "run the dual oracle on this ensemble"
    )


@dataclass(frozen=True, eq=False)
class OptimalFamily:
    """All optimal strategies compatible with one optimal Lagrangian.

    ``statuses[k]`` is "active" when det(C - p_k rho_k) = 0 (a nonzero
    element is allowed, its direction fixed by the kernel), "inactive" when
    the element must vanish, and "free" when C - p_k rho_k is the zero
    operator (any effect works).  Weight freedom beyond dimension 0 means
    the optimum is non-unique.
    """

    statuses: tuple[str, ...]
    directions: dict
    polytope: WeightPolytope | None
    dimension: int | None
    non_unique: bool
    minimal_povm: Povm
    minimal_certificate: Certificate

    def to_dict(self) -> dict:
        dirs = []
        for k in sorted(self.directions):
            d = self.directions[k]
            dirs.append({"index": int(k),
                         "direction": [float(x) for x in d.vector]})
        return {
            "statuses": list(self.statuses),
            "directions": dirs,
            "weight_polytope": (None if self.polytope is None
                                else self.polytope.to_dict()),
            "dimension": self.dimension,
            "non_unique": self.non_unique,
            "minimal_povm": self.minimal_povm.to_dict(),
            "minimal_p_error": float(self.minimal_certificate.error_probability),
        }


def enumerate_optimal_family(sol: OptimalSolution, e: Ensemble) -> OptimalFamily:
    """Describe every optimal strategy sharing ``sol``'s Lagrangian."""
    statuses = []
    directions = {}
    free = []
    for k in range(e.size):
        m = sol.lagrangian - e.weighted(k)
        if m.op_norm() <= TOL_CERT:
            statuses.append("free")
            free.append(k)
        elif abs(m.det()) <= TOL_CERT and m.bloch_norm > TOL_CERT:
            statuses.append("active")
            directions[k] = BlochDirection.from_vector(-m.bloch)
        else:
            statuses.append("inactive")
    candidate = sorted(directions)
    polytope = None
    dimension: int | None = None
    if candidate:
        polytope = completeness_polytope([directions[k].vector for k in candidate])
        if polytope.feasible:
            dimension = polytope.dimension
    non_unique = bool(free) or (dimension is not None and dimension >= 1)

    parts = {}
    if polytope is not None and polytope.feasible:
        weights = min_support_vertex(polytope)
        for col, k in enumerate(candidate):
            if weights[col] > TOL_STRUCT:
                parts[k] = weights[col] * projector_from_direction(directions[k])
    elif free:
        # Fixed-direction completeness is unavailable; a free hypothesis can
        # absorb the identity (e.g. indistinguishable duplicates).
        parts[free[0]] = HermitianOp2.identity()
    else:
        raise NumericFailureError("no completable weight assignment found")
    minimal = _zero_padded_povm(e.size, parts)
    cert = check_global(minimal, e)
    if not cert.optimal:
        raise NumericFailureError(
            f"family's minimal strategy failed certification: {cert.verdict}"
        )
    return OptimalFamily(
        statuses=tuple(statuses),
        directions=directions,
        polytope=polytope,
        dimension=dimension,
        non_unique=non_unique,
        minimal_povm=minimal,
        minimal_certificate=cert,
    )


def povm_vertices(family: OptimalFamily, e: Ensemble) -> list[Povm]:
    """One POVM per polytope vertex (identical error probabilities)."""
    if family.polytope is None or not family.polytope.feasible:
        return [family.minimal_povm]
    candidate = sorted(family.directions)
    povms = []
    for vertex in family.polytope.vertices:
        parts = {}
        for col, k in enumerate(candidate):
            if vertex[col] > TOL_STRUCT:
                parts[k] = vertex[col] * projector_from_direction(
                    family.directions[k])
        povms.append(_zero_padded_povm(e.size, parts))
    return povms
