import math

import numpy as np
import pytest

from qdisc import (
    Ensemble,
    HermitianOp2,
    Povm,
    ValidationError,
    check_det_condition,
    check_dual_feasible,
    check_global,
    check_stationarity,
    compute_lagrangian,
    error_probability,
    load_povm,
    projector_from_direction,
    solve_dual,
)
from qdisc.certify import VERDICT_NON_OPTIMAL, VERDICT_OPTIMAL, VERDICT_STATIONARY
from qdisc.dual import random_povm
from qdisc.operators import BlochDirection

from _oracles import born_error, equatorial_ensemble, random_pure_ensemble

TRINE = equatorial_ensemble([0.0, 2 * math.pi / 3, 4 * math.pi / 3])


def trine_povm(order=(0, 1, 2)) -> Povm:
    els = [None] * 3
    for k, j in enumerate(order):
        els[k] = (2 / 3) * projector_from_direction(
            BlochDirection(TRINE.bloch(j)))
    return Povm(tuple(els))


def projective(direction) -> Povm:
    d = BlochDirection(np.asarray(direction, dtype=float))
    return Povm((projector_from_direction(d), projector_from_direction(-d)))


def test_povm_validation():
    with pytest.raises(ValidationError):
        Povm((projector_from_direction(BlochDirection([0, 0, 1.0])),) * 2)
    with pytest.raises(ValidationError):
        Povm((HermitianOp2(1.2, [0, 0, 0]), HermitianOp2(-0.2, [0, 0, 0])))


def test_povm_document_round_trip():
    p = trine_povm()
    again = load_povm(p.to_json())
    for a, b in zip(again.elements, p.elements):
        assert a.approx_eq(b, 1e-12)


def test_lagrangian_orthogonal_projective():
    e = Ensemble.from_bloch_vectors([[0, 0, 1], [0, 0, -1]])
    lag, residual = compute_lagrangian(projective([0, 0, 1]), e)
    assert residual <= 1e-15
    assert lag.hermitian_part().approx_eq(HermitianOp2(0.5, [0, 0, 0]), 1e-15)
    assert abs(lag.trace.real - 1.0) <= 1e-15
    assert abs(error_probability(projective([0, 0, 1]), e)) <= 1e-15


def test_lagrangian_trine():
    lag, residual = compute_lagrangian(trine_povm(), TRINE)
    assert residual <= 1e-12
    assert lag.hermitian_part().approx_eq(HermitianOp2(1 / 3, [0, 0, 0]), 1e-12)
    assert abs(lag.trace.real - 2 / 3) <= 1e-12
    assert abs(error_probability(trine_povm(), TRINE) - 1 / 3) <= 1e-12


def test_lagrangian_identical_states_guessing():
    e = Ensemble.from_bloch_vectors([[0, 0, 1], [0, 0, 1]])
    guess = Povm((HermitianOp2.identity(), HermitianOp2.zero()))
    lag, residual = compute_lagrangian(guess, e)
    assert residual <= 1e-15
    assert lag.hermitian_part().approx_eq(0.5 * e.states[0], 1e-15)
    assert abs(error_probability(guess, e) - 0.5) <= 1e-15


def test_error_probability_uniform_guess():
    rng = np.random.default_rng(12)
    for n in (2, 3, 5):
        e = random_pure_ensemble(rng, n, equiprobable=False)
        uniform = Povm(tuple((1.0 / n) * HermitianOp2.identity()
                             for _ in range(n)))
        assert abs(error_probability(uniform, e) - (1 - 1 / n)) <= 1e-12


def test_error_probability_matches_matrix_oracle():
    rng = np.random.default_rng(13)
    for _ in range(25):
        n = int(rng.integers(2, 6))
        e = random_pure_ensemble(rng, n, equiprobable=False)
        p = random_povm(n, rng)
        assert abs(error_probability(p, e) - born_error(e, p)) <= 1e-12


def test_error_probability_equals_one_minus_lagrangian_trace():
    rng = np.random.default_rng(14)
    for _ in range(25):
        n = int(rng.integers(2, 6))
        e = random_pure_ensemble(rng, n, equiprobable=False)
        p = random_povm(n, rng)
        lag, _ = compute_lagrangian(p, e)
        assert abs(error_probability(p, e)
                   - (1.0 - lag.hermitian_part().trace)) <= 1e-12


def test_global_helstrom_optimal():
    e = Ensemble.from_bloch_vectors([[0, 0, 1], [math.sin(0.8), 0, math.cos(0.8)]])
    diff = e.weighted(0) - e.weighted(1)
    cert = check_global(projective(diff.bloch / diff.bloch_norm), e)
    assert cert.verdict == VERDICT_OPTIMAL
    # dual oracle agrees with the certified value
    dual = solve_dual(e, seed=1)
    assert abs(cert.error_probability - dual.p_error) <= 1e-6


def test_global_swapped_trine_not_optimal():
    cert = check_global(trine_povm(order=(1, 0, 2)), TRINE)
    assert cert.verdict == VERDICT_NON_OPTIMAL
    assert cert.error_probability > 1 / 3


def test_global_guessing_on_orthogonal_is_stationary_only():
    e = Ensemble.from_bloch_vectors([[0, 0, 1], [0, 0, -1]])
    guess = Povm((HermitianOp2.identity(), HermitianOp2.zero()))
    cert = check_global(guess, e)
    # zero first derivative but infeasible slacks: a saddle, never "optimal"
    assert cert.verdict == VERDICT_STATIONARY
    assert cert.verdict != VERDICT_OPTIMAL
    assert cert.error_probability == 0.5


def test_stationarity_residuals_at_optimum():
    residuals = check_stationarity(trine_povm(), TRINE)
    assert residuals.max() <= 1e-12
    e = Ensemble.from_bloch_vectors([[0, 0, 1], [0, 0, -1]])
    assert check_stationarity(projective([0, 0, 1]), e).max() <= 1e-12


def test_dual_feasibility_examples():
    rng = np.random.default_rng(15)
    e = random_pure_ensemble(rng, 4, equiprobable=False)
    slacks = check_dual_feasible(HermitianOp2.identity(), e)
    assert np.all(slacks >= 1.0 - e.priors - 1e-12)
    assert check_dual_feasible(HermitianOp2.zero(), e).min() < -1e-3
    # c = p * identity on equiprobable pure states: slacks vanish exactly
    eq = random_pure_ensemble(rng, 4)
    c = HermitianOp2(0.25, [0, 0, 0])
    np.testing.assert_allclose(check_dual_feasible(c, eq), np.zeros(4),
                               atol=1e-15)


def test_det_condition():
    c = HermitianOp2(1 / 3, [0, 0, 0])
    assert check_det_condition(c, TRINE).all()
    shifted = HermitianOp2(0.5, [0, 0, 0])
    assert not check_det_condition(shifted, TRINE).any()


def test_certificate_serialization():
    cert = check_global(trine_povm(), TRINE)
    doc = cert.to_dict()
    assert doc["verdict"] == "optimal"
    assert len(doc["feasibility_slacks"]) == 3
    assert len(doc["stationarity_residuals"]) == 3
    assert abs(doc["error_probability"]
               - (1.0 - 2.0 * doc["lagrangian"]["scalar"])) <= 1e-12


def test_size_mismatch_rejected():
    with pytest.raises(ValidationError):
        error_probability(trine_povm(),
                          Ensemble.from_bloch_vectors([[0, 0, 1], [0, 0, -1]]))
