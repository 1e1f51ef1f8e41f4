import math

import numpy as np
import pytest

from qdisc import Ensemble, ValidationError, load_ensemble, pairwise_overlap

from _oracles import random_mixed_ensemble, random_rotation, rotated

TRINE_DOC = """
{"states": [{"angles": {"theta": 1.5707963267948966, "phi": 0.0}},
            {"angles": {"theta": 1.5707963267948966, "phi": 2.0943951023931953}},
            {"angles": {"theta": 1.5707963267948966, "phi": 4.1887902047863905}}]}
"""


def test_load_antipodal_pair():
    e = load_ensemble('{"states": [{"bloch": [0,0,1]}, {"bloch": [0,0,-1]}],'
                      ' "priors": [0.5, 0.5]}')
    assert e.size == 2
    np.testing.assert_allclose(e.bloch(0), [0, 0, 1])
    np.testing.assert_allclose(e.priors, [0.5, 0.5])


def test_load_trine_defaults_to_equiprobable():
    e = load_ensemble(TRINE_DOC)
    assert e.size == 3
    np.testing.assert_allclose(e.priors, [1 / 3] * 3)
    assert e.all_pure and e.equiprobable
    np.testing.assert_allclose(e.bloch(1), [-0.5, math.sqrt(3) / 2, 0],
                               atol=1e-15)


def test_priors_must_sum_to_one():
    with pytest.raises(ValidationError) as err:
        load_ensemble('{"states": [{"bloch": [0,0,1]}, {"bloch": [0,0,-1]}],'
                      ' "priors": [0.6, 0.6]}')
    assert err.value.code == "priors-sum"


def test_bloch_norm_rejected():
    with pytest.raises(ValidationError) as err:
        load_ensemble('{"states": [{"bloch": [0,0,1.2]}, {"bloch": [0,0,-1]}]}')
    assert err.value.code == "bloch-norm"


@pytest.mark.parametrize("text", [
    "not json",
    '{"priors": [1.0]}',
    '{"states": [{"bloch": [0,0,1]}]}',
    '{"states": [{"bloch": [0,0]}, {"bloch": [0,0,1]}]}',
    '{"states": [{"bloch": [0,0,1], "angles": {"theta": 0, "phi": 0}},'
    ' {"bloch": [0,0,-1]}]}',
    '{"states": [{"angles": {"theta": 0}}, {"bloch": [0,0,-1]}]}',
    '{"states": [{"bloch": ["a",0,1]}, {"bloch": [0,0,-1]}]}',
])
def test_malformed_documents(text):
    with pytest.raises(ValidationError) as err:
        load_ensemble(text)
    assert err.value.code == "malformed"


def test_round_trip():
    e = load_ensemble(TRINE_DOC)
    again = load_ensemble(e.to_json())
    for j in range(e.size):
        assert np.abs(again.bloch(j) - e.bloch(j)).max() <= 1e-12
    assert np.abs(again.priors - e.priors).max() <= 1e-12


def test_weighted_state_trace():
    e = load_ensemble('{"states": [{"bloch": [0,0,1]}, {"bloch": [1,0,0]}],'
                      ' "priors": [0.7, 0.3]}')
    assert abs(e.weighted(0).trace - 0.7) <= 1e-15
    assert abs(e.weighted(1).trace - 0.3) <= 1e-15


def test_overlap_orthogonal_identical_trine():
    e = Ensemble.from_bloch_vectors([[0, 0, 1], [0, 0, -1], [0, 0, 1],
                                     [-0.5, math.sqrt(3) / 2, 0], [1, 0, 0]])
    assert abs(pairwise_overlap(e, 0, 1)) <= 1e-15          # orthogonal
    assert abs(pairwise_overlap(e, 0, 2) - 1.0) <= 1e-15    # identical
    # trine neighbours sit 120 degrees apart: (1 + cos 120) / 2 = 1/4
    assert abs(pairwise_overlap(e, 3, 4) - 0.25) <= 1e-12
    assert abs(pairwise_overlap(e, 4, 3) - 0.25) <= 1e-12
    assert abs(pairwise_overlap(e, 4, 4) - 1.0) <= 1e-15


def test_overlap_rotation_invariant():
    rng = np.random.default_rng(11)
    for _ in range(10):
        e = random_mixed_ensemble(rng, 4)
        r = random_rotation(rng)
        e_rot = rotated(e, r)
        for j in range(4):
            for k in range(4):
                assert abs(pairwise_overlap(e, j, k)
                           - pairwise_overlap(e_rot, j, k)) <= 1e-12


def test_duplicates_flagged():
    e = Ensemble.from_bloch_vectors([[0, 0, 1], [0, 0, 1], [1, 0, 0]])
    assert e.duplicate_pairs == ((0, 1),)


def test_mixed_state_overlap_is_purity_product():
    e = Ensemble.from_bloch_vectors([[0, 0, 0.5], [0.2, 0, 0]],
                                    priors=[0.5, 0.5])
    # tr(rho1 rho2) = (1 + b1 . b2)/2 for qubits
    assert abs(pairwise_overlap(e, 0, 1) - 0.5) <= 1e-15
    assert not e.is_pure(0)
