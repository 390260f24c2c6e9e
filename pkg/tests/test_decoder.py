import numpy as np
import pytest

from qdecode.codebook import codeword_matrix, make_codebook, overlap_matrix
from qdecode.decoder import (
    MeasurementSet,
    bayes_cost_reduction,
    channel_and_information,
    error_probability,
    helstrom_binary,
    mutual_information,
    optimal_measurement,
    square_root_measurement,
    srm_optimality_check,
)
from qdecode.capacity import GAIN_CODE, binary_entropy
from qdecode.errors import ContractError, DegeneracyError
from qdecode.linalg import sqrtm_psd
from qdecode.reference import binary_helstrom, gain_code_information, pair_error, pair_measurement

P2 = 0.03352384841237588


def test_srm_pair_code():
    cb = make_codebook(0.6, ["++", "--"])
    ms = square_root_measurement(cb)
    assert ms.is_orthonormal()
    assert error_probability(cb, ms) == pytest.approx(P2, abs=1e-12)
    assert pair_error(0.6) == pytest.approx(0.0335239, abs=1e-7)
    # matches the closed-form optimal vectors
    for v, w in zip(ms.vectors, pair_measurement(0.6)):
        assert np.allclose(v, w, atol=1e-12)


def test_srm_error_equals_sqrt_gram_diagonal():
    cb = make_codebook(0.6, ["++", "--"])
    d = np.diag(sqrtm_psd(overlap_matrix(cb))).real
    assert error_probability(cb, square_root_measurement(cb)) == pytest.approx(1 - np.sum(d**2), abs=1e-12)


def test_srm_orthogonal_codewords():
    cb = make_codebook(0.0, ["++", "-+", "--"])
    assert error_probability(cb, square_root_measurement(cb)) == pytest.approx(0, abs=1e-14)


def test_srm_rank_deficiency():
    cb = make_codebook(0.999999999, ["++", "--"])
    with pytest.raises(DegeneracyError) as err:
        square_root_measurement(cb, rank_tol=1e-6)
    assert set(err.value.offending) == {"++", "--"}


def test_srm_optimality_check():
    assert srm_optimality_check(make_codebook(0.6, ["++", "--"]))
    assert not srm_optimality_check(make_codebook(0.6, ["++", "--"], [0.9, 0.1]))
    assert srm_optimality_check(make_codebook(0.6, ["+-"]))


def test_helstrom_examples():
    s1 = np.array([1.0, 0.0])
    s2 = np.array([0.36, np.sqrt(1 - 0.36**2)])
    err, (w1, w2) = helstrom_binary(s1, s2, 0.5, 0.5)
    assert err == pytest.approx(0.0335239, abs=1e-7)
    assert abs(np.vdot(w1, w2)) < 1e-12
    assert 1 - 0.5 * abs(np.vdot(s1, w1)) ** 2 - 0.5 * abs(np.vdot(s2, w2)) ** 2 == pytest.approx(err, abs=1e-12)
    assert helstrom_binary(s1, np.array([0.0, 1.0]), 0.5, 0.5)[0] == pytest.approx(0)
    assert helstrom_binary(s1, s1, 0.5, 0.5)[0] == pytest.approx(0.5)


def test_bayes_cost_on_symmetric_code_is_idle():
    cb = make_codebook(0.6, ["++", "--"])
    srm = square_root_measurement(cb)
    out = bayes_cost_reduction(cb, srm)
    assert out.iterations == 1
    assert abs(error_probability(cb, out) - error_probability(cb, srm)) < 1e-12


def test_bayes_cost_unequal_priors():
    cb = make_codebook(0.6, ["++", "--"], [0.7, 0.3])
    out = optimal_measurement(cb)
    # 1 - 4 * 0.21 * 0.6**4 = 0.944**2, so the bound is 0.028 exactly
    assert error_probability(cb, out) == pytest.approx(0.028, abs=1e-10)
    assert error_probability(cb, out) == pytest.approx(binary_helstrom(0.7, 0.3, 0.36), abs=1e-8)


def test_bayes_cost_single_word():
    cb = make_codebook(0.6, ["+-"])
    start = square_root_measurement(cb)
    out = bayes_cost_reduction(cb, start)
    assert np.allclose(out.matrix, start.matrix)


def test_bayes_cost_rejects_non_orthonormal():
    cb = make_codebook(0.6, ["++", "--"])
    bad = MeasurementSet((np.array([1, 0, 0, 0]), np.array([1, 1, 0, 0]) / np.sqrt(2)), (0, 1))
    with pytest.raises(ContractError):
        bayes_cost_reduction(cb, bad)


def test_random_measurement_not_better_than_optimal():
    rng = np.random.default_rng(3)
    cb = make_codebook(0.6, ["++", "--"])
    q, _ = np.linalg.qr(rng.normal(size=(4, 4)))
    ms = MeasurementSet(tuple(q.T[:2]), (0, 1))
    pe = error_probability(cb, ms)
    assert 0 <= pe <= 1 and pe >= P2 - 1e-12


def test_channel_information_pair():
    cb = make_codebook(0.6, ["++", "--"])
    rep = channel_and_information(cb, square_root_measurement(cb))
    assert rep.complete
    assert np.allclose(rep.channel.sum(axis=1), 1)
    assert rep.mutual_info_bits == pytest.approx(1 - binary_entropy(P2), abs=1e-12)
    assert rep.mutual_info_bits == pytest.approx(0.788233, abs=1e-6)


def test_channel_information_orthogonal():
    cb = make_codebook(0.0, GAIN_CODE)
    rep = channel_and_information(cb, square_root_measurement(cb))
    assert rep.mutual_info_bits == pytest.approx(2.0)


def test_gain_code_information():
    cb = make_codebook(0.9, GAIN_CODE)
    rep = channel_and_information(cb, square_root_measurement(cb))
    assert rep.mutual_info_bits == pytest.approx(gain_code_information(0.9), abs=1e-12)
    assert rep.mutual_info_bits == pytest.approx(0.44885, abs=5e-5)
    assert rep.channel[0, 0] == pytest.approx(0.62398, abs=5e-6)


def test_channel_matches_sqrt_gram():
    rng = np.random.default_rng(7)
    words = ["++-+", "-+--", "+-+-", "--++", "++++"]
    z = rng.dirichlet(np.ones(len(words)))
    cb = make_codebook(0.55, words, z)
    rep = channel_and_information(cb, square_root_measurement(cb))
    r = sqrtm_psd(overlap_matrix(cb))
    # inconclusive column is absent: the SRM is complete on the signal span
    assert np.allclose(rep.channel[:, : cb.M], np.abs(r) ** 2 / z[:, None], atol=1e-9)


def test_mutual_information_bounds():
    assert mutual_information([0.5, 0.5], np.eye(2)) == pytest.approx(1.0)
    assert mutual_information([0.5, 0.5], np.full((2, 2), 0.5)) == pytest.approx(0.0)


def test_incomplete_measurement_flagged():
    cb = make_codebook(0.3, ["++", "--"])
    ms = MeasurementSet((np.eye(4)[0], np.eye(4)[1]), (0, 1))
    rep = channel_and_information(cb, ms)
    assert not rep.complete and rep.channel.shape == (2, 3)
    assert np.allclose(rep.channel.sum(axis=1), 1)
