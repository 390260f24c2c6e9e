import numpy as np
import pytest

from qdecode.errors import ContractError, DomainError, SizeError
from qdecode.linalg import (
    fix_phase,
    func_on_span,
    global_phase_distance,
    gram_schmidt_extend,
    herm_eig,
    inv_sqrtm_psd,
    lowdin_orthonormalize,
    sqrtm_psd,
    tensor,
)
from qdecode.codebook import make_letter_pair

GRAM = np.array([[0.5, 0.18], [0.18, 0.5]])


def test_tensor_basis_and_identity():
    up = np.array([1, 0])
    assert np.allclose(tensor(up, up), [1, 0, 0, 0])
    assert np.allclose(tensor(np.eye(2), np.eye(2)), np.eye(4))


def test_tensor_letters():
    lp = make_letter_pair(0.6)
    assert np.allclose(tensor(lp.plus, lp.plus), [0.9, -0.3, -0.3, 0.1])


def test_tensor_size_cap():
    big = np.ones(2**7)
    with pytest.raises(SizeError):
        tensor(big, big)


def test_herm_eig_examples():
    w, _ = herm_eig(GRAM)
    assert np.allclose(w, [0.32, 0.68])
    assert np.allclose(herm_eig(np.eye(2))[0], [1, 1])
    assert np.allclose(herm_eig(np.diag([2.0, 3.0]))[0], [2, 3])


def test_herm_eig_rejects_non_hermitian():
    with pytest.raises(ContractError):
        herm_eig(np.array([[0, 1], [0, 0]]))


def test_herm_eig_phase_convention():
    _, v = herm_eig(np.array([[2, 1j], [-1j, 2]]))
    for col in v.T:
        k = np.flatnonzero(np.abs(col) > 1e-8)[0]
        assert abs(col[k].imag) < 1e-12 and col[k].real > 0


def test_sqrt_of_gram():
    r = sqrtm_psd(GRAM)
    assert np.allclose(r, [[0.695153, 0.129468], [0.129468, 0.695153]], atol=1e-6)
    assert np.allclose(r @ r, GRAM, atol=1e-12)


def test_inv_sqrt_trivial_cases():
    assert np.allclose(inv_sqrtm_psd(np.eye(3)), np.eye(3))
    v = np.array([1, 1]) / np.sqrt(2)
    p = np.outer(v, v)
    assert np.allclose(inv_sqrtm_psd(p), p)


def test_func_on_span_domain_error():
    with pytest.raises(DomainError):
        func_on_span(GRAM, lambda w: np.log(w - 1))


def test_gram_schmidt_examples():
    basis, skipped = gram_schmidt_extend([np.array([1, 0])], [np.array([1, 1]) / np.sqrt(2)])
    assert np.allclose(basis[1], [0, 1]) and skipped == []
    full = [np.array([1, 0]), np.array([0, 1])]
    basis, skipped = gram_schmidt_extend(full, [np.array([0.6, 0.8])])
    assert len(basis) == 2 and skipped == [0]


def test_gram_schmidt_from_pair_measurement():
    from qdecode.reference import pair_measurement

    w1, w2 = pair_measurement(0.6)
    cands = [np.eye(4)[k] for k in (1, 2, 0, 3)]
    basis, _ = gram_schmidt_extend([w1, w2], cands)
    g = np.array(basis)
    assert len(basis) == 4
    assert np.max(np.abs(g.conj() @ g.T - np.eye(4))) < 1e-12


def test_lowdin_is_orthonormal():
    rng = np.random.default_rng(1)
    vecs = list(rng.normal(size=(3, 5)))
    q = lowdin_orthonormalize(vecs)
    assert np.allclose(q.conj().T @ q, np.eye(3))


def test_fix_phase_and_global_phase_distance():
    v = np.array([0, -1j, 1]) / np.sqrt(2)
    f = fix_phase(v)
    assert f[1].real > 0 and abs(f[1].imag) < 1e-15
    u = np.eye(3) * np.exp(0.7j)
    assert global_phase_distance(u, np.eye(3)) < 1e-15
