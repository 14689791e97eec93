"""Core linear algebra and canonical states."""

import json
import math

import numpy as np
import pytest

from entact.qcore import (
    BellKind,
    DensityMatrix,
    PauliString,
    _abs_eigsum,
    bell_ket,
    bell_state,
    chi_q,
    fidelity,
    hermitian_eigen,
    partial_trace,
    partial_transpose,
    projector,
    quantum_classical,
    tensor,
    trace_norm,
    werner_mix,
)


def random_hermitian(n, rng):
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return a + a.conj().T


def random_density(n, rng):
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    m = a @ a.conj().T
    return m / np.trace(m).real


class TestPauliString:
    def test_single_qubit_matrices(self):
        assert np.allclose(PauliString("X").matrix(), [[0, 1], [1, 0]])
        assert np.allclose(PauliString("Z").matrix(), [[1, 0], [0, -1]])

    def test_tensor_order_and_coefficient(self):
        zx = PauliString("ZX", -0.5).matrix()
        assert np.allclose(zx, -0.5 * np.kron([[1, 0], [0, -1]], [[0, 1], [1, 0]]))

    def test_rejects_bad_labels(self):
        with pytest.raises(ValueError):
            PauliString("XQ")
        with pytest.raises(ValueError):
            PauliString("")


class TestDensityMatrix:
    def test_validation(self):
        with pytest.raises(ValueError):
            DensityMatrix(np.array([[1.0, 0.5j], [0.5j, 0.0]]), (2,))  # not Hermitian
        with pytest.raises(ValueError):
            DensityMatrix(np.eye(2), (2,))  # trace 2
        with pytest.raises(ValueError):
            DensityMatrix(np.diag([1.5, -0.5]).astype(complex), (2,))  # not PSD

    def test_dims_must_match_size(self):
        with pytest.raises(ValueError):
            DensityMatrix(np.eye(4) / 4, (2,))

    def test_json_roundtrip(self):
        rho = chi_q(0.3)
        back = DensityMatrix.from_json(rho.to_json())
        assert back.dims == rho.dims
        assert np.abs(back.mat - rho.mat).max() < 1e-15

    def test_json_fields(self):
        d = json.loads(chi_q(0.1).to_json())
        assert set(d) == {"dims", "re", "im"}

    def test_purity_bounds(self):
        assert bell_state(BellKind.PHI_PLUS).purity() == pytest.approx(1.0)
        assert chi_q(1 / 3).purity() < 1.0


class TestPartialOps:
    def test_partial_transpose_involution(self):
        rng = np.random.default_rng(3)
        m = random_density(4, rng)
        once = partial_transpose(m, 1, (2, 2))
        assert np.allclose(partial_transpose(once, 1, (2, 2)), m)

    def test_partial_transpose_product_state(self):
        rng = np.random.default_rng(4)
        a, b = random_density(2, rng), random_density(2, rng)
        pt = partial_transpose(tensor(a, b), 1, (2, 2))
        assert np.allclose(pt, tensor(a, b.T))

    def test_partial_transpose_requires_dims_for_raw(self):
        with pytest.raises(ValueError):
            partial_transpose(np.eye(4) / 4, 0)

    def test_partial_trace_of_bell_is_maximally_mixed(self):
        for kind in BellKind:
            red = partial_trace(bell_state(kind), [0])
            assert np.abs(red.mat - np.eye(2) / 2).max() < 1e-12

    def test_partial_trace_keeps_order(self):
        rng = np.random.default_rng(5)
        a, b, c = (random_density(2, rng) for _ in range(3))
        rho = DensityMatrix(tensor(tensor(a, b), c), (2, 2, 2))
        red = partial_trace(rho, [0, 2])
        assert np.abs(red.mat - tensor(a, c)).max() < 1e-12
        assert red.dims == (2, 2)

    def test_partial_trace_invalid_keep(self):
        rho = chi_q(0.5)
        with pytest.raises(ValueError):
            partial_trace(rho, [])
        with pytest.raises(ValueError):
            partial_trace(rho, [7])


class TestEigenAndNorms:
    def test_jacobi_matches_numpy(self):
        rng = np.random.default_rng(11)
        for n in (2, 3, 4, 8):
            h = random_hermitian(n, rng)
            vals, vecs = hermitian_eigen(h)
            assert np.abs(vals - np.linalg.eigvalsh(h)).max() < 1e-10
            # eigenvector columns actually diagonalize
            assert np.abs(vecs.conj().T @ h @ vecs - np.diag(vals)).max() < 1e-9

    def test_jacobi_rejects_non_hermitian(self):
        with pytest.raises(ValueError):
            hermitian_eigen(np.array([[0.0, 1.0], [0.0, 0.0]]))

    def test_trace_norm_against_svd(self):
        rng = np.random.default_rng(12)
        a = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
        assert trace_norm(a) == pytest.approx(np.linalg.svd(a, compute_uv=False).sum(), abs=1e-9)

    def test_trace_norm_routes_agree_on_hermitian(self):
        rng = np.random.default_rng(13)
        h = random_hermitian(8, rng)
        assert trace_norm(h) == pytest.approx(_abs_eigsum(h), abs=1e-8)


class TestStates:
    def test_bell_kets_orthonormal(self):
        kets = [bell_ket(k) for k in BellKind]
        g = np.array([[np.vdot(a, b) for b in kets] for a in kets])
        assert np.abs(g - np.eye(4)).max() < 1e-12

    def test_chi_q_spectrum(self):
        # eigenvalues {q, (1-q)/2, (1-q)/2, 0}
        for q in (0.0, 0.2, 0.7, 1.0):
            vals = np.sort(np.linalg.eigvalsh(chi_q(q).mat))
            expect = np.sort([q, (1 - q) / 2, (1 - q) / 2, 0.0])
            assert np.abs(vals - expect).max() < 1e-12

    def test_chi_q_range_check(self):
        with pytest.raises(ValueError):
            chi_q(1.2)

    def test_werner_endpoints(self):
        assert np.allclose(werner_mix(BellKind.PSI_PLUS, 1.0).mat,
                           bell_state(BellKind.PSI_PLUS).mat)
        assert np.allclose(werner_mix(BellKind.PSI_PLUS, 0.0).mat, np.eye(4) / 4)

    def test_werner_purity(self):
        v = 0.9564
        assert werner_mix(BellKind.PHI_PLUS, v).purity() == pytest.approx(
            (3 * v**2 + 1) / 4, abs=1e-12)

    def test_quantum_classical_structure(self):
        tau0 = DensityMatrix(np.diag([1.0, 0.0]).astype(complex), (2,))
        tau1 = DensityMatrix(np.eye(2, dtype=complex) / 2, (2,))
        rho = quantum_classical([0.3, 0.7], [tau0, tau1], [0, 0, 1])
        # measuring B along z leaves the state invariant
        pz0 = tensor(np.eye(2), projector([1, 0]))
        pz1 = tensor(np.eye(2), projector([0, 1]))
        dephased = pz0 @ rho.mat @ pz0 + pz1 @ rho.mat @ pz1
        assert np.abs(dephased - rho.mat).max() < 1e-12

    def test_quantum_classical_bad_probs(self):
        tau = DensityMatrix(np.eye(2, dtype=complex) / 2, (2,))
        with pytest.raises(ValueError):
            quantum_classical([0.6, 0.6], [tau, tau], [0, 0, 1])


class TestFidelity:
    def test_identical_states(self):
        assert fidelity(chi_q(0.4), chi_q(0.4)) == pytest.approx(1.0, abs=1e-10)

    def test_orthogonal_pure_states(self):
        a = bell_state(BellKind.PHI_PLUS)
        b = bell_state(BellKind.PSI_MINUS)
        assert fidelity(a, b) == pytest.approx(0.0, abs=1e-10)

    def test_pure_vs_mixed_overlap(self):
        # F(|psi><psi|, rho) = <psi|rho|psi>
        psi = bell_ket(BellKind.PSI_PLUS)
        rho = chi_q(0.35)
        assert fidelity(bell_state(BellKind.PSI_PLUS), rho) == pytest.approx(
            float(np.real(psi.conj() @ rho.mat @ psi)), abs=1e-10)

    def test_symmetry(self):
        a, b = chi_q(0.1), chi_q(0.8)
        assert fidelity(a, b) == pytest.approx(fidelity(b, a), abs=1e-8)
