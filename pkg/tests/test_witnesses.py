"""Witness operators and their expectation routes."""

import math

import numpy as np
import pytest

from entact.qcore import BellKind, DensityMatrix, PauliString, bell_state, chi_q, projector
from entact.protocol import WaveplateSetting, premeasurement
from entact.witnesses import WitnessOperator, expect, w2, w3


class TestConstruction:
    def test_w2_matrix_form(self):
        # (II - XX - YY + ZZ)/4 equals I/2 - |Psi+><Psi+|
        expected = np.eye(4) / 2 - bell_state(BellKind.PSI_PLUS).mat
        assert np.abs(w2().matrix - expected).max() < 1e-12

    def test_w3_is_half_identity_minus_projector(self):
        m = w3().matrix
        # I/2 - P for a rank-1 projector P: spectrum {-1/2, 1/2 x7}
        vals = np.sort(np.linalg.eigvalsh(m))
        assert vals[0] == pytest.approx(-0.5, abs=1e-12)
        assert np.abs(vals[1:] - 0.5).max() < 1e-12

    def test_pauli_terms_rebuild(self):
        for w in (w2(), w3()):
            rebuilt = sum(t.matrix() for t in w.pauli_terms)
            assert np.abs(rebuilt - w.matrix).max() < 1e-10

    def test_invalid_decomposition_rejected(self):
        with pytest.raises(ValueError):
            WitnessOperator(np.eye(4) / 2, (PauliString("II", 0.1),), "W2")

    def test_non_hermitian_rejected(self):
        bad = np.eye(4, dtype=complex)
        bad[0, 1] = 1j
        with pytest.raises(ValueError):
            WitnessOperator(bad, (PauliString("II", 0.25),), "W2")


class TestExpectations:
    def test_w2_line(self):
        for q in np.linspace(0, 1, 11):
            assert expect(w2(), chi_q(q)) == pytest.approx(0.5 - q, abs=1e-9)

    def test_w3_line_at_quarter_pi(self):
        s = WaveplateSetting(math.pi / 4, 0.0)
        for q in np.linspace(0, 1, 11):
            rho = premeasurement(chi_q(q), s)
            assert expect(w3(), rho) == pytest.approx(0.5 - q, abs=1e-9)

    def test_negative_exactly_above_half(self):
        assert expect(w2(), chi_q(0.5)) == pytest.approx(0.0, abs=1e-12)
        assert expect(w2(), chi_q(0.51)) < 0
        assert expect(w2(), chi_q(0.49)) > 0

    def test_w3_detects_ghz_state(self):
        # the witness reaches its floor -1/2 on its own GHZ-type state
        ghz = premeasurement(chi_q(1.0), WaveplateSetting(math.pi / 4, 0.0))
        assert expect(w3(), ghz) == pytest.approx(-0.5, abs=1e-10)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            expect(w3(), chi_q(0.3))

    def test_separable_three_qubit_state_nonnegative(self):
        rho = DensityMatrix(np.eye(8, dtype=complex) / 8, (2, 2, 2))
        assert expect(w3(), rho) >= 0
