"""Simulated tomography: counts, reconstruction, error bars."""

import math

import numpy as np
import pytest

from entact.qcore import BellKind, bell_state, chi_q, fidelity
from entact.protocol import WaveplateSetting, premeasurement
from entact.measures import negativity
from entact.tomo import (
    CountsTable,
    MeasurementSetting,
    mc_errorbar,
    pauli_expectations_exact,
    pauli_settings,
    project_psd,
    reconstruct,
    reconstruct_from_expectations,
    simulate_counts,
    table1_schedule,
)


@pytest.fixture(scope="module")
def rho3():
    return premeasurement(chi_q(0.2), WaveplateSetting(math.pi / 12, math.pi / 6))


class TestSettings:
    def test_setting_counts(self):
        assert len(pauli_settings(2)) == 9
        assert len(pauli_settings(3)) == 27
        with pytest.raises(ValueError):
            pauli_settings(4)

    def test_projectors_resolve_identity(self):
        s = MeasurementSetting.from_axes("XZY")
        total = sum(s.projectors)
        assert np.abs(total - np.eye(8)).max() < 1e-12

    def test_outcome_parities(self):
        s = MeasurementSetting.from_axes("ZZ")
        assert np.allclose(s.outcome_parities("ZZ"), [1, -1, -1, 1])
        assert np.allclose(s.outcome_parities("IZ"), [1, -1, 1, -1])
        with pytest.raises(ValueError):
            s.outcome_parities("XZ")

    def test_schedule_has_36_rows(self):
        rows = table1_schedule()
        assert len(rows) == 36
        assert sorted({r.set_label for r in rows}) == sorted(
            ["I", "II", "III", "IV", "V", "VI", "VII", "VIII", "IX"])
        # each set addresses each detector exactly once
        for label in "I II III IV V VI VII VIII IX".split():
            dets = sorted(r.detector for r in rows if r.set_label == label)
            assert dets == [1, 2, 3, 4]


class TestCounts:
    def test_reproducible_with_seed(self, rho3):
        a = simulate_counts(rho3, pauli_settings(3), 1e4, seed=5)
        b = simulate_counts(rho3, pauli_settings(3), 1e4, seed=5)
        assert all(x.counts == y.counts for x, y in zip(a, b))

    def test_substreams_differ(self, rho3):
        a = simulate_counts(rho3, pauli_settings(3), 1e4, seed=5, rep=0)
        b = simulate_counts(rho3, pauli_settings(3), 1e4, seed=5, rep=1)
        assert any(x.counts != y.counts for x, y in zip(a, b))

    def test_totals_scale_with_exposure(self, rho3):
        tables = simulate_counts(rho3, pauli_settings(3)[:3], 1e5, seed=2)
        for t in tables:
            assert sum(t.counts) == pytest.approx(1e5, rel=0.05)

    def test_exposure_guard(self, rho3):
        with pytest.raises(ValueError):
            simulate_counts(rho3, pauli_settings(3), 0.0, seed=1)

    def test_counts_table_validation(self):
        s = MeasurementSetting.from_axes("ZZ")
        with pytest.raises(ValueError):
            CountsTable(s, (1, 2, 3), 100.0)
        with pytest.raises(ValueError):
            CountsTable(s, (1, -2, 3, 4), 100.0)


class TestProjection:
    def test_passthrough_on_valid_state(self, rho3):
        out = project_psd(rho3.mat)
        assert np.abs(out.mat - rho3.mat).max() < 1e-10

    def test_clips_negative_eigenvalue(self):
        h = np.diag([0.7, 0.4, -0.1, 0.0]).astype(complex)
        out = project_psd(h)
        vals = np.linalg.eigvalsh(out.mat)
        assert vals.min() >= -1e-12
        assert np.trace(out.mat).real == pytest.approx(1.0, abs=1e-12)

    def test_rejects_non_hermitian(self):
        bad = np.eye(4, dtype=complex)
        bad[0, 1] = 0.5
        with pytest.raises(ValueError):
            project_psd(bad / np.trace(bad))

    def test_rejects_wild_trace(self):
        with pytest.raises(ValueError):
            project_psd(np.eye(4, dtype=complex))


class TestReconstruction:
    def test_exact_expectations_invert_perfectly(self, rho3):
        recon = reconstruct_from_expectations(pauli_expectations_exact(rho3), 3)
        assert fidelity(recon, rho3) == pytest.approx(1.0, abs=1e-10)

    def test_two_qubit_roundtrip(self):
        chi = chi_q(0.35)
        recon = reconstruct_from_expectations(pauli_expectations_exact(chi), 2)
        assert np.abs(recon.mat - chi.mat).max() < 1e-10

    def test_counts_reconstruction_converges(self):
        rho = bell_state(BellKind.PSI_PLUS)
        tables = simulate_counts(rho, pauli_settings(2), 1e6, seed=3)
        recon = reconstruct(tables)
        assert fidelity(recon, rho) > 0.999

    def test_incomplete_settings_rejected(self, rho3):
        tables = simulate_counts(rho3, pauli_settings(3)[:-1], 1e4, seed=1)
        with pytest.raises(ValueError):
            reconstruct(tables)

    def test_empty_input(self):
        with pytest.raises(ValueError):
            reconstruct([])


class TestErrorBars:
    def test_reps_floor(self, rho3):
        with pytest.raises(ValueError):
            mc_errorbar(rho3, 1e4, reps=5, seed=1, functional="negativity")

    def test_negativity_statistics(self, rho3):
        mean, std = mc_errorbar(rho3, 1e4, reps=50, seed=1, functional="negativity")
        truth = negativity(rho3, [0, 1])
        assert std < 1e-2
        assert mean == pytest.approx(truth, abs=5 * std + 1e-3)

    def test_callable_functional(self, rho3):
        mean, std = mc_errorbar(rho3, 1e4, reps=50, seed=1,
                                functional=lambda dm: fidelity(dm, rho3))
        assert 0.97 < mean <= 1.0
        assert std < 0.01

    def test_unknown_functional(self, rho3):
        with pytest.raises(ValueError):
            mc_errorbar(rho3, 1e4, reps=50, seed=1, functional="entropy")
