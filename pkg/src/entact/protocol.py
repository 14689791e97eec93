"""Measurement-activation circuit: basis-selecting unitary, B-M C-NOT, premeasurement state.

The basis unitary is built from quarter- and half-waveplate Jones matrices at
angles (theta, phi).  The relative phases matter for tripartite witness
expectations, so the waveplate composition (not just the target Bloch vector)
is the source of truth here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .qcore import DensityMatrix, I2, SIGMA_X, SIGMA_Y, SIGMA_Z, basis_ket, projector, tensor

THETA_PERIOD = math.pi / 2
PHI_PERIOD = math.pi / 4


@dataclass(frozen=True)
class WaveplateSetting:
    """Quarter-waveplate angle theta and half-waveplate angle phi, in radians."""

    theta: float
    phi: float

    def __post_init__(self):
        # reduce by the stated periodicities, then require the canonical ranges
        th = self.theta % THETA_PERIOD if not 0 <= self.theta <= THETA_PERIOD else self.theta
        ph = self.phi % PHI_PERIOD if not 0 <= self.phi <= PHI_PERIOD else self.phi
        object.__setattr__(self, "theta", float(th))
        object.__setattr__(self, "phi", float(ph))

    def to_json_dict(self) -> dict:
        return {"theta_rad": self.theta, "phi_rad": self.phi}


@dataclass(frozen=True)
class BlochVector:
    """Unit 3-vector giving the measurement-basis direction on B's Bloch sphere."""

    x: float
    y: float
    z: float

    def __post_init__(self):
        if abs(self.x**2 + self.y**2 + self.z**2 - 1.0) > 1e-10:
            raise ValueError("Bloch vector must have unit norm")

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])

    @classmethod
    def from_array(cls, v) -> "BlochVector":
        v = np.asarray(v, dtype=float)
        v = v / np.linalg.norm(v)
        return cls(float(v[0]), float(v[1]), float(v[2]))


def bloch_vector(s: WaveplateSetting) -> BlochVector:
    """Measurement direction n(theta, phi) selected by the waveplate pair."""
    a = 2.0 * (s.theta - 2.0 * s.phi)
    return BlochVector(
        -math.cos(a) * math.sin(2.0 * s.theta),
        -math.sin(a),
        math.cos(a) * math.cos(2.0 * s.theta),
    )


def _rot(a: float) -> np.ndarray:
    c, s = math.cos(a), math.sin(a)
    return np.array([[c, -s], [s, c]], dtype=complex)


def _waveplate(angle: float, retardance: complex) -> np.ndarray:
    r = _rot(-angle)
    return r @ np.diag([1.0 + 0j, retardance]) @ r.conj().T


def u_b(s: WaveplateSetting) -> np.ndarray:
    """2x2 unitary of the waveplate pair: half-wave at phi after quarter-wave at theta.

    Maps |n(theta,phi)> to |0> and its orthogonal to |1> up to the phases
    fixed by the Jones matrices.
    """
    return _waveplate(s.phi, -1.0) @ _waveplate(s.theta, 1j)


def cnot_bm() -> np.ndarray:
    """C-NOT with B as control and M as target: |V>_B flips the path qubit."""
    m = np.zeros((4, 4), dtype=complex)
    m[0, 0] = m[1, 1] = 1.0  # |H a> -> |H a>, |H b> -> |H b>
    m[3, 2] = m[2, 3] = 1.0  # |V a> <-> |V b>
    return m


def coupling_unitary(s: WaveplateSetting) -> np.ndarray:
    """The full B-M interaction V_BM = CNOT (U_B x I_M)."""
    return cnot_bm() @ tensor(u_b(s), I2)


def premeasurement(chi: DensityMatrix, s: WaveplateSetting) -> DensityMatrix:
    """Three-qubit state (I_A x V_BM)(chi x |0><0|_M)(I_A x V_BM)^dag."""
    if chi.dims != (2, 2):
        raise ValueError(f"chi must be a 2-qubit state, got dims {chi.dims}")
    rho0 = tensor(chi.mat, projector(basis_ket(0)))
    w = tensor(I2, coupling_unitary(s))
    return DensityMatrix(w @ rho0 @ w.conj().T, (2, 2, 2))


def basis_kets(n: BlochVector):
    """Orthonormal kets (|n>, |n_perp>) along +-n, from the rows of u_b-like analysis.

    Phase-free consumers only; the pair is built analytically from n.
    """
    v = n.as_array()
    h = v[0] * SIGMA_X + v[1] * SIGMA_Y + v[2] * SIGMA_Z
    vals, vecs = np.linalg.eigh(h)
    return vecs[:, 1].copy(), vecs[:, 0].copy()
