"""Dense complex matrix algebra on small dimensions and the canonical two-qubit states.

Everything here operates on plain complex numpy arrays; `DensityMatrix` is a
thin validated wrapper used at module boundaries.  Qubit order is (A, B, M)
with A most significant, computational basis |H> = |0>, |V> = |1>,
path |a> = |0>, |b> = |1>.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

HERMITICITY_TOL = 1e-10
TRACE_TOL = 1e-10
PSD_TOL = -1e-9

I2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = {"I": I2, "X": SIGMA_X, "Y": SIGMA_Y, "Z": SIGMA_Z}


class BellKind(Enum):
    PSI_MINUS = "PsiMinus"
    PSI_PLUS = "PsiPlus"
    PHI_MINUS = "PhiMinus"
    PHI_PLUS = "PhiPlus"


@dataclass(frozen=True)
class PauliString:
    """A tensor product of single-qubit Paulis with a real coefficient."""

    ops: str  # e.g. "XYZ", one of I/X/Y/Z per qubit
    coefficient: float = 1.0

    def __post_init__(self):
        if not self.ops or any(c not in PAULIS for c in self.ops):
            raise ValueError(f"invalid Pauli string {self.ops!r}")

    def matrix(self) -> np.ndarray:
        m = np.array([[1.0 + 0j]])
        for c in self.ops:
            m = np.kron(m, PAULIS[c])
        return self.coefficient * m


def _as_square(m) -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a.view(float))):
        raise ValueError("matrix contains non-finite entries")
    return a


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, unit-trace, PSD operator with a subsystem-dimension signature."""

    mat: np.ndarray
    dims: tuple = (2,)

    def __post_init__(self):
        a = _as_square(self.mat)
        object.__setattr__(self, "mat", a)
        dims = tuple(int(d) for d in self.dims)
        object.__setattr__(self, "dims", dims)
        if any(d < 2 for d in dims):
            raise ValueError(f"subsystem dimensions must be >= 2, got {dims}")
        if math.prod(dims) != a.shape[0]:
            raise ValueError(f"dims {dims} incompatible with matrix size {a.shape[0]}")
        if np.abs(a - a.conj().T).max() > HERMITICITY_TOL:
            raise ValueError("matrix is not Hermitian")
        if abs(np.trace(a).real - 1.0) > TRACE_TOL or abs(np.trace(a).imag) > TRACE_TOL:
            raise ValueError(f"trace is {np.trace(a)}, expected 1")
        if np.linalg.eigvalsh(a).min() < PSD_TOL:
            raise ValueError("matrix has a significantly negative eigenvalue")

    @property
    def n_qubits(self) -> int:
        return len(self.dims)

    def purity(self) -> float:
        return float(np.trace(self.mat @ self.mat).real)

    def to_json(self) -> str:
        return json.dumps(
            {
                "dims": list(self.dims),
                "re": self.mat.real.tolist(),
                "im": self.mat.imag.tolist(),
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "DensityMatrix":
        d = json.loads(text)
        mat = np.array(d["re"], dtype=float) + 1j * np.array(d["im"], dtype=float)
        return cls(mat, tuple(d["dims"]))


def tensor(a, b) -> np.ndarray:
    """Kronecker product; dimensions multiply."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def partial_transpose(rho, subsystem: int, dims=None) -> np.ndarray:
    """Transpose applied on a single tensor factor of an operator."""
    if isinstance(rho, DensityMatrix):
        dims = rho.dims
        rho = rho.mat
    if dims is None:
        raise ValueError("dims required for raw-matrix input")
    a = _as_square(rho)
    dims = tuple(dims)
    k = len(dims)
    if not 0 <= subsystem < k:
        raise ValueError(f"subsystem {subsystem} out of range for dims {dims}")
    t = a.reshape(dims + dims)
    perm = list(range(2 * k))
    perm[subsystem], perm[k + subsystem] = perm[k + subsystem], perm[subsystem]
    return t.transpose(perm).reshape(a.shape)


def partial_trace(rho: DensityMatrix, keep) -> DensityMatrix:
    """Reduced state on the kept subsystems; preserves trace."""
    keep = sorted(set(int(i) for i in keep))
    k = len(rho.dims)
    if not keep:
        raise ValueError("keep set must be nonempty")
    if any(i < 0 or i >= k for i in keep):
        raise ValueError(f"keep indices {keep} out of range for dims {rho.dims}")
    t = rho.mat.reshape(rho.dims + rho.dims)
    k_cur = k
    # descending order keeps the remaining axis indices stable
    for i in sorted((i for i in range(k) if i not in keep), reverse=True):
        t = np.trace(t, axis1=i, axis2=i + k_cur)
        k_cur -= 1
    d = math.prod(rho.dims[i] for i in keep)
    return DensityMatrix(t.reshape(d, d), tuple(rho.dims[i] for i in keep))


def _eigh_2x2(a: float, d: float, b: complex):
    """Analytic eigendecomposition of [[a, b], [conj(b), d]], eigenvalues ascending."""
    m = 0.5 * (a + d)
    r = math.hypot(0.5 * (a - d), abs(b))
    lo, hi = m - r, m + r
    y = hi - a
    nrm = math.hypot(abs(b), y)
    if nrm < 1e-300:
        return (lo, hi), np.eye(2, dtype=complex)
    v_hi = np.array([b / nrm, y / nrm], dtype=complex)
    v_lo = np.array([-np.conj(v_hi[1]), np.conj(v_hi[0])], dtype=complex)
    return (lo, hi), np.column_stack([v_lo, v_hi])


def hermitian_eigen(h, tol: float = 1e-12, max_sweeps: int = 100):
    """Cyclic Jacobi eigensolver for Hermitian matrices.

    Returns (eigenvalues ascending, unitary matrix of column eigenvectors).
    Convergence: off-diagonal Frobenius norm <= `tol`.
    """
    a = _as_square(h)
    if np.abs(a - a.conj().T).max() > 1e-8:
        raise ValueError("input is not Hermitian")
    n = a.shape[0]
    a = 0.5 * (a + a.conj().T)
    v = np.eye(n, dtype=complex)
    for _ in range(max_sweeps):
        off = a - np.diag(np.diag(a))
        if np.linalg.norm(off) <= tol:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                if abs(a[p, q]) < 1e-300:
                    continue
                _, u = _eigh_2x2(a[p, p].real, a[q, q].real, a[p, q])
                cols = [p, q]
                a[:, cols] = a[:, cols] @ u
                a[cols, :] = u.conj().T @ a[cols, :]
                v[:, cols] = v[:, cols] @ u
    vals = np.diag(a).real.copy()
    order = np.argsort(vals)
    return vals[order], v[:, order]


def trace_norm(o) -> float:
    """Sum of singular values, via the spectrum of O^dag O."""
    a = _as_square(o)
    vals, _ = hermitian_eigen(a.conj().T @ a)
    return float(np.sqrt(np.clip(vals, 0.0, None)).sum())


def _abs_eigsum(h) -> float:
    """Fast trace norm for Hermitian input (batched-friendly numpy path)."""
    return float(np.abs(np.linalg.eigvalsh(h)).sum())


def basis_ket(index: int, dim: int = 2) -> np.ndarray:
    v = np.zeros(dim, dtype=complex)
    v[index] = 1.0
    return v


def projector(v) -> np.ndarray:
    v = np.asarray(v, dtype=complex)
    return np.outer(v, v.conj())


_BELL_KETS = None


def bell_ket(kind: BellKind) -> np.ndarray:
    global _BELL_KETS
    if _BELL_KETS is None:
        s2 = 1 / math.sqrt(2)
        k00, k01, k10, k11 = (basis_ket(i, 4) for i in range(4))
        _BELL_KETS = {
            BellKind.PSI_MINUS: s2 * (k01 - k10),
            BellKind.PSI_PLUS: s2 * (k01 + k10),
            BellKind.PHI_MINUS: s2 * (k00 - k11),
            BellKind.PHI_PLUS: s2 * (k00 + k11),
        }
    return _BELL_KETS[kind]


def bell_state(kind: BellKind) -> DensityMatrix:
    """Pure two-qubit Bell state |Psi+->, |Phi+-> with |H>=|0>, |V>=|1>."""
    return DensityMatrix(projector(bell_ket(kind)), (2, 2))


def chi_q(q: float) -> DensityMatrix:
    """Symmetric Bell-diagonal family: q |Psi+><Psi+| + (1-q)/2 (|Phi+><Phi+| + |Psi-><Psi-|)."""
    if not 0.0 <= q <= 1.0:
        raise ValueError(f"q must be in [0, 1], got {q}")
    m = (
        q * bell_state(BellKind.PSI_PLUS).mat
        + 0.5 * (1 - q) * (bell_state(BellKind.PHI_PLUS).mat + bell_state(BellKind.PSI_MINUS).mat)
    )
    return DensityMatrix(m, (2, 2))


def werner_mix(kind: BellKind, v: float) -> DensityMatrix:
    """Bell state mixed with white noise: v |bell><bell| + (1-v) I/4."""
    if not 0.0 <= v <= 1.0:
        raise ValueError(f"visibility must be in [0, 1], got {v}")
    m = v * bell_state(kind).mat + (1 - v) * np.eye(4) / 4
    return DensityMatrix(m, (2, 2))


def quantum_classical(ps, taus, basis) -> DensityMatrix:
    """Zero-discord state sum_n p_n tau^n_A x |n><n|_B in the basis along +-`basis`."""
    ps = [float(p) for p in ps]
    if len(ps) != 2 or len(taus) != 2:
        raise ValueError("expected two probabilities and two states")
    if abs(sum(ps) - 1.0) > 1e-10 or any(p < -1e-12 for p in ps):
        raise ValueError(f"probabilities {ps} do not sum to 1")
    n = np.asarray(basis, dtype=float)
    n = n / np.linalg.norm(n)
    h = n[0] * SIGMA_X + n[1] * SIGMA_Y + n[2] * SIGMA_Z
    vals, vecs = hermitian_eigen(h)
    p_plus, p_minus = projector(vecs[:, 1]), projector(vecs[:, 0])
    mats = []
    for tau in taus:
        t = tau.mat if isinstance(tau, DensityMatrix) else _as_square(tau)
        DensityMatrix(t, (2,))  # validate
        mats.append(t)
    m = ps[0] * tensor(mats[0], p_plus) + ps[1] * tensor(mats[1], p_minus)
    return DensityMatrix(m, (2, 2))


def _psd_sqrt(h) -> np.ndarray:
    vals, vecs = hermitian_eigen(h)
    s = np.sqrt(np.clip(vals, 0.0, None))
    return (vecs * s) @ vecs.conj().T


def fidelity(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """Uhlmann fidelity (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2."""
    if rho.dims != sigma.dims:
        raise ValueError(f"dimension mismatch: {rho.dims} vs {sigma.dims}")
    sr = _psd_sqrt(rho.mat)
    inner = sr @ sigma.mat @ sr
    vals, _ = hermitian_eigen(0.5 * (inner + inner.conj().T))
    f = np.sqrt(np.clip(vals, 0.0, None)).sum() ** 2
    return float(min(max(f, 0.0), 1.0))
