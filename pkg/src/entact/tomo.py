"""Simulated quantum state tomography.

Pauli-basis measurement schedules, Poissonian count generation with a
counter-based RNG, linear-inversion reconstruction with PSD projection, and
Monte-Carlo error bars for derived quantities.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, List, Sequence, Union

import numpy as np

from .qcore import DensityMatrix, PauliString, projector

_AXIS_EIGENBASES = {
    # columns: +1 and -1 eigenvectors with a fixed phase convention
    "X": np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2),
    "Y": np.array([[1, 1], [1j, -1j]], dtype=complex) / math.sqrt(2),
    "Z": np.array([[1, 0], [0, 1]], dtype=complex),
}


@dataclass(frozen=True)
class MeasurementSetting:
    """One Pauli axis per qubit plus the 2^n rank-1 outcome projectors."""

    axes: str  # e.g. "XYZ"
    projectors: tuple

    @classmethod
    def from_axes(cls, axes: str) -> "MeasurementSetting":
        single = []
        for a in axes:
            basis = _AXIS_EIGENBASES[a]
            single.append((projector(basis[:, 0]), projector(basis[:, 1])))
        projs = []
        for outcome in itertools.product((0, 1), repeat=len(axes)):
            p = np.array([[1.0 + 0j]])
            for qubit, bit in enumerate(outcome):
                p = np.kron(p, single[qubit][bit])
            projs.append(p)
        return cls(axes=axes, projectors=tuple(projs))

    def outcome_parities(self, ops: str) -> np.ndarray:
        """Eigenvalue (+-1) of the Pauli string `ops` on each outcome; identity
        positions contribute +1."""
        signs = np.ones(1)
        for qubit, op in enumerate(ops):
            if op == "I":
                q_signs = np.array([1.0, 1.0])
            else:
                if op != self.axes[qubit]:
                    raise ValueError(f"{ops} not measurable with axes {self.axes}")
                q_signs = np.array([1.0, -1.0])
            signs = np.kron(signs, q_signs)
        return signs


@dataclass(frozen=True)
class CountsTable:
    setting: MeasurementSetting
    counts: tuple
    exposure: float

    def __post_init__(self):
        if len(self.counts) != len(self.setting.projectors):
            raise ValueError("counts length must equal number of outcomes")
        if any(c < 0 for c in self.counts):
            raise ValueError("counts must be nonnegative")


@dataclass(frozen=True)
class WaveplateScheduleRow:
    """One row of the lab waveplate schedule for the B/M analysis stages."""

    set_label: str
    state_label: str
    qwp_a: float
    hwp_a: float
    qwp_b: float
    hwp_b: float
    qwp_c: float
    hwp_c: float
    qwp_d: float
    hwp_d: float
    detector: int


def pauli_settings(n_qubits: int) -> List[MeasurementSetting]:
    """All 3^n axis combinations for n in {2, 3}."""
    if n_qubits not in (2, 3):
        raise ValueError(f"unsupported qubit count {n_qubits}")
    return [
        MeasurementSetting.from_axes("".join(axes))
        for axes in itertools.product("XYZ", repeat=n_qubits)
    ]


_TABLE1 = [
    # set, states (order fixes the detector column), qwp_a, hwp_a, qwp_b, hwp_b,
    # qwp_c, hwp_c, qwp_d, hwp_d, detectors
    ("I", ("H,a", "H,b", "V,a", "V,b"), 0, 0, 0, 45, 0, 0, 0, 0, (1, 2, 3, 4)),
    ("II", ("+,a", "+,b", "-,a", "-,b"), 45, 22.5, 45, -22.5, 0, 0, 0, 0, (1, 2, 3, 4)),
    ("III", ("R,a", "R,b", "L,a", "L,b"), 0, 22.5, 0, -22.5, 0, 0, 0, 0, (1, 2, 3, 4)),
    ("IV", ("H,+", "H,-", "V,+", "V,-"), 0, 0, 0, 45, 45, 22.5, 45, 22.5, (1, 2, 4, 3)),
    ("V", ("+,+", "+,-", "-,+", "-,-"), 45, 22.5, 45, -22.5, 45, 22.5, 45, 22.5, (1, 2, 4, 3)),
    ("VI", ("R,+", "R,-", "L,+", "L,-"), 0, 22.5, 0, -22.5, 45, 22.5, 45, 22.5, (1, 2, 4, 3)),
    ("VII", ("H,r", "H,l", "V,r", "V,l"), 0, 0, 0, 45, 0, 22.5, 0, 22.5, (1, 2, 3, 4)),
    ("VIII", ("+,r", "+,l", "-,r", "-,l"), 45, 22.5, 45, -22.5, 0, 22.5, 0, 22.5, (1, 2, 4, 3)),
    ("IX", ("R,r", "R,l", "L,r", "L,l"), 0, 22.5, 0, -22.5, 0, 22.5, 0, 22.5, (1, 2, 4, 3)),
]


def table1_schedule() -> List[WaveplateScheduleRow]:
    """The 36-row waveplate schedule for the B/M measurement stages.

    Documentation data only; the simulation uses abstract Pauli settings.
    """
    rows = []
    for set_label, states, qa, ha, qb, hb, qc, hc, qd, hd, dets in _TABLE1:
        for state, det in zip(states, dets):
            rows.append(
                WaveplateScheduleRow(set_label, state, qa, ha, qb, hb, qc, hc, qd, hd, det)
            )
    return rows


def _stream(seed: int, rep: int = 0) -> np.random.Generator:
    """Counter-based (Philox) stream; reps get statistically independent substreams."""
    bg = np.random.Philox(key=np.uint64(seed))
    if rep:
        bg = bg.jumped(rep)
    return np.random.Generator(bg)


def born_probabilities(rho: DensityMatrix, setting: MeasurementSetting) -> np.ndarray:
    p = np.array([np.trace(proj @ rho.mat).real for proj in setting.projectors])
    return np.clip(p, 0.0, None)


def simulate_counts(rho: DensityMatrix, settings: Sequence[MeasurementSetting],
                    exposure: float, seed: int, rep: int = 0) -> List[CountsTable]:
    """Independent Poisson(exposure * p_outcome) counts per outcome, per setting."""
    if exposure <= 0:
        raise ValueError("exposure must be positive")
    rng = _stream(seed, rep)
    tables = []
    for setting in settings:
        p = born_probabilities(rho, setting)
        counts = rng.poisson(exposure * p)
        tables.append(CountsTable(setting, tuple(int(c) for c in counts), exposure))
    return tables


def project_psd(h, trace_tol: float = 0.2) -> DensityMatrix:
    """Project a Hermitian matrix onto the PSD unit-trace cone.

    Iteratively clips the most negative eigenvalue to zero, spreading its
    deficit uniformly over the remaining positive eigenvalues, then
    renormalizes the trace.
    """
    a = np.asarray(h, dtype=complex)
    if np.abs(a - a.conj().T).max() > 1e-8:
        raise ValueError("input must be Hermitian")
    tr = np.trace(a).real
    if abs(tr - 1.0) > trace_tol:
        raise ValueError(f"trace {tr} too far from 1 to be a reconstruction")
    vals, vecs = np.linalg.eigh(a)
    vals = vals.copy()
    while vals.min() < 0:
        if vals.max() <= 0:
            raise ValueError("spectrum entirely nonpositive; cannot project")
        i = int(np.argmin(vals))
        deficit = vals[i]
        vals[i] = 0.0
        positive = vals > 0
        vals[positive] += deficit / positive.sum()
    vals = np.clip(vals, 0.0, None)
    vals /= vals.sum()
    n_qubits = round(math.log2(a.shape[0]))
    return DensityMatrix((vecs * vals) @ vecs.conj().T, (2,) * n_qubits)


def _pauli_strings(n_qubits: int):
    return ["".join(p) for p in itertools.product("IXYZ", repeat=n_qubits)]


def pauli_expectations_exact(rho: DensityMatrix) -> dict:
    """Analytic (infinite-exposure) Pauli expectations, for the inversion identity."""
    return {
        ops: float(np.trace(PauliString(ops).matrix() @ rho.mat).real)
        for ops in _pauli_strings(rho.n_qubits)
    }


def reconstruct_from_expectations(expectations: dict, n_qubits: int) -> DensityMatrix:
    dim = 2**n_qubits
    h = np.zeros((dim, dim), dtype=complex)
    for ops, value in expectations.items():
        h += value * PauliString(ops).matrix()
    return project_psd(h / dim)


def reconstruct(counts: Sequence[CountsTable]) -> DensityMatrix:
    """Linear inversion from a complete Pauli-setting count set, then PSD projection.

    Each Pauli-string expectation is the parity-weighted frequency, averaged
    over every setting that measures it.
    """
    if not counts:
        raise ValueError("no counts given")
    n_qubits = len(counts[0].setting.axes)
    seen = {t.setting.axes for t in counts}
    required = {"".join(p) for p in itertools.product("XYZ", repeat=n_qubits)}
    if not required <= seen:
        raise ValueError(f"incomplete Pauli setting set; missing {sorted(required - seen)}")
    sums: dict = {}
    hits: dict = {}
    for table in counts:
        total = sum(table.counts)
        if total == 0:
            continue
        freqs = np.array(table.counts, dtype=float) / total
        for ops in _pauli_strings(n_qubits):
            if all(o == "I" or o == a for o, a in zip(ops, table.setting.axes)):
                value = float(table.setting.outcome_parities(ops) @ freqs)
                sums[ops] = sums.get(ops, 0.0) + value
                hits[ops] = hits.get(ops, 0) + 1
    expectations = {ops: sums[ops] / hits[ops] for ops in sums}
    expectations["I" * n_qubits] = 1.0
    return reconstruct_from_expectations(expectations, n_qubits)


def mc_errorbar(rho: DensityMatrix, exposure: float, reps: int, seed: int,
                functional: Union[str, Callable[[DensityMatrix], float]]):
    """Monte-Carlo spread of a reconstructed quantity: repeat simulate ->
    reconstruct -> functional and report (mean, std)."""
    if reps < 50:
        raise ValueError("reps must be at least 50")
    func = _resolve_functional(functional, rho.n_qubits)
    settings = pauli_settings(rho.n_qubits)
    values = np.empty(reps)
    for rep in range(reps):
        tables = simulate_counts(rho, settings, exposure, seed, rep=rep)
        values[rep] = func(reconstruct(tables))
    return float(values.mean()), float(values.std(ddof=1))


def _resolve_functional(functional, n_qubits: int) -> Callable[[DensityMatrix], float]:
    if callable(functional):
        return functional
    from .measures import discord_bell_diagonal, discord_numeric, is_bell_diagonal, negativity
    from .witnesses import expect, w2, w3

    if functional == "negativity":
        # negativity across the AB|M cut for 3 qubits, A|B for 2
        cut = [0, 1] if n_qubits == 3 else [0]
        return lambda dm: negativity(dm, cut)
    if functional == "witness-expect":
        w = w3() if n_qubits == 3 else w2()
        return lambda dm: expect(w, dm)
    if functional == "discord":
        if n_qubits != 2:
            raise ValueError("discord functional needs a 2-qubit state")
        return lambda dm: (
            discord_bell_diagonal(dm) if is_bell_diagonal(dm) else discord_numeric(dm).value
        )
    raise ValueError(f"unknown functional {functional!r}")
