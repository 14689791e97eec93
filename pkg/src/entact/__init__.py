"""Discord-to-entanglement activation: state families, measurement circuit,
correlation measures, finite-net certification, and simulated tomography."""

from .qcore import (
    BellKind,
    DensityMatrix,
    PauliString,
    bell_state,
    chi_q,
    fidelity,
    hermitian_eigen,
    partial_trace,
    partial_transpose,
    quantum_classical,
    tensor,
    trace_norm,
    werner_mix,
)
from .protocol import (
    BlochVector,
    WaveplateSetting,
    bloch_vector,
    cnot_bm,
    premeasurement,
    u_b,
)
from .measures import (
    MeasureResult,
    Method,
    correlation_matrix,
    discord_bell_diagonal,
    discord_numeric,
    negativity,
    negativity_of_quantumness,
    negativity_offdiag,
    negativity_theory,
)
from .epsnet import (
    BoundReport,
    NetRecord,
    NetSpec,
    bound1,
    bound2,
    cap_radius,
    combined_bound,
    dedup_bloch,
    default_net,
    euclid_chord,
    ideal_records,
    sphere_scan,
    verify_covering,
    verify_packing,
)
from .witnesses import WitnessOperator, expect, w2, w3
from .tomo import (
    CountsTable,
    MeasurementSetting,
    WaveplateScheduleRow,
    mc_errorbar,
    pauli_settings,
    project_psd,
    reconstruct,
    simulate_counts,
    table1_schedule,
)

__version__ = "0.1.0"
