"""Brute-force circuit-level simulators for both protocols.

These simulators evolve explicit multi-qubit states through the literal gate
sequences and must reproduce the closed-form acceptance probabilities of
:mod:`cleanqubit.protocols` to 1e-9; they exist as an independent check on
those formulas, so they share no arithmetic with them.

Conventions: qubit 0 is the most significant bit of the amplitude index, a
register span is a contiguous range of qubits, and the clean-qubit simulation
uses a density matrix (the exact mixed-state model) while the fingerprinting
simulation uses a state vector.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .config import DEFAULT_TOL, DQC1_ORACLE_CAP, FINGERPRINT_ORACLE_CAP, Tolerances
from .instances import AbcdInstance
from .linalg import SpecialUnitary

_H = np.array([[1.0, 1.0], [1.0, -1.0]], dtype=complex) / np.sqrt(2.0)


class OracleCapError(ValueError):
    """Instance dimension above the configured brute-force cap."""


def _require_power_of_two(n: int) -> int:
    k = n.bit_length() - 1
    if n < 2 or (1 << k) != n:
        raise ValueError(f"circuit register requires a power-of-two dimension, got n={n}")
    return k


@dataclass(frozen=True, eq=False)
class StateVector:
    """Pure state on ``num_qubits`` qubits; 2^m complex amplitudes, unit norm."""

    amplitudes: np.ndarray
    tol: Tolerances = field(default=DEFAULT_TOL, repr=False)

    def __post_init__(self):
        amp = np.array(self.amplitudes, dtype=np.complex128, copy=True).reshape(-1)
        m = amp.size.bit_length() - 1
        if amp.size < 2 or (1 << m) != amp.size:
            raise ValueError(f"amplitude count {amp.size} is not a power of two")
        norm = np.linalg.norm(amp)
        if abs(norm - 1.0) > self.tol.state_norm:
            raise ValueError(f"state not normalized: ||psi|| - 1 = {norm - 1.0:.3e}")
        amp.setflags(write=False)
        object.__setattr__(self, "amplitudes", amp)

    @property
    def num_qubits(self) -> int:
        return self.amplitudes.size.bit_length() - 1


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Mixed state on ``num_qubits`` qubits: Hermitian, unit trace."""

    matrix: np.ndarray
    tol: Tolerances = field(default=DEFAULT_TOL, repr=False)

    def __post_init__(self):
        m = np.array(self.matrix, dtype=np.complex128, copy=True)
        dim = m.shape[0]
        k = dim.bit_length() - 1
        if m.ndim != 2 or m.shape != (dim, dim) or dim < 2 or (1 << k) != dim:
            raise ValueError(f"density matrix shape {m.shape} is not (2^m, 2^m)")
        herm = np.abs(m - m.conj().T).max()
        if herm > self.tol.density_hermiticity:
            raise ValueError(f"not Hermitian: max |rho - rho^dag| = {herm:.3e}")
        tr_err = abs(np.trace(m) - 1.0)
        if tr_err > self.tol.density_trace:
            raise ValueError(f"trace not 1: |tr rho - 1| = {tr_err:.3e}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def num_qubits(self) -> int:
        return self.matrix.shape[0].bit_length() - 1

    def check_psd(self) -> float:
        """Smallest eigenvalue; diagnostic only (costs a full eigensolve)."""
        smallest = float(np.linalg.eigvalsh(self.matrix)[0])
        if smallest < self.tol.density_psd:
            raise ValueError(f"not positive semidefinite: min eigenvalue {smallest:.3e}")
        return smallest


def _apply_gate_columns(arr: np.ndarray, gate: np.ndarray, qubits, m: int) -> np.ndarray:
    """Apply `gate` on the listed qubits of axis 0; axis 1 is a batch axis."""
    batch = arr.shape[1]
    psi = arr.reshape([2] * m + [batch])
    rest = [q for q in range(m) if q not in qubits]
    perm = list(qubits) + rest + [m]
    psi = np.transpose(psi, perm).reshape(2 ** len(qubits), -1)
    psi = gate @ psi
    psi = psi.reshape([2] * m + [batch])
    inv = np.argsort(perm)
    return np.transpose(psi, inv).reshape(2**m, batch)


def _gate_on(state, gate: np.ndarray, qubits):
    """Dispatch a unitary on a qubit subset to either state representation."""
    qubits = list(qubits)
    m = state.num_qubits
    if len(set(qubits)) != len(qubits) or any(q < 0 or q >= m for q in qubits):
        raise ValueError(f"invalid qubit list {qubits} for {m} qubits")
    if gate.shape != (2 ** len(qubits), 2 ** len(qubits)):
        raise ValueError(
            f"gate shape {gate.shape} incompatible with {len(qubits)} target qubits"
        )
    if isinstance(state, StateVector):
        out = _apply_gate_columns(state.amplitudes[:, None], gate, qubits, m)
        return StateVector(out[:, 0], state.tol)
    if isinstance(state, DensityMatrix):
        left = _apply_gate_columns(state.matrix, gate, qubits, m)  # G rho
        both = _apply_gate_columns(left.conj().T, gate, qubits, m)  # G rho^dag G^dag
        return DensityMatrix(both.conj().T, state.tol)
    raise TypeError(f"unsupported state type {type(state)!r}")


def apply_controlled(state, u: SpecialUnitary, control: int, control_value: int, target):
    """Controlled-U: applies U on the target span when the control qubit holds
    ``control_value``, identity otherwise.  Density matrices are conjugated by
    the same operator."""
    target = list(target)
    if control in target:
        raise ValueError("control qubit cannot be part of the target span")
    if control_value not in (0, 1):
        raise ValueError("control_value must be 0 or 1")
    k = len(target)
    if u.n != 2**k:
        raise ValueError(f"target span of {k} qubits incompatible with U of dimension {u.n}")
    dim = 2**k
    gate = np.zeros((2 * dim, 2 * dim), dtype=complex)
    keep = 1 - control_value
    gate[keep * dim : keep * dim + dim, keep * dim : keep * dim + dim] = np.eye(dim)
    gate[
        control_value * dim : control_value * dim + dim,
        control_value * dim : control_value * dim + dim,
    ] = u.matrix
    return _gate_on(state, gate, [control] + target)


def apply_hadamard(state, qubit: int):
    return _gate_on(state, _H, [qubit])


def apply_controlled_swap(state: StateVector, control: int, span_a, span_b) -> StateVector:
    """Swap two equal-size registers on the branch where `control` is 1.

    Implemented as an explicit permutation of amplitude indices (an axis
    transposition of the controlled branch), never as a dense matrix.
    """
    span_a, span_b = list(span_a), list(span_b)
    if len(span_a) != len(span_b):
        raise ValueError("swap spans must have equal size")
    if set(span_a) & set(span_b) or control in span_a + span_b:
        raise ValueError("control and swap spans must be disjoint")
    m = state.num_qubits
    psi = np.array(state.amplitudes, copy=True).reshape([2] * m)
    branch = [slice(None)] * m
    branch[control] = 1
    axes = list(range(m))
    for qa, qb in zip(span_a, span_b):
        axes[qa], axes[qb] = axes[qb], axes[qa]
    # transposing the controlled branch only; axis numbering inside the slice
    # drops the control axis
    sub_axes = [a for a in axes if a != control]
    order = [sorted(sub_axes).index(a) for a in sub_axes]
    psi[tuple(branch)] = np.transpose(psi[tuple(branch)], order)
    return StateVector(psi.reshape(-1), state.tol)


def measure_plus_prob(state, qubit: int) -> float:
    """Born probability of outcome |+> when measuring `qubit` in the Hadamard basis."""
    m = state.num_qubits
    if isinstance(state, StateVector):
        psi = state.amplitudes.reshape([2] * m)
        psi = np.moveaxis(psi, qubit, 0)
        proj = (psi[0] + psi[1]) / np.sqrt(2.0)
        return float(np.vdot(proj, proj).real)
    if isinstance(state, DensityMatrix):
        dim = 2**m
        rho = state.matrix.reshape([2] * m + [2] * m)
        rho = np.moveaxis(rho, (qubit, m + qubit), (0, m))
        rho = rho.reshape(2, dim // 2, 2, dim // 2)
        acc = 0.0j
        for i in range(2):
            for j in range(2):
                acc += np.trace(rho[i, :, j, :])
        return float(acc.real) / 2.0
    raise TypeError(f"unsupported state type {type(state)!r}")


def _measure_plus_pair_prob(state: StateVector, q0: int, q1: int) -> float:
    """Probability that both listed qubits give |+> in the Hadamard basis."""
    m = state.num_qubits
    psi = state.amplitudes.reshape([2] * m)
    psi = np.moveaxis(psi, (q0, q1), (0, 1))
    proj = (psi[0, 0] + psi[0, 1] + psi[1, 0] + psi[1, 1]) / 2.0
    return float(np.vdot(proj, proj).real)


def dqc1_circuit_sim(inst: AbcdInstance, cap: int = DQC1_ORACLE_CAP) -> float:
    """Density-matrix simulation of the clean-qubit protocol.

    Starts from |0><0| (x) I/n on 1 + log2(n) qubits, applies the Hadamard and
    the four controlled adjoint gates, and returns the Born probability of
    |+> on the clean qubit.
    """
    n = inst.n
    if n > cap:
        raise OracleCapError(
            f"n={n} above the clean-qubit oracle cap {cap}; "
            "the density-matrix simulation is quadratic in n"
        )
    m = 1 + _require_power_of_two(n)
    rho = np.zeros((2 * n, 2 * n), dtype=complex)
    rho[:n, :n] = np.eye(n) / n  # clean qubit |0>, register maximally mixed
    state = apply_hadamard(DensityMatrix(rho), 0)
    register = range(1, m)
    for u in (inst.a, inst.b, inst.c, inst.d):
        state = apply_controlled(state, u.adjoint(), 0, 1, register)
    return measure_plus_prob(state, 0)


def dqc1_pure_state_sim(inst: AbcdInstance, v: np.ndarray) -> float:
    """Same circuit run on the pure register state |0>(x)|v> (mixture member)."""
    n = inst.n
    m = 1 + _require_power_of_two(n)
    amp = np.zeros(2 * n, dtype=complex)
    amp[:n] = v
    state = apply_hadamard(StateVector(amp), 0)
    for u in (inst.a, inst.b, inst.c, inst.d):
        state = apply_controlled(state, u.adjoint(), 0, 1, range(1, m))
    return measure_plus_prob(state, 0)


def fingerprint_circuit_sim(inst: AbcdInstance, cap: int = FINGERPRINT_ORACLE_CAP) -> float:
    """State-vector simulation of the entangled-fingerprinting protocol.

    Registers: two control qubits (Alice's, Bob's) and two n-dimensional
    registers sharing maximal entanglement.  Each player applies a two-block
    gate on their half, with blocks transposed/conjugated relative to the raw
    inputs so that the interference term of the swap test is tr(ABCD) (a gate
    applied to one half of a maximally entangled pair acts as its transpose on
    the other half).  The referee measures Bob's control in the Hadamard basis
    (which uncomputes it), applies the controlled swap of the two registers,
    and measures the remaining control in the Hadamard basis; acceptance is
    the event that both outcomes are |+>.
    """
    n = inst.n
    if n > cap:
        raise OracleCapError(
            f"n={n} above the fingerprinting oracle cap {cap}; "
            "the shared state has dimension 4n^2"
        )
    k = _require_power_of_two(n)
    psi = np.zeros((2, 2, n, n), dtype=complex)
    idx = np.arange(n)
    psi[0, 0, idx, idx] = 1.0 / np.sqrt(2.0 * n)
    psi[1, 1, idx, idx] = 1.0 / np.sqrt(2.0 * n)
    state = StateVector(psi.reshape(-1))

    reg_a = range(2, 2 + k)
    reg_b = range(2 + k, 2 + 2 * k)
    alice0 = SpecialUnitary(inst.a.matrix.conj().T)  # A^dag
    alice1 = SpecialUnitary(inst.c.matrix.T)  # C^T
    bob0 = SpecialUnitary(inst.d.matrix.conj())  # conj(D)
    bob1 = inst.b
    state = apply_controlled(state, alice0, 0, 0, reg_a)
    state = apply_controlled(state, alice1, 0, 1, reg_a)
    state = apply_controlled(state, bob0, 1, 0, reg_b)
    state = apply_controlled(state, bob1, 1, 1, reg_b)
    state = apply_controlled_swap(state, 0, reg_a, reg_b)
    return _measure_plus_pair_prob(state, 0, 1)


def swap_test_sim(u: StateVector, v: StateVector) -> float:
    """Swap-test accept probability 1/2 (1 + |<u|v>|^2).

    Also runs the explicit ancilla + controlled-swap circuit; the two paths
    must agree to 1e-12 (internal consistency check).
    """
    if u.amplitudes.size != v.amplitudes.size:
        raise ValueError("swap test requires equal state dimensions")
    overlap = np.vdot(u.amplitudes, v.amplitudes)
    formula = 0.5 * (1.0 + abs(overlap) ** 2)

    k = u.num_qubits
    psi = np.zeros((2,) + (u.amplitudes.size,) * 2, dtype=complex)
    psi[0] = np.outer(u.amplitudes, v.amplitudes)
    state = StateVector(psi.reshape(-1))
    state = apply_hadamard(state, 0)
    state = apply_controlled_swap(state, 0, range(1, 1 + k), range(1 + k, 1 + 2 * k))
    state = apply_hadamard(state, 0)
    amps = state.amplitudes.reshape(2, -1)
    circuit = float(np.vdot(amps[0], amps[0]).real)
    if abs(circuit - formula) > 1e-12:
        raise ArithmeticError(
            f"swap-test paths disagree: formula {formula!r} vs circuit {circuit!r}"
        )
    return formula
