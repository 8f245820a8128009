"""Two-endpoint wire simulation of the clean-qubit protocol.

Alice (holding A, C) and Bob (holding B, D) exchange the full register state
as serialized amplitude vectors over an ordered byte stream; neither endpoint
ever sees the other's matrices.  The transcript ledger counts *model* qubits
(4 transmissions of the control-plus-register state per protocol execution),
which is what the communication model charges; the payload size of the
simulation (2^(q+1) complex doubles per message) is reported separately so
the two numbers are never conflated.

Only the interactive clean-qubit protocol runs over the wire: the halves of
the fingerprinting protocol's entangled state have no local classical
representation, so a faithful two-endpoint simulation of it is impossible and
it is simulated in-process instead (see cleanqubit.circuits).
"""
from __future__ import annotations

import socket
import struct
import threading
from dataclasses import dataclass

import numpy as np

from .instances import AbcdInstance
from .linalg import RngStream, haar_state
from .protocols import (
    Decision,
    Protocol,
    apply_adjoint_gate,
    clean_qubit_initial,
    clean_qubit_plus_prob,
    default_threshold,
    mean_and_stderr,
    qubit_cost,
)

MAGIC = b"QMSG"
VERSION = 1
ALICE, BOB, CHARLIE = 0, 1, 2
_HEADER = struct.Struct("<4sIQIBIQ")  # magic version session round sender qubits payload_len
_MAX_PAYLOAD = 1 << 34  # refuse absurd lengths before allocating


class WireFormatError(ValueError):
    """Malformed wire frame (magic/version/length/payload inconsistency)."""


class SessionError(RuntimeError):
    """Aborted session; carries the partial ledger accumulated so far."""

    def __init__(self, message, partial_ledger=()):
        super().__init__(message)
        self.partial_ledger = list(partial_ledger)


@dataclass(frozen=True, eq=False)
class WireMessage:
    session_id: int
    round: int
    sender: int
    num_model_qubits: int
    amplitudes: np.ndarray
    version: int = VERSION


@dataclass(frozen=True)
class LedgerEntry:
    round: int
    sender: int
    model_qubits: int


@dataclass(frozen=True)
class TranscriptReport:
    n: int
    rounds: int
    total_model_qubits: int
    per_round: tuple[LedgerEntry, ...]
    decision: Decision
    estimate: float
    stderr: float
    samples: int
    payload_amplitudes: int
    payload_bytes: int

    def __post_init__(self):
        if self.total_model_qubits != sum(e.model_qubits for e in self.per_round):
            raise ValueError("ledger total does not match per-round entries")


def encode_message(msg: WireMessage) -> bytes:
    amp = np.ascontiguousarray(msg.amplitudes, dtype="<c16")
    payload = amp.tobytes()
    header = _HEADER.pack(
        MAGIC,
        msg.version,
        msg.session_id,
        msg.round,
        msg.sender,
        msg.num_model_qubits,
        len(payload),
    )
    return header + payload


def _parse_header(data: bytes):
    if len(data) < _HEADER.size:
        raise WireFormatError(
            f"truncated frame: {len(data)} bytes, need {_HEADER.size} for the header"
        )
    magic, version, session_id, rnd, sender, qubits, payload_len = _HEADER.unpack_from(data, 0)
    if magic != MAGIC:
        raise WireFormatError(f"bad magic {magic!r}, expected {MAGIC!r}")
    if version != VERSION:
        raise WireFormatError(f"unsupported version {version}, expected {VERSION}")
    if sender not in (ALICE, BOB, CHARLIE):
        raise WireFormatError(f"unknown sender code {sender}")
    if payload_len > _MAX_PAYLOAD:
        raise WireFormatError(f"payload_len {payload_len} exceeds the {_MAX_PAYLOAD} cap")
    if payload_len % 16 != 0:
        raise WireFormatError(f"payload_len {payload_len} is not a whole number of amplitudes")
    count = payload_len // 16
    if count < 2 or count & (count - 1):
        raise WireFormatError(
            f"payload of {count} amplitudes is not a power-of-two state vector"
        )
    return version, session_id, rnd, sender, qubits, payload_len


def decode_message(data: bytes) -> WireMessage:
    version, session_id, rnd, sender, qubits, payload_len = _parse_header(data)
    if len(data) != _HEADER.size + payload_len:
        raise WireFormatError(
            f"frame length {len(data)} does not match header + payload_len "
            f"{_HEADER.size + payload_len}"
        )
    amp = np.frombuffer(data, dtype="<c16", count=payload_len // 16, offset=_HEADER.size)
    return WireMessage(session_id, rnd, sender, qubits, amp.copy(), version)


class Endpoint:
    """Length-prefixed WireMessage framing over a connected byte stream."""

    def __init__(self, conn: socket.socket):
        self._conn = conn

    def send(self, msg: WireMessage) -> None:
        self._conn.sendall(encode_message(msg))

    def _read_exact(self, count: int) -> bytes | None:
        chunks = []
        remaining = count
        while remaining:
            chunk = self._conn.recv(remaining)
            if not chunk:
                if chunks:
                    raise WireFormatError("connection closed mid-frame")
                return None
            chunks.append(chunk)
            remaining -= len(chunk)
        return b"".join(chunks)

    def recv(self) -> WireMessage | None:
        """Next message, or None on clean end-of-stream."""
        header = self._read_exact(_HEADER.size)
        if header is None:
            return None
        payload_len = _parse_header(header)[-1]
        payload = self._read_exact(payload_len)
        if payload is None:
            raise WireFormatError("connection closed before payload")
        return decode_message(header + payload)

    def close(self):
        self._conn.close()


def bob_agent(conn: socket.socket, b_matrix: np.ndarray, d_matrix: np.ndarray) -> int:
    """Bob's endpoint: applies controlled-B^dag / controlled-D^dag by round.

    Sees only his own matrices and the transmitted state; runs until the
    stream closes.  Returns the number of messages handled.
    """
    ep = Endpoint(conn)
    handled = 0
    while True:
        msg = ep.recv()
        if msg is None:
            return handled
        phase = msg.round % 4
        if phase == 1:
            gate = b_matrix
        elif phase == 3:
            gate = d_matrix
        else:
            raise WireFormatError(f"unexpected round {msg.round} at Bob")
        half = msg.amplitudes.size // 2
        top = msg.amplitudes[:half]
        bottom = apply_adjoint_gate(gate, msg.amplitudes[half:])
        ep.send(
            WireMessage(
                msg.session_id,
                msg.round + 1,
                BOB,
                msg.num_model_qubits,
                np.concatenate([top, bottom]),
            )
        )
        handled += 1


def alice_agent(
    conn: socket.socket,
    a_matrix: np.ndarray,
    c_matrix: np.ndarray,
    n: int,
    samples: int,
    rng: RngStream,
    session_id: int,
) -> tuple[list[float], list[LedgerEntry]]:
    """Alice's endpoint: prepares states, applies her controlled gates, sends,
    and measures (analytically) after the final reply.

    The per-sample state draws and the accept-probability arithmetic are the
    same operations as the in-process estimator, so the resulting estimate is
    bit-identical to ``dqc1_accept_sampled`` under the same stream.
    """
    ep = Endpoint(conn)
    gen = rng.generator()
    model_qubits = qubit_cost(Protocol.DQC1, n) // 4
    probs = []
    ledger = []
    for s in range(samples):
        v = haar_state(n, gen)
        top, bottom = clean_qubit_initial(v)
        bottom = apply_adjoint_gate(a_matrix, bottom)
        ep.send(
            WireMessage(session_id, 1, ALICE, model_qubits, np.concatenate([top, bottom]))
        )
        reply = ep.recv()
        if reply is None:
            raise WireFormatError("Bob closed the stream mid-protocol")
        half = reply.amplitudes.size // 2
        top, bottom = reply.amplitudes[:half], reply.amplitudes[half:]
        bottom = apply_adjoint_gate(c_matrix, bottom)
        ep.send(
            WireMessage(session_id, 3, ALICE, model_qubits, np.concatenate([top, bottom]))
        )
        reply = ep.recv()
        if reply is None:
            raise WireFormatError("Bob closed the stream mid-protocol")
        half = reply.amplitudes.size // 2
        probs.append(clean_qubit_plus_prob(reply.amplitudes[:half], reply.amplitudes[half:]))
        if s == 0:
            # one protocol execution's worth of model transmissions
            ledger = [
                LedgerEntry(1, ALICE, model_qubits),
                LedgerEntry(2, BOB, model_qubits),
                LedgerEntry(3, ALICE, model_qubits),
                LedgerEntry(4, BOB, model_qubits),
            ]
    return probs, ledger


def run_session(
    inst: AbcdInstance,
    samples: int,
    rng: RngStream,
    threshold: float | None = None,
) -> TranscriptReport:
    """Drive a full session with Alice and Bob as isolated in-process agents.

    The instance is split before the agents start: Alice's task receives only
    (A, C), Bob's only (B, D); all interaction flows through a socket pair.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    if threshold is None:
        threshold = default_threshold(Protocol.DQC1)
    session_id = (inst.seed ^ 0xC0FFEE) & ((1 << 64) - 1)
    alice_conn, bob_conn = socket.socketpair()
    bob_error: list[BaseException] = []

    def bob_main():
        try:
            bob_agent(bob_conn, inst.b.matrix, inst.d.matrix)
        except BaseException as exc:  # surfaced after join
            bob_error.append(exc)
        finally:
            bob_conn.close()

    bob_thread = threading.Thread(target=bob_main, name="netsim-bob")
    bob_thread.start()
    ledger: list[LedgerEntry] = []
    try:
        probs, ledger = alice_agent(
            alice_conn, inst.a.matrix, inst.c.matrix, inst.n, samples, rng, session_id
        )
    except (WireFormatError, OSError) as exc:
        alice_conn.close()
        bob_thread.join()
        raise SessionError(f"session aborted: {exc}", ledger) from exc
    alice_conn.close()
    bob_thread.join()
    if bob_error:
        raise SessionError(f"Bob endpoint failed: {bob_error[0]}", ledger) from bob_error[0]

    estimate, stderr = mean_and_stderr(probs)
    decision = Decision.ACCEPT_YES if estimate >= threshold else Decision.REJECT_NO
    q = qubit_cost(Protocol.DQC1, inst.n) // 4
    return TranscriptReport(
        n=inst.n,
        rounds=len(ledger),
        total_model_qubits=sum(e.model_qubits for e in ledger),
        per_round=tuple(ledger),
        decision=decision,
        estimate=estimate,
        stderr=stderr,
        samples=samples,
        payload_amplitudes=2 * inst.n,
        payload_bytes=_HEADER.size + 16 * 2 * inst.n,
    )


def serve_bob(host: str, port: int, inst: AbcdInstance) -> int:
    """Listen for one Alice connection and run Bob's endpoint over TCP."""
    with socket.create_server((host, port)) as server:
        conn, _ = server.accept()
        with conn:
            return bob_agent(conn, inst.b.matrix, inst.d.matrix)


def connect_alice(
    host: str,
    port: int,
    inst: AbcdInstance,
    samples: int,
    rng: RngStream,
    threshold: float | None = None,
) -> TranscriptReport:
    """Run Alice's endpoint against a remote Bob over TCP."""
    if threshold is None:
        threshold = default_threshold(Protocol.DQC1)
    session_id = (inst.seed ^ 0xC0FFEE) & ((1 << 64) - 1)
    with socket.create_connection((host, port)) as conn:
        probs, ledger = alice_agent(
            conn, inst.a.matrix, inst.c.matrix, inst.n, samples, rng, session_id
        )
    estimate, stderr = mean_and_stderr(probs)
    decision = Decision.ACCEPT_YES if estimate >= threshold else Decision.REJECT_NO
    return TranscriptReport(
        n=inst.n,
        rounds=len(ledger),
        total_model_qubits=sum(e.model_qubits for e in ledger),
        per_round=tuple(ledger),
        decision=decision,
        estimate=estimate,
        stderr=stderr,
        samples=samples,
        payload_amplitudes=2 * inst.n,
        payload_bytes=_HEADER.size + 16 * 2 * inst.n,
    )
