"""Acceptance probabilities and decision logic for the two quantum protocols.

Both protocols decide the trace-product promise through the same functional
Re tr(ABCD)/n:

* clean-qubit interactive protocol: accept probability 1/2 + Re tr(ABCD)/(2n),
  hence >= 0.95 on Yes instances and <= 0.55 on No instances;
* entangled-fingerprinting simultaneous protocol: 1/4 + Re tr(ABCD)/(4n),
  hence >= 0.475 on Yes and <= 0.275 on No.

The closed forms are averages over the Haar-random register state; sampled
estimators draw explicit unit vectors.  ``amplify_decide`` turns the
single-shot gap into a majority decision with a Hoeffding error bound.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .instances import AbcdInstance
from .linalg import RngStream, haar_state


class Protocol(enum.Enum):
    DQC1 = "dqc1"
    FINGERPRINT = "fingerprint"


class Decision(enum.Enum):
    ACCEPT_YES = "AcceptYes"
    REJECT_NO = "RejectNo"


# Acceptance-probability bounds implied by the promise: on No instances the
# protocol accepts with probability at most bounds[0], on Yes instances with
# probability at least bounds[1].
PROMISE_ACCEPT_BOUNDS = {
    Protocol.DQC1: (0.55, 0.95),
    Protocol.FINGERPRINT: (0.275, 0.475),
}


def default_threshold(protocol: Protocol) -> float:
    """Midpoint of the promise gap: maximizes the Hoeffding margin."""
    lo, hi = PROMISE_ACCEPT_BOUNDS[protocol]
    return (lo + hi) / 2.0


@dataclass(frozen=True)
class DecisionRule:
    threshold: float
    repetitions: int

    def __post_init__(self):
        if not 0.0 < self.threshold < 1.0:
            raise ValueError("threshold must lie strictly inside (0, 1)")
        if self.repetitions < 1:
            raise ValueError("repetitions must be >= 1")


@dataclass(frozen=True)
class ProtocolReport:
    protocol: Protocol
    decision: Decision
    qubit_cost: int
    samples: int = 0
    stderr: float = 0.0
    exact_p: float | None = None
    estimated_p: float | None = None
    error_bound: float | None = None

    @property
    def flagged(self) -> bool:
        """True when exact and estimated probabilities disagree beyond 5 sigma."""
        if self.exact_p is None or self.estimated_p is None:
            return False
        slack = 5.0 * self.stderr + 1e-12
        return abs(self.exact_p - self.estimated_p) > slack


def re_trace_fraction(inst: AbcdInstance) -> float:
    return inst.trace_abcd().real / inst.n


def dqc1_accept_exact(inst: AbcdInstance) -> float:
    """Average accept probability of the clean-qubit protocol.

    Per register state v the protocol accepts with probability
    1/2 + Re <v|ABCD|v>/2; averaging <v|ABCD|v> over Haar-random unit v gives
    tr(ABCD)/n.
    """
    return 0.5 + 0.5 * re_trace_fraction(inst)


def fingerprint_accept_exact(inst: AbcdInstance) -> float:
    """Single-shot accept probability of the entangled-fingerprinting protocol,
    1/4 + Re tr(ABCD)/(4n)."""
    return 0.25 + 0.25 * re_trace_fraction(inst)


# --- clean-qubit register pipeline -----------------------------------------
#
# The register state is tracked as the two branches of the control qubit:
# |psi> = |0>(x)top + |1>(x)bottom.  The same operations (in the same order)
# are used by the in-process estimator and by the wire simulation, which makes
# their estimates bit-identical under a shared RNG stream.


def clean_qubit_initial(v: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Branches after the Hadamard on the clean qubit: (|0> + |1>)/sqrt(2) (x) v."""
    s = v / np.sqrt(2.0)
    return s.copy(), s.copy()


def apply_adjoint_gate(matrix: np.ndarray, bottom: np.ndarray) -> np.ndarray:
    """U^dag applied to the |1> branch (the controlled gate of the protocol)."""
    return matrix.conj().T @ bottom


def clean_qubit_plus_prob(top: np.ndarray, bottom: np.ndarray) -> float:
    """Born probability of outcome |+> on the control qubit."""
    s = top + bottom
    return float(np.vdot(s, s).real) / 2.0


def _dqc1_sample_prob(inst: AbcdInstance, v: np.ndarray) -> float:
    top, bottom = clean_qubit_initial(v)
    for u in (inst.a, inst.b, inst.c, inst.d):
        bottom = apply_adjoint_gate(u.matrix, bottom)
    return clean_qubit_plus_prob(top, bottom)


def mean_and_stderr(values) -> tuple[float, float]:
    vals = np.asarray(values, dtype=float)
    mean = float(vals.mean())
    if vals.size < 2:
        return mean, 0.0
    return mean, float(vals.std(ddof=1) / np.sqrt(vals.size))


def dqc1_accept_sampled(
    inst: AbcdInstance,
    samples: int,
    rng: RngStream,
    bernoulli: bool = False,
    workers: int = 1,
) -> tuple[float, float]:
    """Monte-Carlo estimate of the clean-qubit accept probability.

    Draws Haar-random register states v and evaluates the per-state accept
    probability p_v = 1/2 + Re <v|ABCD|v>/2 through the explicit gate
    pipeline.  In the default variance-reduced mode the p_v are averaged
    directly; in ``bernoulli`` mode each p_v is replaced by a coin flip, which
    models the actual single-shot measurement record.

    ``workers`` fixes the block structure of the sample partition (one RNG
    substream per block); the result is reproducible for a fixed worker count.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    if workers < 1:
        raise ValueError("workers must be >= 1")
    if workers == 1:
        blocks = [(rng, samples)]
    else:
        sizes = [samples // workers + (1 if i < samples % workers else 0) for i in range(workers)]
        blocks = [(s, size) for s, size in zip(rng.substreams(workers), sizes) if size]
    values = []
    for stream, size in blocks:
        gen = stream.generator()
        for _ in range(size):
            v = haar_state(inst.n, gen)
            p = _dqc1_sample_prob(inst, v)
            if bernoulli:
                values.append(1.0 if gen.random() < p else 0.0)
            else:
                values.append(p)
    return mean_and_stderr(values)


def qubit_cost(protocol: Protocol, n: int) -> int:
    """Model qubits exchanged by one protocol execution.

    The register holds ceil(log2 n) qubits plus the control.  The clean-qubit
    protocol transmits the full register four times (Alice-Bob-Alice-Bob-
    Alice); the fingerprinting protocol sends the two halves of the shared
    state to the referee, one per player.
    """
    if n < 2:
        raise ValueError("qubit cost defined for n >= 2")
    q = (n - 1).bit_length()  # ceil(log2 n)
    if protocol is Protocol.DQC1:
        return 4 * (q + 1)
    return 2 * (q + 1)


def hoeffding_bound(rule: DecisionRule, protocol: Protocol) -> float:
    lo, hi = PROMISE_ACCEPT_BOUNDS[protocol]
    margin = min(hi - rule.threshold, rule.threshold - lo)
    return 2.0 * math.exp(-2.0 * rule.repetitions * margin**2)


def amplify_decide(
    protocol: Protocol,
    inst: AbcdInstance,
    rule: DecisionRule,
    rng: RngStream,
) -> ProtocolReport:
    """Repeat the protocol ``rule.repetitions`` times and take a threshold vote.

    Each trial is a single-shot Bernoulli outcome of the protocol (fresh
    register state for the clean-qubit protocol, fresh measurement for the
    fingerprinting protocol).  Accepts iff the empirical accept fraction
    reaches the threshold; the reported error bound is the two-sided Hoeffding
    tail 2*exp(-2k*margin^2) at the distance from the threshold to the nearer
    promise bound.
    """
    lo, hi = PROMISE_ACCEPT_BOUNDS[protocol]
    if not lo < rule.threshold < hi:
        raise ValueError(
            f"threshold {rule.threshold} outside the open promise gap ({lo}, {hi})"
        )
    gen = rng.generator()
    k = rule.repetitions
    hits = 0
    if protocol is Protocol.DQC1:
        # analytic per-state accept probability; product precomputed once
        w = (inst.a.matrix @ inst.b.matrix) @ (inst.c.matrix @ inst.d.matrix)
        for _ in range(k):
            v = haar_state(inst.n, gen)
            p = 0.5 + 0.5 * float(np.vdot(v, w @ v).real)
            if gen.random() < p:
                hits += 1
        exact = dqc1_accept_exact(inst)
    else:
        exact = fingerprint_accept_exact(inst)
        hits = int(np.count_nonzero(gen.random(k) < exact))
    frac = hits / k
    decision = Decision.ACCEPT_YES if frac >= rule.threshold else Decision.REJECT_NO
    stderr = math.sqrt(frac * (1.0 - frac) / k)
    return ProtocolReport(
        protocol=protocol,
        decision=decision,
        qubit_cost=qubit_cost(protocol, inst.n),
        samples=k,
        stderr=stderr,
        exact_p=exact,
        estimated_p=frac,
        error_bound=hoeffding_bound(rule, protocol),
    )
