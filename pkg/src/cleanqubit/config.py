"""Central tolerance configuration.

Every numerical acceptance threshold used by the library lives here so that a
single record controls validation strictness everywhere.
"""
from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    """Numerical tolerances shared across the library.

    Attributes
    ----------
    unitarity : float
        Max-norm bound on ``|U^dag U - I|`` for special-unitary inputs.
    determinant : float
        Bound on ``|det U - 1|``.
    state_norm : float
        Bound on ``| ||psi||_2 - 1 |`` for state vectors.
    density_hermiticity : float
        Max-norm bound on ``|rho - rho^dag|``.
    density_trace : float
        Bound on ``|tr rho - 1|``.
    density_psd : float
        Most negative admissible eigenvalue of a density matrix.
    oracle_match : float
        Required agreement between circuit-level simulations and the
        closed-form acceptance probabilities.
    mc_check : float
        Default deviation tolerance of the Monte-Carlo identity checks at
        their default sample count (1e6).
    """

    unitarity: float = 1e-10
    determinant: float = 1e-8
    state_norm: float = 1e-10
    density_hermiticity: float = 1e-10
    density_trace: float = 1e-10
    density_psd: float = -1e-8
    oracle_match: float = 1e-9
    mc_check: float = 0.02


DEFAULT_TOL = Tolerances()

# Largest spin j for which the SU(2) representation checks run by default
# (dimension 2j + 1 = 7); index loops in the coupled-expansion check scale
# as dim^4.
DEFAULT_SPIN_CAP = 3.0

# Dimension caps for the brute-force circuit simulators.
DQC1_ORACLE_CAP = 64
FINGERPRINT_ORACLE_CAP = 16

# Default Monte-Carlo sample count for the identity-verification suites.
DEFAULT_MC_SAMPLES = 1_000_000
