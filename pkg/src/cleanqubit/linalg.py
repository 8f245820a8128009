"""Complex dense linear algebra, Haar sampling on SU(n), and seeded RNG streams.

Generic matrices are plain ``numpy.ndarray`` objects with complex128 entries;
:class:`SpecialUnitary` wraps a validated member of SU(n).  All randomness in
the package flows through :class:`RngStream`, a counter-based (Philox) stream
keyed purely by ``(master_seed, stream_index)`` so that every draw is
reproducible and parallel workers can use disjoint streams.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .config import DEFAULT_TOL, Tolerances

_MASK64 = (1 << 64) - 1
_MIX = 0x9E3779B97F4A7C15  # odd multiplier; bijective index mixing mod 2^64


@dataclass(frozen=True)
class RngStream:
    """Deterministic random stream identified by (master_seed, stream_index).

    The same pair reproduces the same sequence on every run and platform;
    distinct stream indices give statistically independent streams (Philox
    counter mode keyed on both words).
    """

    master_seed: int
    stream_index: int = 0

    def generator(self) -> np.random.Generator:
        key = np.array(
            [self.master_seed & _MASK64, self.stream_index & _MASK64], dtype=np.uint64
        )
        return np.random.Generator(np.random.Philox(key=key))

    def substream(self, offset: int) -> "RngStream":
        """Derive a child stream; children of distinct parents do not collide
        in practice (multiplicative mixing of the parent index)."""
        mixed = (self.stream_index * _MIX + 1 + offset) & _MASK64
        return RngStream(self.master_seed, mixed)

    def substreams(self, count: int) -> list["RngStream"]:
        return [self.substream(i) for i in range(count)]


def as_matrix(m, square: bool = False) -> np.ndarray:
    """Validate and convert to a finite complex128 2-D array."""
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {a.shape}")
    if square and a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a.view(np.float64))):
        raise ValueError("matrix contains non-finite entries")
    return a


def mat_mul(a, b) -> np.ndarray:
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"shape mismatch for product: {a.shape} x {b.shape}")
    return a @ b


def mat_adjoint(a) -> np.ndarray:
    return as_matrix(a).conj().T


def mat_trace(a) -> complex:
    return complex(np.trace(as_matrix(a, square=True)))


def unitarity_defect(m: np.ndarray) -> float:
    """Max-norm of U^dag U - I."""
    n = m.shape[0]
    return float(np.abs(m.conj().T @ m - np.eye(n)).max())


@dataclass(frozen=True, eq=False)
class SpecialUnitary:
    """An n x n complex matrix validated to lie in SU(n).

    The wrapped array is copied and frozen (read-only) on construction, so
    instances are immutable and safe to share across workers.
    """

    matrix: np.ndarray
    tol: Tolerances = field(default=DEFAULT_TOL, repr=False)

    def __post_init__(self):
        m = np.array(self.matrix, dtype=np.complex128, order="C", copy=True)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
            raise ValueError(f"expected a square matrix, got shape {m.shape}")
        if not np.all(np.isfinite(m.view(np.float64))):
            raise ValueError("matrix contains non-finite entries")
        defect = unitarity_defect(m)
        if defect > self.tol.unitarity:
            raise ValueError(f"not unitary: |U^dag U - I|_max = {defect:.3e}")
        det_err = abs(np.linalg.det(m) - 1.0)
        if det_err > self.tol.determinant:
            raise ValueError(f"not special: |det U - 1| = {det_err:.3e}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    def adjoint(self) -> "SpecialUnitary":
        return SpecialUnitary(self.matrix.conj().T, self.tol)


def haar_unitaries(n: int, count: int, gen: np.random.Generator) -> np.ndarray:
    """Stack of `count` Haar-distributed SU(n) matrices, drawn from `gen`.

    Construction: an n x n matrix of i.i.d. standard complex Gaussians is
    QR-factorized; right-multiplying Q by the phases of diag(R) removes the
    factorization ambiguity and yields Haar measure on U(n).  Dividing by the
    principal n-th root of the determinant projects onto SU(n); the result is
    left- and right-invariant, hence Haar on SU(n).
    """
    if n < 1:
        raise ValueError("dimension must be >= 1")
    z = gen.standard_normal((count, n, n)) + 1j * gen.standard_normal((count, n, n))
    z *= np.sqrt(0.5)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r, axis1=-2, axis2=-1)
    q = q * (d / np.abs(d))[:, None, :]
    det = np.linalg.det(q)
    q *= np.exp(-1j * np.angle(det) / n)[:, None, None]
    return q


def haar_su(n: int, rng: RngStream, tol: Tolerances = DEFAULT_TOL) -> SpecialUnitary:
    """One Haar-random element of SU(n)."""
    if n < 1:
        raise ValueError("dimension must be >= 1")
    return SpecialUnitary(haar_unitaries(n, 1, rng.generator())[0], tol)


def random_traceless_hermitian(n: int, gen: np.random.Generator) -> np.ndarray:
    """GUE-scaled traceless Hermitian matrix with operator norm O(1) (~2)."""
    z = gen.standard_normal((n, n)) + 1j * gen.standard_normal((n, n))
    h = (z + z.conj().T) / np.sqrt(2.0 * n)
    idx = np.arange(n)
    h[idx, idx] -= np.trace(h).real / n
    return h


def perturbation_su(
    n: int, epsilon: float, rng: RngStream, tol: Tolerances = DEFAULT_TOL
) -> SpecialUnitary:
    """exp(i * epsilon * H) for a random traceless Hermitian H.

    Tracelessness forces unit determinant, so the output is in SU(n).  The
    exponential is evaluated through the eigendecomposition of H, which is
    exact to machine precision for Hermitian input.
    """
    if epsilon < 0:
        raise ValueError("epsilon must be >= 0")
    if n < 1:
        raise ValueError("dimension must be >= 1")
    h = random_traceless_hermitian(n, rng.generator())
    evals, vecs = np.linalg.eigh(h)
    u = (vecs * np.exp(1j * epsilon * evals)) @ vecs.conj().T
    return SpecialUnitary(u, tol)


def haar_state(n: int, gen: np.random.Generator) -> np.ndarray:
    """Haar-random unit vector in C^n (normalized complex Gaussian)."""
    z = gen.standard_normal(n) + 1j * gen.standard_normal(n)
    return z / np.linalg.norm(z)
