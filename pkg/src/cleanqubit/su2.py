"""SU(2) irreducible representations and Monte-Carlo Fourier verification.

The spin-j irrep is constructed as the action of SU(2) on the orthonormalized
monomials of degree 2j in two variables, which gives unitary matrices and the
homomorphism property by construction.  Normalized matrix coefficients

    coef_{i,j}(g) = sqrt(dim) * D(g)_{i,j}

form an orthonormal basis of L2(SU(2)); the checks in this module verify, by
Haar Monte Carlo against exact coefficient arithmetic on band-limited
functions:

* orthonormality of the coefficient basis (``check_schur``),
* the convolution rule  coef_{i,j} * coef_{k,l} =
  [j = k][same irrep] coef_{i,l} / sqrt(dim)  (``check_convolution``),
* the Fourier transform fhat(pi) = E_g[f(g) coef(g^{-1})]
  (``fourier_coeff_mc``) and its Plancherel pairing (``check_plancherel``),
* the coefficients of the diagonal measure, the push-forward of Haar under
  x -> (x, x^{-1}) (``mu_diag_coeff``),
* the expansion of the coupled expectation E[f(A,C) g(B,(ABC)^{-1})] over
  matching irrep pairs (``check_claim_expansion``).

Index convention for functions on SU(2)^2: a pair coefficient
fhat(pi,sigma)_{i,j,k,l} multiplies coef_{j,i}(X) coef_{l,k}(Y) in the inverse
transform, i.e. indices transpose within each factor.  The packaged
brute-force fixture (claim_lhs_oracle.json) pins this ordering.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from .config import DEFAULT_MC_SAMPLES, DEFAULT_SPIN_CAP, DEFAULT_TOL
from .linalg import RngStream, haar_unitaries

_BATCH = 1 << 17


@dataclass(frozen=True)
class SpinIrrep:
    """Spin-j irrep of SU(2), stored as two_j = 2j to stay integral."""

    two_j: int

    def __post_init__(self):
        if self.two_j < 0:
            raise ValueError("two_j must be >= 0")

    @property
    def dim(self) -> int:
        return self.two_j + 1

    @property
    def spin(self) -> float:
        return self.two_j / 2.0


def _check_spin_cap(*two_js, spin_cap: float = DEFAULT_SPIN_CAP):
    for tj in two_js:
        if tj > 2 * spin_cap:
            raise ValueError(f"two_j={tj} above the spin cap {spin_cap} (dim {int(2*spin_cap)+1})")


def wigner_d_batch(two_j: int, us: np.ndarray) -> np.ndarray:
    """Spin-j representation matrices for a stack of SU(2) elements.

    The matrix is the action of u on the orthonormal basis
    x^(2j-k) y^k / sqrt((2j-k)! k!) of degree-2j homogeneous polynomials,
    obtained by expanding (a x + c y)^(2j-k) (b x + d y)^k binomially.
    """
    if two_j < 0:
        raise ValueError("two_j must be >= 0")
    us = np.asarray(us, dtype=complex)
    if us.shape[-2:] != (2, 2):
        raise ValueError(f"expected (...,2,2) input, got shape {us.shape}")
    dim = two_j + 1
    if two_j == 0:
        return np.ones(us.shape[:-2] + (1, 1), dtype=complex)
    if two_j == 1:
        return us.copy()
    a, b = us[..., 0, 0], us[..., 0, 1]
    c, d = us[..., 1, 0], us[..., 1, 1]

    def powers(z):
        p = np.empty((two_j + 1,) + z.shape, dtype=complex)
        p[0] = 1.0
        for t in range(1, two_j + 1):
            p[t] = p[t - 1] * z
        return p

    ap, bp, cp, dp = powers(a), powers(b), powers(c), powers(d)
    norm = np.array([math.sqrt(math.factorial(two_j - t) * math.factorial(t)) for t in range(dim)])
    out = np.zeros(us.shape[:-2] + (dim, dim), dtype=complex)
    for k in range(dim):
        p = two_j - k
        for m in range(dim):
            acc = 0.0
            for r in range(max(0, m - k), min(p, m) + 1):
                s = m - r
                acc = acc + (
                    math.comb(p, r) * math.comb(k, s) * ap[p - r] * cp[r] * bp[k - s] * dp[s]
                )
            out[..., m, k] = acc * (norm[m] / norm[k])
    return out


def wigner_d(two_j: int, u: np.ndarray) -> np.ndarray:
    """Spin-j irrep matrix of a single 2x2 special unitary; unitary to 1e-10."""
    u = np.asarray(u, dtype=complex)
    if u.shape != (2, 2):
        raise ValueError(f"expected a 2x2 matrix, got shape {u.shape}")
    return wigner_d_batch(two_j, u[None])[0]


def normalized_coeffs(two_j: int, us: np.ndarray) -> np.ndarray:
    """sqrt(dim) * D(g): the orthonormal matrix-coefficient values."""
    return np.sqrt(two_j + 1.0) * wigner_d_batch(two_j, us)


def _inv_coeffs(two_j: int, us: np.ndarray) -> np.ndarray:
    """Normalized coefficients of the inverse, coef(g^{-1}) = coef(g)^dag."""
    return normalized_coeffs(two_j, us).conj().swapaxes(-1, -2)


# --- band-limited functions -------------------------------------------------


@dataclass(frozen=True)
class Term:
    """One summand c * coef_{i,k}(X) * coef_{l,m}(Y) of a band-limited function."""

    two_j_x: int
    two_j_y: int
    i: int
    k: int
    l: int
    m: int
    coeff: complex

    def __post_init__(self):
        if self.two_j_x < 0 or self.two_j_y < 0:
            raise ValueError("irrep labels must be >= 0")
        dx, dy = self.two_j_x + 1, self.two_j_y + 1
        if not (0 <= self.i < dx and 0 <= self.k < dx):
            raise ValueError(f"X indices ({self.i},{self.k}) out of range for dim {dx}")
        if not (0 <= self.l < dy and 0 <= self.m < dy):
            raise ValueError(f"Y indices ({self.l},{self.m}) out of range for dim {dy}")


@dataclass(frozen=True, eq=False)
class BandLimitedFn:
    """Finite sum of normalized matrix coefficients on SU(2) x SU(2).

    The constant function is the term on the trivial pair (two_j = 0 on both
    factors).  Exact Fourier data is available from the term list, which makes
    these functions the reference objects for every Monte-Carlo identity
    check.
    """

    terms: tuple[Term, ...]

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))

    @classmethod
    def constant(cls, value: complex) -> "BandLimitedFn":
        return cls((Term(0, 0, 0, 0, 0, 0, complex(value)),))

    @classmethod
    def single_term(cls, two_j_x, two_j_y, i, k, l, m, coeff=1.0) -> "BandLimitedFn":
        return cls((Term(two_j_x, two_j_y, i, k, l, m, complex(coeff)),))

    @classmethod
    def character_product(cls, two_j: int) -> "BandLimitedFn":
        """chi(X) chi(Y) for the spin-j character; real-valued on SU(2)^2."""
        d = two_j + 1
        terms = [
            Term(two_j, two_j, a, a, c, c, 1.0 / d) for a in range(d) for c in range(d)
        ]
        return cls(tuple(terms))

    def spins(self) -> tuple[set, set]:
        return {t.two_j_x for t in self.terms}, {t.two_j_y for t in self.terms}

    def __call__(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=complex)
        y = np.asarray(y, dtype=complex)
        single = x.ndim == 2
        if single:
            x, y = x[None], y[None]
        sx, sy = self.spins()
        dx_cache = {tj: normalized_coeffs(tj, x) for tj in sx}
        dy_cache = {tj: normalized_coeffs(tj, y) for tj in sy}
        vals = np.zeros(x.shape[0], dtype=complex)
        for t in self.terms:
            vals += t.coeff * dx_cache[t.two_j_x][:, t.i, t.k] * dy_cache[t.two_j_y][:, t.l, t.m]
        return vals[0] if single else vals

    def fourier_coefficients(self) -> dict[tuple[int, int], np.ndarray]:
        """Exact pair coefficients, keyed by (two_j_x, two_j_y).

        A term c * coef_{i,k}(X) coef_{l,m}(Y) contributes c at slot
        [k, i, m, l] (indices transpose within each factor under the
        transform convention of this module).
        """
        out: dict[tuple[int, int], np.ndarray] = {}
        for t in self.terms:
            key = (t.two_j_x, t.two_j_y)
            dx, dy = t.two_j_x + 1, t.two_j_y + 1
            if key not in out:
                out[key] = np.zeros((dx, dx, dy, dy), dtype=complex)
            out[key][t.k, t.i, t.m, t.l] += t.coeff
        return out

    def l2_inner(self, other: "BandLimitedFn") -> complex:
        """Exact E[f conj(h)] via the Plancherel pairing of the coefficients."""
        mine = self.fourier_coefficients()
        theirs = other.fourier_coefficients()
        total = 0.0 + 0.0j
        for key, fmat in mine.items():
            hmat = theirs.get(key)
            if hmat is not None:
                total += np.sum(fmat * hmat.conj())
        return complex(total)

    def save(self, path) -> None:
        with open(path, "w") as fh:
            fh.write("# two_j_pi two_j_sigma i k l m coeff_re coeff_im\n")
            for t in self.terms:
                fh.write(
                    f"{t.two_j_x} {t.two_j_y} {t.i} {t.k} {t.l} {t.m} "
                    f"{t.coeff.real!r} {t.coeff.imag!r}\n"
                )

    @classmethod
    def loads(cls, text: str) -> "BandLimitedFn":
        terms = []
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 8:
                raise ValueError(f"line {lineno}: expected 8 fields, got {len(parts)}")
            tjx, tjy, i, k, l, m = (int(p) for p in parts[:6])
            coeff = complex(float(parts[6]), float(parts[7]))
            terms.append(Term(tjx, tjy, i, k, l, m, coeff))
        return cls(tuple(terms))

    @classmethod
    def load(cls, path) -> "BandLimitedFn":
        with open(path) as fh:
            return cls.loads(fh.read())


def packaged_fixture(name: str) -> BandLimitedFn:
    """Band-limited fixture shipped with the package (fixtures/<name>)."""
    text = resources.files("cleanqubit.fixtures").joinpath(name).read_text()
    return BandLimitedFn.loads(text)


def packaged_json(name: str) -> dict:
    text = resources.files("cleanqubit.fixtures").joinpath(name).read_text()
    return json.loads(text)


# --- Monte-Carlo machinery ---------------------------------------------------


def _batch_sizes(samples: int, batch: int = _BATCH):
    done = 0
    while done < samples:
        size = min(batch, samples - done)
        yield size
        done += size


def _batch_stderr(batch_means: list[complex], batch_sizes: list[int]) -> float:
    """Batch-means standard error; scalar magnitude for complex estimates."""
    if len(batch_means) < 2:
        return 0.0
    means = np.asarray(batch_means)
    weights = np.asarray(batch_sizes, dtype=float)
    mean = np.average(means, weights=weights)
    var = np.average(np.abs(means - mean) ** 2, weights=weights)
    return float(np.sqrt(var / (len(batch_means) - 1)))


def haar_expect_mc(fn, samples: int, rng: RngStream, arity: int = 1, batch: int = _BATCH):
    """Monte-Carlo Haar expectation of a scalar function on SU(2) or SU(2)^2.

    ``fn`` must accept stacked inputs: one (B,2,2) array for arity 1, two for
    arity 2, returning a length-B vector.  Returns (estimate, batch-means
    standard error).
    """
    if samples < 100:
        raise ValueError("need at least 100 samples for a meaningful estimate")
    if arity not in (1, 2):
        raise ValueError("arity must be 1 or 2")
    gen = rng.generator()
    total = 0.0 + 0.0j
    bmeans, bsizes = [], []
    for size in _batch_sizes(samples, batch):
        xs = haar_unitaries(2, size, gen)
        vals = fn(xs) if arity == 1 else fn(xs, haar_unitaries(2, size, gen))
        vals = np.asarray(vals, dtype=complex)
        total += vals.sum()
        bmeans.append(complex(vals.mean()))
        bsizes.append(size)
    return total / samples, _batch_stderr(bmeans, bsizes)


def _pair_second_moment(two_j1, two_j2, samples, gen, left_inverse=False):
    """Accumulated tensor E[L(g)_{ij} * conj(R(g))_{kl}]-style second moments.

    With ``left_inverse`` the left factor is coef(g^{-1}) indexed [t, j]; used
    by the convolution check.  Returns the (d1, d1, d2, d2) mean tensor.
    """
    d1, d2 = two_j1 + 1, two_j2 + 1
    acc = np.zeros((d1 * d1, d2 * d2), dtype=complex)
    for size in _batch_sizes(samples):
        us = haar_unitaries(2, size, gen)
        left = _inv_coeffs(two_j1, us) if left_inverse else normalized_coeffs(two_j1, us)
        right = normalized_coeffs(two_j2, us)
        if not left_inverse:
            right = right.conj()
        acc += left.reshape(size, -1).T @ right.reshape(size, -1)
    return (acc / samples).reshape(d1, d1, d2, d2)


def _schur_expected(two_j1: int, two_j2: int) -> np.ndarray:
    d1, d2 = two_j1 + 1, two_j2 + 1
    expected = np.zeros((d1, d1, d2, d2))
    if two_j1 == two_j2:
        for i in range(d1):
            for j in range(d1):
                expected[i, j, i, j] = 1.0
    return expected


def check_schur(two_j1: int, two_j2: int, samples: int, rng: RngStream) -> float:
    """Max deviation of E[coef^pi_{ij} conj(coef^sigma_{kl})] from the
    orthonormality pattern [pi = sigma][i = k][j = l], over all index tuples."""
    _check_spin_cap(two_j1, two_j2)
    est = _pair_second_moment(two_j1, two_j2, samples, rng.generator())
    return float(np.abs(est - _schur_expected(two_j1, two_j2)).max())


def check_convolution(
    two_j1: int,
    two_j2: int,
    samples: int,
    rng: RngStream,
    indices: tuple[int, int, int, int] | None = None,
    num_points: int = 10,
) -> float:
    """Max deviation of the convolution (coef_{ij} * coef_{kl})(g) from
    [j = k][same irrep] coef_{il}(g)/sqrt(dim) at Haar-random test points.

    The convolution is estimated by Monte Carlo over the inner Haar variable;
    ``indices`` restricts the check to one (i, j, k, l) tuple, otherwise every
    tuple is checked.
    """
    _check_spin_cap(two_j1, two_j2)
    d1 = two_j1 + 1
    points = haar_unitaries(2, num_points, rng.substream(1).generator())
    # E_h[coef(g h^{-1}) (x) coef(h)] = (D(g) (x) I) E_h[coef(h^{-1}) (x) coef(h)]
    base = _pair_second_moment(two_j1, two_j2, samples, rng.substream(0).generator(), left_inverse=True)
    dg = wigner_d_batch(two_j1, points)  # unnormalized: coef(gh^-1) = D(g) coef(h^-1)
    est = np.einsum("pit,tjkl->pijkl", dg, base)
    target = np.zeros_like(est)
    if two_j1 == two_j2:
        for j in range(d1):
            # target_{i,j,j,l}(g) = coef_{il}(g)/sqrt(d1) = D(g)_{il}
            target[:, :, j, j, :] = dg
    dev = np.abs(est - target)
    if indices is not None:
        i, j, k, l = indices
        return float(dev[:, i, j, k, l].max())
    return float(dev.max())


@dataclass(frozen=True)
class FourierCoefficient:
    pair: tuple[int, int]
    matrix: np.ndarray
    stderr: float
    samples: int


def fourier_coeff_mc(
    f, pair: tuple[int, int], samples: int, rng: RngStream, batch: int = _BATCH
) -> FourierCoefficient:
    """Monte-Carlo Fourier coefficient E[f(X,Y) coef(X^{-1}) (x) coef(Y^{-1})].

    ``f`` may be a :class:`BandLimitedFn` or any callable of two stacked
    (B,2,2) arrays.  For a band-limited input the exact answer is given by
    ``f.fourier_coefficients()``, which makes this a closed-loop test of the
    transform.  ``stderr`` is the max-entry batch-means standard error.
    """
    two_j1, two_j2 = pair
    _check_spin_cap(two_j1, two_j2)
    d1, d2 = two_j1 + 1, two_j2 + 1
    gen = rng.generator()
    acc = np.zeros((d1 * d1, d2 * d2), dtype=complex)
    bmeans, bsizes = [], []
    for size in _batch_sizes(samples, batch):
        xs = haar_unitaries(2, size, gen)
        ys = haar_unitaries(2, size, gen)
        vals = np.asarray(f(xs, ys), dtype=complex)
        lx = _inv_coeffs(two_j1, xs).reshape(size, -1)
        ly = _inv_coeffs(two_j2, ys).reshape(size, -1)
        contrib = (vals[:, None] * lx).T @ ly
        acc += contrib
        bmeans.append(contrib.reshape(-1) / size)
        bsizes.append(size)
    est = (acc / samples).reshape(d1, d1, d2, d2)
    if len(bmeans) >= 2:
        stack = np.stack(bmeans)
        mean = np.average(stack, axis=0, weights=bsizes)
        var = np.average(np.abs(stack - mean) ** 2, axis=0, weights=bsizes)
        stderr = float(np.sqrt(var.max() / (len(bmeans) - 1)))
    else:
        stderr = 0.0
    return FourierCoefficient((two_j1, two_j2), est, stderr, samples)


def check_plancherel(f: BandLimitedFn, h: BandLimitedFn, samples: int, rng: RngStream) -> float:
    """|Monte-Carlo E[f conj(h)] - exact coefficient pairing|."""
    if not f.terms and not h.terms:
        return 0.0
    lhs, _ = haar_expect_mc(lambda xs, ys: f(xs, ys) * np.conj(h(xs, ys)), samples, rng, arity=2)
    rhs = f.l2_inner(h)
    return float(abs(lhs - rhs))


def mu_diag_expected(two_j1: int, two_j2: int) -> np.ndarray:
    """Coefficients of the diagonal measure: [pi = sigma][i = l][j = k]."""
    d1, d2 = two_j1 + 1, two_j2 + 1
    expected = np.zeros((d1, d1, d2, d2))
    if two_j1 == two_j2:
        for i in range(d1):
            for j in range(d1):
                expected[i, j, j, i] = 1.0
    return expected


def mu_diag_coeff(
    two_j1: int,
    two_j2: int,
    quad: tuple[int, int, int, int],
    samples: int,
    rng: RngStream,
) -> complex:
    """Monte-Carlo E_X[coef^pi_{ij}(X) coef^sigma_{kl}(X^{-1})] at one index
    quadruple; the exact value is ``mu_diag_expected(...)[i, j, k, l]``."""
    _check_spin_cap(two_j1, two_j2)
    i, j, k, l = quad
    gen = rng.generator()
    total = 0.0 + 0.0j
    for size in _batch_sizes(samples):
        us = haar_unitaries(2, size, gen)
        vals = normalized_coeffs(two_j1, us)[:, i, j] * _inv_coeffs(two_j2, us)[:, k, l]
        total += vals.sum()
    return complex(total / samples)


def _mu_diag_tensor(two_j1: int, two_j2: int, samples: int, gen) -> np.ndarray:
    d1, d2 = two_j1 + 1, two_j2 + 1
    acc = np.zeros((d1 * d1, d2 * d2), dtype=complex)
    for size in _batch_sizes(samples):
        us = haar_unitaries(2, size, gen)
        left = normalized_coeffs(two_j1, us).reshape(size, -1)
        right = _inv_coeffs(two_j2, us).reshape(size, -1)
        acc += left.T @ right
    return (acc / samples).reshape(d1, d1, d2, d2)


@dataclass(frozen=True)
class ClaimExpansionResult:
    lhs: complex
    lhs_stderr: float
    rhs: complex
    deviation: float


def claim_rhs_exact(f: BandLimitedFn, g: BandLimitedFn) -> complex:
    """Exact expansion of E[f(A,C) g(B,(ABC)^{-1})] from the coefficients.

    Only matching (diagonal) irrep pairs contribute; for each such pair the
    coefficients contract as sum_{ijkl} fhat_{k,j,l,i} ghat_{i,k,j,l} / dim.
    """
    fc = f.fourier_coefficients()
    gc = g.fourier_coefficients()
    total = 0.0 + 0.0j
    for (tjx, tjy), fmat in fc.items():
        if tjx != tjy:
            continue
        gmat = gc.get((tjx, tjy))
        if gmat is None:
            continue
        total += np.einsum("kjli,ikjl->", fmat, gmat) / (tjx + 1)
    return complex(total)


def check_claim_expansion(
    f: BandLimitedFn, g: BandLimitedFn, samples: int, rng: RngStream
) -> ClaimExpansionResult:
    """Monte-Carlo LHS of the coupled expectation against the exact expansion.

    The LHS draws independent Haar A, B, C and sets D = (ABC)^{-1}; the RHS is
    computed exactly from the term lists.  The identity is linear in both
    functions, so verifying it on a spanning set of band-limited fixtures
    verifies it for all of them.
    """
    gen = rng.generator()
    total = 0.0 + 0.0j
    bmeans, bsizes = [], []
    for size in _batch_sizes(samples):
        a = haar_unitaries(2, size, gen)
        b = haar_unitaries(2, size, gen)
        c = haar_unitaries(2, size, gen)
        d = (a @ b @ c).conj().swapaxes(-1, -2)
        vals = f(a, c) * g(b, d)
        total += vals.sum()
        bmeans.append(complex(vals.mean()))
        bsizes.append(size)
    lhs = total / samples
    rhs = claim_rhs_exact(f, g)
    return ClaimExpansionResult(
        lhs=complex(lhs),
        lhs_stderr=_batch_stderr(bmeans, bsizes),
        rhs=rhs,
        deviation=float(abs(lhs - rhs)),
    )


# --- verification suites ------------------------------------------------------


@dataclass(frozen=True)
class CheckRecord:
    check: str
    params: str
    deviation: float
    tolerance: float
    samples: int

    @property
    def passed(self) -> bool:
        return self.deviation <= self.tolerance


def _spin_pairs(max_two_j: int):
    for tj1 in range(max_two_j + 1):
        for tj2 in range(tj1, max_two_j + 1):
            yield tj1, tj2


def schur_suite(
    samples: int = DEFAULT_MC_SAMPLES,
    rng: RngStream = RngStream(0),
    max_two_j: int = 3,
    tol: float = DEFAULT_TOL.mc_check,
) -> list[CheckRecord]:
    """Orthonormality of the coefficient basis over all spin pairs <= max_two_j/2.

    One Haar sample stream is shared across pairs (the checks are
    deterministic given the stream, and independence across pairs is not
    needed for a deviation bound).
    """
    gen = rng.generator()
    spins = list(range(max_two_j + 1))
    acc = {p: 0.0 for p in _spin_pairs(max_two_j)}
    accs = {
        (t1, t2): np.zeros(((t1 + 1) ** 2, (t2 + 1) ** 2), dtype=complex)
        for (t1, t2) in _spin_pairs(max_two_j)
    }
    for size in _batch_sizes(samples):
        us = haar_unitaries(2, size, gen)
        coefs = {tj: normalized_coeffs(tj, us).reshape(size, -1) for tj in spins}
        for (t1, t2) in accs:
            accs[(t1, t2)] += coefs[t1].T @ coefs[t2].conj()
    records = []
    for (t1, t2), mat in accs.items():
        est = (mat / samples).reshape(t1 + 1, t1 + 1, t2 + 1, t2 + 1)
        dev = float(np.abs(est - _schur_expected(t1, t2)).max())
        acc[(t1, t2)] = dev
        records.append(CheckRecord("schur", f"two_j=({t1},{t2})", dev, tol, samples))
    return records


def convolution_suite(
    samples: int = DEFAULT_MC_SAMPLES,
    rng: RngStream = RngStream(0),
    max_two_j: int = 3,
    tol: float = DEFAULT_TOL.mc_check,
    num_points: int = 10,
) -> list[CheckRecord]:
    records = []
    for idx, (t1, t2) in enumerate(_spin_pairs(max_two_j)):
        dev = check_convolution(t1, t2, samples, rng.substream(idx), num_points=num_points)
        records.append(CheckRecord("convolution", f"two_j=({t1},{t2})", dev, tol, samples))
    return records


def mudiag_suite(
    samples: int = DEFAULT_MC_SAMPLES,
    rng: RngStream = RngStream(0),
    max_two_j: int = 3,
    tol: float = DEFAULT_TOL.mc_check,
) -> list[CheckRecord]:
    gen = rng.generator()
    spins = list(range(max_two_j + 1))
    accs = {
        (t1, t2): np.zeros(((t1 + 1) ** 2, (t2 + 1) ** 2), dtype=complex)
        for t1 in spins
        for t2 in spins
    }
    for size in _batch_sizes(samples):
        us = haar_unitaries(2, size, gen)
        lefts = {tj: normalized_coeffs(tj, us).reshape(size, -1) for tj in spins}
        rights = {tj: _inv_coeffs(tj, us).reshape(size, -1) for tj in spins}
        for (t1, t2) in accs:
            accs[(t1, t2)] += lefts[t1].T @ rights[t2]
    records = []
    for (t1, t2), mat in accs.items():
        est = (mat / samples).reshape(t1 + 1, t1 + 1, t2 + 1, t2 + 1)
        dev = float(np.abs(est - mu_diag_expected(t1, t2)).max())
        records.append(CheckRecord("mu_diag", f"two_j=({t1},{t2})", dev, tol, samples))
    return records


def plancherel_fixtures() -> list[tuple[str, BandLimitedFn, BandLimitedFn]]:
    single = BandLimitedFn.single_term(1, 1, 0, 1, 1, 0)
    disjoint_f = BandLimitedFn.single_term(1, 1, 0, 0, 0, 0)
    disjoint_h = BandLimitedFn.single_term(2, 2, 0, 0, 0, 0)
    chars = BandLimitedFn.character_product(1)
    zero = BandLimitedFn(())
    return [
        ("unit_term", single, single),
        ("disjoint_support", disjoint_f, disjoint_h),
        ("characters", chars, chars),
        ("zero", zero, zero),
    ]


def plancherel_suite(
    samples: int = DEFAULT_MC_SAMPLES,
    rng: RngStream = RngStream(0),
    tol: float = DEFAULT_TOL.mc_check,
) -> list[CheckRecord]:
    records = []
    for idx, (name, f, h) in enumerate(plancherel_fixtures()):
        dev = check_plancherel(f, h, samples, rng.substream(idx))
        records.append(CheckRecord("plancherel", name, dev, tol, samples))
    return records


def claim_fixtures() -> list[tuple[str, BandLimitedFn, BandLimitedFn]]:
    """The packaged coupled-expansion fixtures (see fixtures/claim_*.bltf)."""
    return [
        (name, packaged_fixture(f"claim_{name}_f.bltf"), packaged_fixture(f"claim_{name}_g.bltf"))
        for name in ("constant", "disjoint", "single_diag", "characters")
    ]


def claim_suite(
    samples: int = DEFAULT_MC_SAMPLES,
    rng: RngStream = RngStream(0),
    tol: float = DEFAULT_TOL.mc_check,
) -> list[CheckRecord]:
    records = []
    for idx, (name, f, g) in enumerate(claim_fixtures()):
        res = check_claim_expansion(f, g, samples, rng.substream(idx))
        records.append(CheckRecord("claim_expansion", name, res.deviation, tol, samples))
    return records
