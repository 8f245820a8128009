#!/usr/bin/env python3
"""Brute-force Monte-Carlo oracle for the coupled-expectation fixtures.

Computes E[f(A,C) * g(B, (ABC)^-1)] for the band-limited fixture functions by
direct sampling, using a quaternion SU(2) sampler and raw matrix entries only.
Deliberately shares no code with the package so the frozen values are an
independent cross-check of the exact coefficient-side computation.

Writes tests/../fixtures/claim_lhs_oracle.json (run from the repo root).
"""
import json
import sys

import numpy as np

SAMPLES = 4_000_000
BATCH = 200_000
SEED = 20240711


def haar_su2(gen, count):
    """Unit quaternions mapped to SU(2): exact Haar."""
    q = gen.standard_normal((count, 4))
    q /= np.linalg.norm(q, axis=1, keepdims=True)
    alpha = q[:, 0] + 1j * q[:, 1]
    beta = q[:, 2] + 1j * q[:, 3]
    u = np.empty((count, 2, 2), dtype=complex)
    u[:, 0, 0] = alpha
    u[:, 0, 1] = beta
    u[:, 1, 0] = -beta.conj()
    u[:, 1, 1] = alpha.conj()
    return u


# Normalized matrix coefficients, spelled out entrywise.  Spin 1/2 uses the
# 2x2 entries directly; spin 1 acts on the orthonormalized quadratic
# monomials (x^2/sqrt(2), xy, y^2/sqrt(2)), entry (0,0) is a(u)^2.
def halfspin_00(u):
    return np.sqrt(2.0) * u[:, 0, 0]


def halfspin_char(u):
    return u[:, 0, 0] + u[:, 1, 1]


def spin1_00(u):
    return np.sqrt(3.0) * u[:, 0, 0] ** 2


FIXTURES = {
    # f = g = 1: trivial-pair sanity value.
    "constant": (lambda a, c: np.ones(len(a)), lambda b, d: np.ones(len(b))),
    # f on the (1/2,1/2) diagonal pair, g on (1,1): no shared irrep.
    "disjoint": (
        lambda a, c: halfspin_00(a) * halfspin_00(c),
        lambda b, d: spin1_00(b) * spin1_00(d),
    ),
    # f = g = single (1/2,1/2) term with all indices (0,0,0,0).
    "single_diag": (
        lambda a, c: halfspin_00(a) * halfspin_00(c),
        lambda b, d: halfspin_00(b) * halfspin_00(d),
    ),
    # f = g = product of spin-1/2 characters: real-valued on SU(2)^2.
    "characters": (
        lambda a, c: halfspin_char(a) * halfspin_char(c),
        lambda b, d: halfspin_char(b) * halfspin_char(d),
    ),
}


def main(out_path):
    gen = np.random.Generator(np.random.Philox(SEED))
    sums = {k: 0.0 + 0.0j for k in FIXTURES}
    sq = {k: 0.0 for k in FIXTURES}
    done = 0
    while done < SAMPLES:
        count = min(BATCH, SAMPLES - done)
        a = haar_su2(gen, count)
        b = haar_su2(gen, count)
        c = haar_su2(gen, count)
        abc = a @ b @ c
        d = abc.conj().swapaxes(1, 2)  # unitary inverse
        for name, (f, g) in FIXTURES.items():
            vals = f(a, c) * g(b, d)
            sums[name] += vals.sum()
            sq[name] += float((np.abs(vals) ** 2).sum())
        done += count

    report = {"samples": SAMPLES, "seed": SEED, "fixtures": {}}
    for name in FIXTURES:
        mean = sums[name] / SAMPLES
        var = sq[name] / SAMPLES - abs(mean) ** 2
        stderr = float(np.sqrt(max(var, 0.0) / SAMPLES))
        report["fixtures"][name] = {
            "lhs_re": float(mean.real),
            "lhs_im": float(mean.imag),
            "stderr": stderr,
        }
        print(f"{name:12s} lhs = {mean.real:+.6f}{mean.imag:+.6f}i  " f"stderr = {stderr:.2e}")

    with open(out_path, "w") as fh:
        json.dump(report, fh, indent=2)
    print("wrote", out_path)


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "src/cleanqubit/fixtures/claim_lhs_oracle.json")
