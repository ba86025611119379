"""Independent reference computations shared by the test modules."""

import numpy as np


def rank_mod_p(rows, p):
    """Rank over F_p by plain Gaussian elimination on Python ints."""
    M = [[int(x) % p for x in r] for r in rows]
    rk = 0
    cols = len(M[0]) if M else 0
    for c in range(cols):
        piv = next((r for r in range(rk, len(M)) if M[r][c]), None)
        if piv is None:
            continue
        M[rk], M[piv] = M[piv], M[rk]
        inv = pow(M[rk][c], -1, p)
        M[rk] = [x * inv % p for x in M[rk]]
        for r in range(len(M)):
            if r != rk and M[r][c]:
                f = M[r][c]
                M[r] = [(a - f * b) % p for a, b in zip(M[r], M[rk])]
        rk += 1
    return rk


def matmul_mod_p(A, B, p):
    """``A B mod p``; int64 with a 16-bit split of ``B`` when ``p < 2^31``."""
    if p >= 2 ** 31 or np.asarray(A).shape[-1] > 2 ** 15:
        return np.asarray(A, dtype=object).dot(np.asarray(B, dtype=object)) % p
    A = np.asarray(A, dtype=object).astype(np.int64) % p
    B = np.asarray(B, dtype=object).astype(np.int64) % p
    hi, lo = B >> 16, B & 0xFFFF
    out = (A.dot(hi) % p) * 65536 % p + A.dot(lo) % p
    return (out % p).astype(object)


def eval_matrix_poly(coefs, M, p):
    """``sum coefs[e] M^e`` densely, coefficients lowest degree first."""
    D = M.shape[0]
    acc = np.zeros((D, D), dtype=object)
    for c in reversed(coefs):
        acc = matmul_mod_p(acc, M, p)
        acc = (acc + int(c) * np.eye(D, dtype=object)) % p
    return acc


def is_minimal_polynomial(coefs, M, p):
    """Monic ``coefs`` of degree D annihilates ``M`` and ``e_1`` has a Krylov space of dimension D."""
    D = M.shape[0]
    if len(coefs) != D + 1 or int(coefs[-1]) % p != 1:
        return False
    if eval_matrix_poly(coefs, M, p).any():
        return False
    v = np.zeros(D, dtype=object)
    v[0] = 1
    krylov = []
    for _ in range(D):
        krylov.append(list(v))
        v = np.asarray(M, dtype=object).dot(v) % p
    return rank_mod_p(krylov, p) == D


def dense_power_row(r, M, e, p):
    v = np.asarray(r, dtype=object)
    M = np.asarray(M, dtype=object)
    for _ in range(e):
        v = v.dot(M) % p
    return [int(x) for x in v]
