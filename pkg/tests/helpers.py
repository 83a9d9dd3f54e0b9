"""Shared instance generators for the test suite."""

import numpy as np


def random_hermitian(rng, n):
    M = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return 0.5 * (M + M.conj().T)


def random_unitary(rng, n):
    Q, _ = np.linalg.qr(
        rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    )
    return Q


def definite_instance(seed):
    """(A, B, D, k) with SPD B, Hermitian A and mixed-sign Hermitian D."""
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 7))
    k = int(rng.integers(1, min(3, n) + 1))
    G = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    B = G @ G.conj().T + 0.5 * np.eye(n)
    A = random_hermitian(rng, n)
    D = random_hermitian(rng, k)
    return A, B, D, k


def canonical_pencil_instance(seed):
    """PSD-pencil instance built from its canonical form.

    A = T^{-H} Lambda T^{-1}, B = T^{-H} J T^{-1} for invertible T; every
    tenth seed carries one 2x2 coupled block (non-diagonalizable, m0 = 1).
    Returns (A, B, n_plus, n_minus, lambda_plus, lambda_minus, coupled).
    """
    coupled = seed % 10 == 9
    rng = np.random.default_rng(seed)
    if coupled:
        n = int(rng.integers(4, 7))
        n_minus = int(rng.integers(2, n - 1))
    else:
        n = int(rng.integers(2, 7))
        n_minus = int(rng.integers(1, n))
    n_plus = n - n_minus
    lam0 = float(rng.normal())
    if coupled:
        lp = np.sort(lam0 + rng.uniform(0.1, 3.0, n_plus - 1))
        lm = np.sort(lam0 - rng.uniform(0.1, 3.0, n_minus - 1))[::-1]
        m = n - 2
        signs = np.concatenate([-np.ones(n_minus - 1), np.ones(n_plus - 1)])
        vals = np.concatenate([lm, lp])
        Lam = np.zeros((n, n))
        J = np.zeros((n, n))
        Lam[:m, :m] = np.diag(signs * vals)
        J[:m, :m] = np.diag(signs)
        Lam[m:, m:] = np.array([[0.0, lam0], [lam0, 1.0]])
        J[m:, m:] = np.array([[0.0, 1.0], [1.0, 0.0]])
        lp_full = np.sort(np.concatenate([lp, [lam0]]))
        lm_full = np.sort(np.concatenate([lm, [lam0]]))[::-1]
    else:
        lp = np.sort(lam0 + rng.uniform(0.1, 3.0, n_plus))
        lm = np.sort(lam0 - rng.uniform(0.1, 3.0, n_minus))[::-1]
        signs = np.concatenate([-np.ones(n_minus), np.ones(n_plus)])
        vals = np.concatenate([lm, lp])
        Lam = np.diag(signs * vals)
        J = np.diag(signs)
        lp_full, lm_full = lp, lm
    T = rng.standard_normal((n, n)) + 0.3j * rng.standard_normal((n, n))
    Ti = np.linalg.inv(T)
    A = Ti.conj().T @ Lam @ Ti
    B = Ti.conj().T @ J @ Ti
    A = 0.5 * (A + A.conj().T)
    B = 0.5 * (B + B.conj().T)
    return A, B, n_plus, n_minus, lp_full, lm_full, coupled


def random_psd(rng, k, lo=0.1, hi=2.0):
    Q = random_unitary(rng, k)
    return Q @ np.diag(rng.uniform(lo, hi, k)) @ Q.conj().T
