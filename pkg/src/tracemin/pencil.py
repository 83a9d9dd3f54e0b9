"""Analysis of Hermitian pencils A - lambda*B with indefinite, possibly
singular B.

Certifies positive semi-definiteness of the pencil by searching for a shift
lambda0 with A - lambda0*B >= 0, computes the rank(B) finite eigenvalues and
their split around lambda0, and decides diagonalizability by checking that
the eigenvectors admit a B-orthonormalization of full rank.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla
import scipy.optimize

from .errors import NotPsdPencil
from .spectral import Inertia, as_herm, inertia, max_norm

# singular values below this times the largest count as zero (stated once,
# used everywhere)
RANK_RTOL = 1e-9


@dataclass
class PsdPencilAnalysis:
    """Certificate and spectral data for a positive semi-definite pencil.

    lambda_plus holds the n_plus largest finite eigenvalues ascending;
    lambda_minus the n_minus smallest, indexed descending so entry 0 is the
    largest of the minus group. Eigenvector blocks are present only when the
    pencil is diagonalizable; their columns have B-norm +1 / -1 and align
    with the eigenvalue lists.
    """

    lambda0: float
    inertia_b: Inertia
    lambda_plus: np.ndarray
    lambda_minus: np.ndarray
    diagonalizable: bool
    m0: int
    eigvecs_plus: np.ndarray | None = None
    eigvecs_minus: np.ndarray | None = None

    @property
    def rank(self) -> int:
        return self.inertia_b.rank


def _min_eig(M) -> float:
    return float(np.linalg.eigvalsh(M)[0]) if M.size else 0.0


def find_lambda0(A, B, iters: int = 200) -> float | None:
    """Search for a real shift making A - lambda*B positive semi-definite.

    Maximizes the concave g(lambda) = min eig(A - lambda*B) over an expanding
    bracket; returns the shift iff g >= -1e-9*(1+max|A|), else None.
    """
    A_ = as_herm(A)
    B_ = as_herm(B)
    if A_.shape != B_.shape:
        raise ValueError("A and B must have the same shape")
    na = max_norm(A_)
    tol = 1e-9 * (1.0 + na)

    def g(lam):
        return _min_eig(A_ - lam * B_)

    sv = np.linalg.svd(B_, compute_uv=False) if B_.size else np.empty(0)
    smax = float(sv[0]) if sv.size else 0.0
    if smax <= 1e-12 * max(1.0, na):
        # B vanishes: the pencil is constant in lambda
        return 0.0 if g(0.0) >= -tol else None
    spos = sv[sv > RANK_RTOL * smax]
    rho = 1.0 + na / float(spos[-1])

    lo, hi = -rho, rho
    j = 0
    for _ in range(60):
        grid = np.linspace(lo, hi, 33)
        vals = np.array([g(x) for x in grid])
        j = int(np.argmax(vals))
        if vals[j] > tol:
            # strict certificate; no need to locate the exact maximizer
            return float(grid[j])
        if 0 < j < len(grid) - 1:
            break
        width = hi - lo
        lo, hi = lo - width, hi + width
    else:
        return float(grid[j]) if vals[j] >= -tol else None

    a, b = float(grid[j - 1]), float(grid[j + 1])
    res = scipy.optimize.minimize_scalar(
        lambda x: -g(x),
        bounds=(a, b),
        method="bounded",
        options={"xatol": 1e-13 * (1.0 + abs(b - a)), "maxiter": iters},
    )
    lam0 = float(res.x)
    if g(lam0) < vals[j]:
        lam0 = float(grid[j])
    return lam0 if g(lam0) >= -tol else None


def _common_nullspace_split(A_, B_):
    """Orthonormal bases (P, K): K spans N(A) & N(B), P its complement."""
    n = A_.shape[0]
    S = np.vstack([A_, B_])
    _, sv, Vh = np.linalg.svd(S)
    smax = float(sv[0]) if sv.size else 0.0
    if smax == 0.0:
        return np.empty((n, 0), dtype=complex), np.eye(n, dtype=complex)
    q = int(np.sum(sv > RANK_RTOL * smax))
    V = Vh.conj().T
    return V[:, :q], V[:, q:]


def _finite_eigenvalue_list(Ad, Bd, r):
    """The r finite eigenvalues of the deflated (regular) pencil, sorted
    ascending, via the QZ-based generalized eigensolver."""
    if r == 0 or Ad.shape[0] == 0:
        return np.empty(0)
    w = sla.eig(Ad, Bd, right=False, homogeneous_eigvals=True)
    alpha, beta = np.asarray(w[0]), np.asarray(w[1])
    score = np.abs(beta) / (np.abs(alpha) + np.abs(beta) + 1e-300)
    order = np.argsort(score)[::-1]
    idx = order[:r]
    lam = alpha[idx] / beta[idx]
    scale = 1.0 + np.abs(lam)
    # defective double eigenvalues split as a conjugate pair of width
    # O(sqrt(eps)), so the reality tolerance must sit well above that
    if np.any(np.abs(np.imag(lam)) > 1e-6 * scale):
        raise NotPsdPencil("finite eigenvalues have non-real components")
    return np.sort(np.real(lam))


def _cluster(sorted_vals, tol):
    """Group sorted values into runs with consecutive gaps <= tol; returns
    (start, length) pairs."""
    groups = []
    i = 0
    m = len(sorted_vals)
    while i < m:
        j = i + 1
        while j < m and sorted_vals[j] - sorted_vals[j - 1] <= tol:
            j += 1
        groups.append((i, j - i))
        i = j
    return groups


def _certify(Ad, Bd, P, lam, n_minus):
    """B-orthonormalization certificate over eigenvalue clusters.

    Returns (rank_cert, plus_vecs, minus_vecs) where the vector lists map
    back to original coordinates and align with the plus (ascending) and
    minus (descending) eigenvalue orders.
    """
    r = len(lam)
    scale = 1.0 + (float(np.max(np.abs(lam))) if r else 0.0)
    ctol = 1e-6 * scale
    nb = max_norm(Bd)
    gtol = 1e-8 * (1.0 + nb)
    rank_cert = 0
    sign_ok = True
    plus_chunks = []   # (lambda, vec) ascending order of the plus group
    minus_chunks = []  # (lambda, vec) for the minus group

    for start, m in _cluster(lam, ctol):
        mu = float(np.mean(lam[start:start + m]))
        M = Ad - mu * Bd
        _, sv, Vh = np.linalg.svd(M)
        vtol = 1e-6 * (max_norm(Ad) + abs(mu) * nb + 1.0)
        cols = Vh.conj().T[:, -m:]
        keep = sv[-m:] <= vtol
        V = cols[:, keep]
        c_plus = sum(1 for i in range(start, start + m) if i >= n_minus)
        c_minus = m - c_plus
        if V.shape[1] == 0:
            sign_ok = sign_ok and (c_plus == 0 and c_minus == 0)
            continue
        G = V.conj().T @ Bd @ V
        G = 0.5 * (G + G.conj().T)
        d, Pg = np.linalg.eigh(G)
        W = V @ Pg
        pos = d > gtol
        neg = d < -gtol
        rank_cert += int(np.sum(pos)) + int(np.sum(neg))
        if int(np.sum(pos)) != c_plus or int(np.sum(neg)) != c_minus:
            sign_ok = False
            continue
        Wp = (P @ W[:, pos]) / np.sqrt(d[pos])
        Wm = (P @ W[:, neg]) / np.sqrt(-d[neg])
        for i in range(c_plus):
            plus_chunks.append((lam[start + c_minus + i], Wp[:, i]))
        for i in range(c_minus):
            minus_chunks.append((lam[start + i], Wm[:, i]))
    return rank_cert, sign_ok, plus_chunks, minus_chunks


def finite_eigenvalues(A, B) -> PsdPencilAnalysis:
    """Full analysis of a positive semi-definite pencil.

    Raises NotPsdPencil when no certifying shift exists. The common nullspace
    of A and B is deflated before the generalized eigensolve so the pencil
    seen by QZ is regular.
    """
    A_ = as_herm(A)
    B_ = as_herm(B)
    lam0 = find_lambda0(A_, B_)
    if lam0 is None:
        raise NotPsdPencil("no shift makes A - lambda*B positive semi-definite")
    inb = inertia(B_)
    r = inb.rank
    P, _K = _common_nullspace_split(A_, B_)
    Ad = P.conj().T @ A_ @ P
    Bd = P.conj().T @ B_ @ P
    Ad = 0.5 * (Ad + Ad.conj().T)
    Bd = 0.5 * (Bd + Bd.conj().T)
    lam = _finite_eigenvalue_list(Ad, Bd, r)
    # a defective double eigenvalue comes back from QZ split symmetrically by
    # O(sqrt(eps)); replacing each cluster with its mean recovers the true
    # value to working precision
    cscale = 1.0 + (float(np.max(np.abs(lam))) if r else 0.0)
    for start, m in _cluster(lam, 1e-6 * cscale):
        if m > 1:
            lam[start:start + m] = float(np.mean(lam[start:start + m]))

    lambda_minus = lam[: inb.n_minus][::-1].copy()  # descending
    lambda_plus = lam[inb.n_minus:].copy()          # ascending

    # the scalar maximization locates lambda0 only to O(sqrt(eps)) when the
    # certificate maximum is quadratic (coupled blocks); the eigenvalue
    # bracket max(lambda-) <= lambda0 <= min(lambda+) is sharper, so clamp
    lo = float(lambda_minus[0]) if lambda_minus.size else -np.inf
    hi = float(lambda_plus[0]) if lambda_plus.size else np.inf
    if lo <= hi:
        lam0 = min(max(lam0, lo), hi)

    rank_cert, sign_ok, plus_chunks, minus_chunks = _certify(
        Ad, Bd, P, lam, inb.n_minus
    )
    diagonalizable = sign_ok and rank_cert == r
    m0 = max(0, (r - rank_cert) // 2) if not diagonalizable else 0

    ep = em = None
    if diagonalizable:
        n = A_.shape[0]
        plus_chunks.sort(key=lambda t: t[0])
        minus_chunks.sort(key=lambda t: -t[0])
        ep = (
            np.stack([v for _, v in plus_chunks], axis=1)
            if plus_chunks else np.empty((n, 0), dtype=complex)
        )
        em = (
            np.stack([v for _, v in minus_chunks], axis=1)
            if minus_chunks else np.empty((n, 0), dtype=complex)
        )
    return PsdPencilAnalysis(
        lambda0=float(lam0),
        inertia_b=inb,
        lambda_plus=lambda_plus,
        lambda_minus=lambda_minus,
        diagonalizable=diagonalizable,
        m0=m0,
        eigvecs_plus=ep,
        eigvecs_minus=em,
    )


def eigenvectors_of(A, B, mu: float) -> np.ndarray:
    """Basis for the eigenvectors of A - lambda*B at the finite eigenvalue
    mu: the nullspace of A - mu*B with components in N(A) & N(B) projected
    out. May be empty when the eigenspace is entirely degenerate."""
    A_ = as_herm(A)
    B_ = as_herm(B)
    M = A_ - mu * B_
    _, sv, Vh = np.linalg.svd(M)
    smax = float(sv[0]) if sv.size else 0.0
    if smax == 0.0:
        null = np.eye(A_.shape[0], dtype=complex)
    else:
        null = Vh.conj().T[:, sv <= RANK_RTOL * smax]
    _P, K = _common_nullspace_split(A_, B_)
    if K.shape[1]:
        null = null - K @ (K.conj().T @ null)
    if null.shape[1] == 0:
        return null
    # re-orthonormalize and drop directions that collapsed into the kernel
    q, rr = np.linalg.qr(null)
    keep = np.abs(np.diag(rr)) > RANK_RTOL * max(1.0, np.abs(np.diag(rr)).max())
    return q[:, keep]


def diagonalizability(A, B, analysis: PsdPencilAnalysis) -> tuple[bool, int]:
    """Recompute the diagonalizability certificate for a completed analysis:
    diagonalizable iff the Gram certificate has full rank r, with
    m0 = (r - rank)/2 coupled blocks otherwise."""
    A_ = as_herm(A)
    B_ = as_herm(B)
    P, _K = _common_nullspace_split(A_, B_)
    Ad = 0.5 * (P.conj().T @ A_ @ P + (P.conj().T @ A_ @ P).conj().T)
    Bd = 0.5 * (P.conj().T @ B_ @ P + (P.conj().T @ B_ @ P).conj().T)
    lam = np.concatenate([analysis.lambda_minus[::-1], analysis.lambda_plus])
    rank_cert, sign_ok, _, _ = _certify(Ad, Bd, P, lam, analysis.inertia_b.n_minus)
    r = analysis.rank
    ok = sign_ok and rank_cert == r
    return ok, 0 if ok else max(0, (r - rank_cert) // 2)
