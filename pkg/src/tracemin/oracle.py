"""Independent verification engine.

Parametrizes the feasible sets X^H B X = diag(+/-1) through a congruence to
signature coordinates, runs randomized projected descent with a hyperbolic
Gram-Schmidt retraction, and carries the closed forms of the coupled-weight
counterexample that rules out an eigenvalue-product formula for signature
constraints with a non-block-diagonal D.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateDraw, InfeasibleConstraint
from .indefinite import ConstraintSpec
from .spectral import as_herm, max_norm


def objective(A, D, X) -> float:
    """tr(D X^H A X), guaranteed real for Hermitian A and D."""
    A_ = as_herm(A)
    D_ = as_herm(D)
    return float(np.real(np.trace(D_ @ X.conj().T @ A_ @ X)))


def constraint_residual(B, X, C) -> float:
    """max|X^H B X - C|."""
    return max_norm(X.conj().T @ as_herm(B) @ X - C)


def _sqrtm_psd(M):
    w, V = np.linalg.eigh(M)
    return (V * np.sqrt(np.clip(w, 0.0, None))) @ V.conj().T


@dataclass
class HyperbolicFactorization:
    """Parameters (W, V+, V-) of a J-orthogonal matrix: a positive boost
    block built from W times a block-diagonal unitary."""

    w: np.ndarray
    v_plus: np.ndarray
    v_minus: np.ndarray


def compose_hyperbolic(f: HyperbolicFactorization) -> np.ndarray:
    """Assemble the J-orthogonal matrix X with X^H J X = J,
    J = diag(I_{n+}, -I_{n-})."""
    W = np.asarray(f.w, dtype=complex)
    np_, nm = W.shape
    Vp = np.asarray(f.v_plus, dtype=complex)
    Vm = np.asarray(f.v_minus, dtype=complex)
    if Vp.shape != (np_, np_) or Vm.shape != (nm, nm):
        raise ValueError("unitary block shapes must match W")
    top = _sqrtm_psd(np.eye(np_) + W @ W.conj().T)
    bot = _sqrtm_psd(np.eye(nm) + W.conj().T @ W)
    boost = np.block([[top, W], [W.conj().T, bot]])
    V = np.zeros((np_ + nm, np_ + nm), dtype=complex)
    V[:np_, :np_] = Vp
    V[np_:, np_:] = Vm
    return boost @ V


@dataclass
class OracleResult:
    best_value: float
    best_X: np.ndarray | None
    iterations: int
    feasibility_residual: float
    unbounded_flag: bool = False


class _SignatureCoords:
    """Congruence coordinates for the constraint X^H B X = diag(s).

    Eigen-decomposing B = V diag(b) V^H splits coordinates into +, - and
    null groups; X = P Z + N R with Z^H J Z = diag(s) on the rank-r part and
    R free on the nullspace."""

    def __init__(self, B, constraint: ConstraintSpec):
        B_ = as_herm(B)
        w, V = np.linalg.eigh(B_)
        tol = 1e-10 * (1.0 + max_norm(B_))
        pos = np.where(w > tol)[0][::-1]  # largest first
        neg = np.where(w < -tol)[0]
        zero = np.where(np.abs(w) <= tol)[0]
        self.n = B_.shape[0]
        self.n_plus = len(pos)
        self.n_minus = len(neg)
        self.n_zero = len(zero)
        if constraint.k_plus > self.n_plus or constraint.k_minus > self.n_minus:
            raise InfeasibleConstraint(
                f"signature ({constraint.k_plus},{constraint.k_minus}) exceeds "
                f"inertia ({self.n_plus},{self.n_minus}) of B"
            )
        cols = np.concatenate([pos, neg]).astype(int)
        scale = np.sqrt(np.abs(w[cols])) if len(cols) else np.empty(0)
        self.P = V[:, cols] / np.where(scale > 0, scale, 1.0)
        self.N = V[:, zero]
        self.row_signs = np.concatenate(
            [np.ones(self.n_plus), -np.ones(self.n_minus)]
        )
        self.col_signs = constraint.signature_vector()
        self.k = constraint.k

    def to_x(self, Z, R=None):
        X = self.P @ Z
        if R is not None and self.n_zero:
            X = X + self.N @ R
        return X


def _j_orthonormalize(Z, row_signs, col_signs, rng, max_retry=20):
    """Hyperbolic Gram-Schmidt: returns V with V^H J V = diag(col_signs),
    J = diag(row_signs). Columns that collapse or land with the wrong sign
    of J-norm are re-drawn at random (biased into the matching block)."""
    r, k = Z.shape
    V = np.zeros((r, k), dtype=complex)
    n_plus = int(np.sum(row_signs > 0))
    for j in range(k):
        z = Z[:, j].astype(complex)
        for attempt in range(max_retry + 1):
            for _ in range(2):  # two passes for re-orthogonalization
                if j:
                    c = (V[:, :j].conj() * row_signs[:, None]).T @ z
                    z = z - V[:, :j] @ (col_signs[:j] * c)
            q = float(np.real((z.conj() * row_signs) @ z))
            nz2 = float(np.real(z.conj() @ z))
            if col_signs[j] * q > 1e-10 * (nz2 + 1e-30) and q != 0.0:
                V[:, j] = z / math.sqrt(abs(q))
                break
            z = rng.standard_normal(r) + 1j * rng.standard_normal(r)
            if col_signs[j] > 0:
                z[:n_plus] *= 4.0
            else:
                z[n_plus:] *= 4.0
        else:
            raise DegenerateDraw(
                f"could not build a feasible column {j} after {max_retry} retries"
            )
    return V


def _draw_z(coords: _SignatureCoords, rng):
    r = coords.n_plus + coords.n_minus
    Z = rng.standard_normal((r, coords.k)) + 1j * rng.standard_normal((r, coords.k))
    for j in range(coords.k):
        if coords.col_signs[j] > 0:
            Z[: coords.n_plus, j] *= 4.0
        else:
            Z[coords.n_plus:, j] *= 4.0
    return _j_orthonormalize(Z, coords.row_signs, coords.col_signs, rng)


def feasible_sample(B, constraint: ConstraintSpec, seed=0) -> np.ndarray:
    """Random X with X^H B X equal to the constraint matrix."""
    rng = np.random.default_rng(seed)
    coords = _SignatureCoords(B, constraint)
    Z = _draw_z(coords, rng)
    R = None
    if coords.n_zero:
        R = 0.3 * (
            rng.standard_normal((coords.n_zero, coords.k))
            + 1j * rng.standard_normal((coords.n_zero, coords.k))
        )
    return coords.to_x(Z, R)


def _boost_pair(Z, i_plus, i_minus, t):
    """Apply a hyperbolic rotation mixing one + row and one - row; preserves
    Z^H J Z exactly."""
    c, s = math.cosh(t), math.sinh(t)
    Z2 = Z.copy()
    Z2[i_plus] = c * Z[i_plus] + s * Z[i_minus]
    Z2[i_minus] = s * Z[i_plus] + c * Z[i_minus]
    return Z2


def local_search(
    A, B, D, constraint: ConstraintSpec,
    restarts=20, iters=500, seed=0,
) -> OracleResult:
    """Randomized projected descent on the feasible set.

    Each restart draws a feasible point, then alternates gradient steps with
    the hyperbolic Gram-Schmidt retraction; hyperbolic boost and nullspace
    probes supply the escape directions that certify unbounded instances.
    """
    A_ = as_herm(A)
    B_ = as_herm(B)
    D_ = as_herm(D)
    C = constraint.matrix()
    coords = _SignatureCoords(B_, constraint)
    divergence = -1e6 * (1.0 + max_norm(A_) * max_norm(D_))

    if max_norm(D_) == 0.0:
        X = feasible_sample(B_, constraint, seed)
        return OracleResult(0.0, X, 0, constraint_residual(B_, X, C))

    # compress A onto the range/null split once; every evaluation and gradient
    # then works with r x k arrays only
    P, N = coords.P, coords.N
    Ap = P.conj().T @ A_ @ P
    An = P.conj().T @ A_ @ N if coords.n_zero else None
    Ann = N.conj().T @ A_ @ N if coords.n_zero else None

    def ax_parts(Z, R):
        top = Ap @ Z
        bot = None
        if R is not None:
            top = top + An @ R
            bot = An.conj().T @ Z + Ann @ R
        return top, bot

    def f_of(Z, R):
        top, bot = ax_parts(Z, R)
        M = Z.conj().T @ top
        if bot is not None:
            M = M + R.conj().T @ bot
        return float(np.real(np.trace(D_ @ M)))

    best_f = np.inf
    best_Z = best_R = None
    total_iters = 0
    unbounded = False
    hyperbolic = coords.n_plus >= 1 and coords.n_minus >= 1
    js = coords.row_signs[:, None]
    stale = 0

    for restart in range(restarts):
        rng = np.random.default_rng([int(seed), restart])
        try:
            Z = _draw_z(coords, rng)
        except DegenerateDraw:
            continue
        R = (
            0.1 * (rng.standard_normal((coords.n_zero, coords.k))
                   + 1j * rng.standard_normal((coords.n_zero, coords.k)))
            if coords.n_zero else None
        )
        f = f_of(Z, R)
        step = 1.0
        stalls = 0
        history = []
        prev = None  # (Z, F, R, Gr) at the last accepted step
        for it in range(iters):
            history.append(f)
            if len(history) > 10 and history[-11] - f < 1e-12 * (1.0 + abs(f)):
                break  # converged: no meaningful progress over the window
            total_iters += 1
            top, bot = ax_parts(Z, R)
            Gz = 2.0 * top @ D_
            # steepest descent in the J-orthogonal group acting on the left:
            # Z moves along S*Z with S = J*K, K skew-Hermitian, which keeps
            # Z^H J Z exact and (by Witt transitivity) reaches every feasible
            # point from any start. K = -skew(J G Z^H) is the steepest choice.
            W = (js * Gz) @ Z.conj().T
            K = 0.5 * (W - W.conj().T)
            Gr = 2.0 * bot @ D_ if bot is not None else None
            gn2 = float(np.sum(np.abs(K) ** 2))
            if Gr is not None:
                gn2 += float(np.sum(np.abs(Gr) ** 2))
            # escape probes: exact-feasibility boosts and nullspace kicks
            if hyperbolic and it % 25 == 0:
                for _ in range(4):
                    ip = int(rng.integers(coords.n_plus))
                    im = coords.n_plus + int(rng.integers(coords.n_minus))
                    for t in (1.0, 4.0, 16.0):
                        Zt = _boost_pair(Z, ip, im, t)
                        ft = f_of(Zt, R)
                        if ft < f - 1e-12 * (1.0 + abs(f)):
                            Z, f = Zt, ft
            if coords.n_zero and it % 25 == 0 and R is not None:
                for t in (1.0, 10.0):
                    Rt = R + t * (
                        rng.standard_normal(R.shape) + 1j * rng.standard_normal(R.shape)
                    )
                    ft = f_of(Z, Rt)
                    if ft < f - 1e-12 * (1.0 + abs(f)):
                        R, f = Rt, ft
            if f < divergence:
                unbounded = True
                break
            if gn2 <= 1e-24 * (1.0 + abs(f)) ** 2:
                break
            # trial step: Barzilai-Borwein secant on the ambient flow field
            # F = J K Z (which vanishes exactly at critical points), else
            # doubled memory; accept on plain decrease
            F = (js * K) @ Z
            step = min(step * 2.0, 1.0)
            if prev is not None:
                Z_prev, F_prev, R_prev, Gr_prev = prev
                s_ = Z - Z_prev
                y_ = F - F_prev
                sy = float(np.real(np.sum(s_.conj() * y_)))
                ss = float(np.real(np.sum(s_.conj() * s_)))
                if Gr is not None:
                    sr = R - R_prev
                    sy += float(np.real(np.sum(sr.conj() * (Gr - Gr_prev))))
                    ss += float(np.real(np.sum(sr.conj() * sr)))
                if sy > 1e-300 and ss > 0:
                    step = min(max(ss / sy, 1e-12), 1e3)
            accepted = False
            eye_r = np.eye(K.shape[0])
            for _ in range(30):
                # Cayley transform of the J-skew generator -step * J K:
                # exactly J-orthogonal, so feasibility is preserved
                S = js * K
                half = 0.5 * step
                try:
                    Z_new = np.linalg.solve(eye_r + half * S, Z - half * (S @ Z))
                except np.linalg.LinAlgError:
                    step *= 0.5
                    continue
                R_new = R - step * Gr if Gr is not None else None
                f_new = f_of(Z_new, R_new)
                if f_new < f - 1e-14 * (1.0 + abs(f)) or f_new < divergence:
                    prev = (Z, F, R, Gr)
                    Z, R, f = Z_new, R_new, f_new
                    accepted = True
                    break
                step *= 0.5
            if not accepted:
                stalls += 1
                if stalls >= 2:
                    break
            if it % 40 == 39:
                # wash out accumulated feasibility drift
                Z = _j_orthonormalize(
                    Z, coords.row_signs, coords.col_signs, rng, max_retry=3
                )
                f = f_of(Z, R)
        if f < best_f - 1e-12 * (1.0 + abs(f)):
            best_f, best_Z, best_R = f, Z, R
            stale = 0
        else:
            stale += 1
        if unbounded:
            break
        if restart >= 9 and stale >= 6:
            break  # converged restarts stopped improving

    if best_Z is None:
        raise DegenerateDraw("no feasible start could be drawn")
    X = coords.to_x(best_Z, best_R)
    res = constraint_residual(B_, X, C)
    return OracleResult(
        best_value=float(best_f),
        best_X=X,
        iterations=total_iters,
        feasibility_residual=res,
        unbounded_flag=unbounded,
    )


# ---------------------------------------------------------------------------
# Coupled-weight counterexample: with A = diag(1, mu), B = J_2 = diag(1, -1)
# and D a rotated diag(1, delta), the infimum over the hyperbolic family
# Y(tau) drops strictly below both candidate eigenvalue-product sums.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CounterexampleParams:
    """Weights (mu, delta) with 0 < delta < 1/mu < 1 < mu."""

    mu: float
    delta: float

    def __post_init__(self):
        if not (0.0 < self.delta < 1.0 / self.mu < 1.0 < self.mu):
            raise ValueError("parameters must satisfy 0 < delta < 1/mu < 1 < mu")

    @property
    def gamma(self) -> float:
        return (1.0 - self.delta) / (1.0 + self.delta)

    @property
    def nu(self) -> float:
        return (1.0 - self.mu) / (1.0 + self.mu)

    @property
    def eta(self) -> float:
        return math.sqrt((1.0 - self.gamma**2) / (1.0 - self.nu**2))


def counterexample_matrices(p: CounterexampleParams, sigma: float):
    """(A, B, D) of the counterexample at mixing angle sigma."""
    if not -1.0 < sigma < 1.0:
        raise ValueError("sigma must lie in (-1, 1)")
    A = np.diag([1.0, p.mu])
    B = np.diag([1.0, -1.0])
    c = math.sqrt(1.0 - sigma * sigma)
    Q = np.array([[c, -sigma], [sigma, c]])
    D = Q.T @ np.diag([1.0, p.delta]) @ Q
    return A, B, D


def counterexample_y(tau: float) -> np.ndarray:
    """The hyperbolic feasible point Y(tau) with Y^H B Y = J_2."""
    if tau < 0:
        raise ValueError("tau must be nonnegative")
    s = math.sqrt(1.0 + tau * tau)
    return np.array([[s, tau], [tau, s]])


def counterexample_f(p: CounterexampleParams, sigma: float, tau: float) -> float:
    """Closed form of tr(D Y(tau)^H A Y(tau)) as a function of (sigma, tau)."""
    if not -1.0 < sigma < 1.0:
        raise ValueError("sigma must lie in (-1, 1)")
    if tau < 0:
        raise ValueError("tau must be nonnegative")
    g, nu = p.gamma, p.nu
    bracket = (
        tau * tau
        - g * nu * sigma * sigma
        - 2.0 * g * tau * sigma * math.sqrt(1.0 - sigma * sigma) * math.sqrt(1.0 + tau * tau)
    )
    return 1.0 + p.delta * p.mu + (1.0 + p.delta) * (1.0 + p.mu) * bracket


def counterexample_stationary(p: CounterexampleParams):
    """Stationary coordinates (tau_star, sigma_star_minus, sigma_star_plus).

    On the half-plane tau >= 0 the interior minimum of f sits at
    (+sigma_star, tau_star); the mirrored point (-sigma_star, tau_star) is
    the stationary partner of the tau <= 0 extension.
    """
    g, nu = p.gamma, p.nu
    tau2 = 0.5 * (math.sqrt((1.0 - nu**2) / (1.0 - g**2)) - 1.0)
    sig2 = 0.5 * ((nu / g) * math.sqrt((1.0 - g**2) / (1.0 - nu**2)) + 1.0)
    tau_star = math.sqrt(tau2)
    sigma_star = math.sqrt(sig2)
    return tau_star, -sigma_star, sigma_star


def counterexample_gap(p: CounterexampleParams):
    """(f_min, bound, margin) for the counterexample.

    f_min = 1 + delta*mu - (1 - sqrt(delta*mu))^2 = 2*sqrt(delta*mu) is the
    value of f at its interior minimum (+sigma_star, tau_star); it sits
    strictly below bound = min(1 + delta*mu, mu + delta), so the infimum
    cannot equal either eigenvalue-product sum.
    """
    f_min = 1.0 + p.delta * p.mu - (1.0 - math.sqrt(p.delta * p.mu)) ** 2
    bound = min(1.0 + p.delta * p.mu, p.mu + p.delta)
    return f_min, bound, bound - f_min
