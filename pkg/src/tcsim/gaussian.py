"""Gaussian states over labeled optical modes.

Covariance-matrix formalism with hbar = 1, so the vacuum quadrature variance
is 1/2.  Mean vectors and covariance matrices use block ordering
(q_1 .. q_n, p_1 .. p_n), which keeps the symplectic form in the block shape
Omega = [[0, I], [-I, 0]] and makes the CZ matrix sparse and readable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Hashable, Iterable, Mapping, Optional, Sequence

import numpy as np

Label = Hashable

#: Quadrature variance of the vacuum state (hbar = 1 convention).
VACUUM_VARIANCE = 0.5

#: Max allowed defect in S^T Omega S - Omega for a symplectic matrix.
SYMPLECTIC_TOL = 1e-10

#: Covariances are re-symmetrized after every update; beyond this we refuse.
SYMMETRY_TOL = 1e-12

#: Marginal variances below this are treated as degenerate (no pseudo-inverse
#: fallback: finite squeezing forbids exact zeros).
MARGINAL_FLOOR = 1e-12


def db_to_r(db: float) -> float:
    """Convert squeezing in decibels to the dimensionless parameter r.

    r = dB * ln(10) / 20, so that the squeezed variance ratio relative to
    vacuum is 10^(-dB/10).
    """
    return db * math.log(10.0) / 20.0


def r_to_db(r: float) -> float:
    """Inverse of :func:`db_to_r`."""
    return 20.0 * r / math.log(10.0)


def symplectic_form(n: int) -> np.ndarray:
    """The 2n x 2n form Omega = [[0, I], [-I, 0]] in block ordering."""
    omega = np.zeros((2 * n, 2 * n))
    omega[:n, n:] = np.eye(n)
    omega[n:, :n] = -np.eye(n)
    return omega


def symplectic_defect(matrix: np.ndarray) -> float:
    """Max-norm of S^T Omega S - Omega; zero for an exact symplectic map."""
    matrix = np.asarray(matrix, dtype=float)
    n = matrix.shape[0] // 2
    omega = symplectic_form(n)
    return float(np.max(np.abs(matrix.T @ omega @ matrix - omega))) if n else 0.0


@dataclass(frozen=True)
class SymplecticOp:
    """A linear quadrature map, optionally followed by a displacement.

    The matrix must preserve the symplectic form to within SYMPLECTIC_TOL.
    """

    matrix: np.ndarray
    displacement: Optional[np.ndarray] = None

    def __post_init__(self) -> None:
        matrix = np.array(self.matrix, dtype=float)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1] or matrix.shape[0] % 2:
            raise ValueError(f"symplectic matrix must be 2n x 2n, got {matrix.shape}")
        defect = symplectic_defect(matrix)
        if defect > SYMPLECTIC_TOL:
            raise ValueError(f"matrix is not symplectic (defect {defect:.3e})")
        object.__setattr__(self, "matrix", matrix)
        if self.displacement is not None:
            d = np.array(self.displacement, dtype=float).ravel()
            if d.shape[0] != matrix.shape[0]:
                raise ValueError("displacement length must match matrix dimension")
            object.__setattr__(self, "displacement", d)

    @property
    def n_modes(self) -> int:
        return self.matrix.shape[0] // 2


@dataclass(frozen=True)
class MeasurementRecord:
    """One homodyne measurement: node, basis angle, outcome, feedforward.

    ``angle`` is normalized to [0, pi); 0 means q, pi/2 means p.
    ``feedforward`` is the displacement actually applied to the survivors to
    cancel the conditional mean shift (pinned convention), so its length is
    2 * (surviving mode count).
    """

    node: Label
    angle: float
    outcome: float
    feedforward: np.ndarray


@dataclass(frozen=True)
class GaussianState:
    """Mean vector and covariance matrix over an ordered set of labeled modes.

    ``mean`` has length 2n and ``cov`` is 2n x 2n, both in block ordering
    (q_1 .. q_n, p_1 .. p_n) following the order of ``labels``.
    """

    labels: tuple
    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self) -> None:
        labels = tuple(self.labels)
        if len(set(labels)) != len(labels):
            raise ValueError(f"duplicate mode labels in {labels}")
        n = len(labels)
        mean = np.array(self.mean, dtype=float).ravel()
        cov = np.array(self.cov, dtype=float)
        if mean.shape != (2 * n,):
            raise ValueError(f"mean must have length {2 * n}, got {mean.shape}")
        if cov.shape != (2 * n, 2 * n):
            raise ValueError(f"cov must be {2 * n} x {2 * n}, got {cov.shape}")
        if n and np.max(np.abs(cov - cov.T)) > SYMMETRY_TOL:
            raise ValueError("covariance matrix is not symmetric")
        cov = 0.5 * (cov + cov.T)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", cov)

    @property
    def n_modes(self) -> int:
        return len(self.labels)

    def index(self, label: Label) -> int:
        """Position of a mode label; KeyError if unknown."""
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"unknown mode label {label!r}") from None

    def q_index(self, label: Label) -> int:
        return self.index(label)

    def p_index(self, label: Label) -> int:
        return self.n_modes + self.index(label)


def vacuum_state(n: int, labels: Optional[Sequence[Label]] = None) -> GaussianState:
    """n-mode vacuum: zero mean, cov = (1/2) I.  Labels default to 1..n."""
    if n < 0:
        raise ValueError("mode count must be nonnegative")
    if labels is None:
        labels = tuple(range(1, n + 1))
    labels = tuple(labels)
    if len(labels) != n:
        raise ValueError(f"expected {n} labels, got {len(labels)}")
    return GaussianState(labels, np.zeros(2 * n), VACUUM_VARIANCE * np.eye(2 * n))


def p_squeezed_state(r: float, label: Label = 1) -> GaussianState:
    """Single-mode squeezed vacuum with reduced variance in p.

    cov = diag(e^{2r}/2, e^{-2r}/2); r = 0 is the vacuum.  Negative r
    (q-squeezing) is rejected.
    """
    if r < 0:
        raise ValueError("squeezing parameter must be nonnegative")
    cov = np.diag([VACUUM_VARIANCE * math.exp(2 * r), VACUUM_VARIANCE * math.exp(-2 * r)])
    return GaussianState((label,), np.zeros(2), cov)


def append_modes(state: GaussianState, other: GaussianState) -> GaussianState:
    """Tensor product: block-direct-sum of means and covariances.

    Label sets must be disjoint; block (q, p) ordering is re-established.
    """
    overlap = set(state.labels) & set(other.labels)
    if overlap:
        raise ValueError(f"duplicate mode labels {sorted(map(repr, overlap))}")
    na, nb = state.n_modes, other.n_modes
    n = na + nb
    mean = np.zeros(2 * n)
    mean[:na] = state.mean[:na]
    mean[na:n] = other.mean[:nb]
    mean[n:n + na] = state.mean[na:]
    mean[n + na:] = other.mean[nb:]
    cov = np.zeros((2 * n, 2 * n))
    idx_a = np.r_[0:na, n:n + na]
    idx_b = np.r_[na:n, n + na:2 * n]
    cov[np.ix_(idx_a, idx_a)] = state.cov
    cov[np.ix_(idx_b, idx_b)] = other.cov
    return GaussianState(state.labels + other.labels, mean, cov)


def apply_symplectic(state: GaussianState, op: SymplecticOp) -> GaussianState:
    """Evolve the state: mean -> S mean + d, cov -> S cov S^T."""
    if op.n_modes != state.n_modes:
        raise ValueError("operation and state mode counts differ")
    mean = op.matrix @ state.mean
    if op.displacement is not None:
        mean = mean + op.displacement
    cov = op.matrix @ state.cov @ op.matrix.T
    return GaussianState(state.labels, mean, cov)


def cz_matrix(n: int, i: int, j: int) -> np.ndarray:
    """Symplectic matrix of a unit-weight CZ on mode positions i, j of n."""
    s = np.eye(2 * n)
    s[n + i, j] += 1.0
    s[n + j, i] += 1.0
    return s


def apply_cz(state: GaussianState, a: Label, b: Label) -> GaussianState:
    """Unit-weight CZ gate: p_a -> p_a + q_b, p_b -> p_b + q_a, q's unchanged.

    Equivalent to apply_symplectic with cz_matrix, but applied as direct
    row/column updates; the gate sits in the streaming hot loop.
    """
    if a == b:
        raise ValueError("CZ requires two distinct modes")
    i, j = state.index(a), state.index(b)
    n = state.n_modes
    mean = state.mean.copy()
    mean[n + i] += mean[j]
    mean[n + j] += mean[i]
    cov = state.cov.copy()
    cov[n + i, :] += cov[j, :]
    cov[n + j, :] += cov[i, :]
    cov[:, n + i] += cov[:, j]
    cov[:, n + j] += cov[:, i]
    return GaussianState(state.labels, mean, cov)


def rotation_matrix(n: int, i: int, theta: float) -> np.ndarray:
    """Phase rotation of mode position i: q -> q cos + p sin, p -> -q sin + p cos."""
    s = np.eye(2 * n)
    c, sn = math.cos(theta), math.sin(theta)
    s[i, i] = c
    s[i, n + i] = sn
    s[n + i, i] = -sn
    s[n + i, n + i] = c
    return s


def apply_phase_rotation(state: GaussianState, mode: Label, theta: float) -> GaussianState:
    """Rotate the quadratures of one mode by angle theta."""
    i = state.index(mode)
    return apply_symplectic(state, SymplecticOp(rotation_matrix(state.n_modes, i, theta)))


def apply_displacement(state: GaussianState, d: np.ndarray) -> GaussianState:
    """Shift the mean by d; the covariance is unchanged."""
    d = np.asarray(d, dtype=float).ravel()
    if d.shape != state.mean.shape:
        raise ValueError(f"displacement length {d.shape[0]} != {state.mean.shape[0]}")
    return GaussianState(state.labels, state.mean + d, state.cov)


def _drop_modes(labels: tuple, positions: Iterable[int]) -> tuple:
    drop = set(positions)
    n = len(labels)
    keep = [i for i in range(n) if i not in drop]
    keep_idx = np.array([*keep, *(n + i for i in keep)], dtype=int)
    survivors = tuple(labels[i] for i in keep)
    return survivors, keep_idx


def measure_quadrature(
    state: GaussianState,
    mode: Label,
    angle: float = 0.0,
    outcome: Optional[float] = None,
    rng: Optional[np.random.Generator] = None,
):
    """Homodyne-measure x_theta = q cos(theta) + p sin(theta) on one mode.

    The outcome is drawn from the Gaussian marginal using ``rng`` unless a
    forced ``outcome`` is given (post-selection for tests).  Survivors are
    updated by Gaussian conditioning on the measured quadrature; the
    conditional mean shift is recorded and actively cancelled by a
    displacement, so surviving means return to their pre-measurement values
    (pinned feedforward convention).  Returns (reduced state, record).
    """
    pos = state.index(mode)
    if angle != 0.0:
        state = apply_phase_rotation(state, mode, angle)
    n = state.n_modes
    k = pos  # q index of the (rotated) measured quadrature
    var = state.cov[k, k]
    if var < MARGINAL_FLOOR:
        raise ValueError(f"degenerate marginal variance {var:.3e} on mode {mode!r}")
    mu = state.mean[k]
    if outcome is None:
        if rng is None:
            raise ValueError("either a forced outcome or an rng is required")
        outcome = float(mu + math.sqrt(var) * rng.standard_normal())
    survivors, keep_idx = _drop_modes(state.labels, [pos])
    b = state.cov[keep_idx, k]
    shift = b * ((outcome - mu) / var)
    cond_cov = state.cov[np.ix_(keep_idx, keep_idx)] - np.outer(b, b) / var
    # Pinned convention: apply -shift on top of the conditional mean, which
    # restores the pre-measurement survivor means.
    new_state = GaussianState(survivors, state.mean[keep_idx], cond_cov)
    record = MeasurementRecord(
        node=mode, angle=angle % math.pi, outcome=float(outcome), feedforward=-shift
    )
    return new_state, record


def trace_out(state: GaussianState, modes: Iterable[Label]) -> GaussianState:
    """Discard modes: delete their rows/columns from mean and cov."""
    positions = [state.index(m) for m in modes]
    survivors, keep_idx = _drop_modes(state.labels, positions)
    return GaussianState(
        survivors, state.mean[keep_idx], state.cov[np.ix_(keep_idx, keep_idx)]
    )


def check_physicality(state_or_cov) -> float:
    """Minimum symplectic eigenvalue of a state (or bare covariance matrix).

    Computed as the minimum modulus of the eigenvalues of i Omega cov.
    Physical states satisfy min >= 1/2; pure Gaussian constructions return
    1/2 to within 1e-9.  Empty states return +inf.
    """
    if isinstance(state_or_cov, GaussianState):
        cov = state_or_cov.cov
    else:
        cov = np.asarray(state_or_cov, dtype=float)
    if cov.size == 0:
        return math.inf
    if np.max(np.abs(cov - cov.T)) > SYMMETRY_TOL:
        raise ValueError("covariance matrix is not symmetric")
    n = cov.shape[0] // 2
    eigs = np.linalg.eigvals(1j * symplectic_form(n) @ cov)
    return float(np.min(np.abs(eigs)))


def permute_modes(state: GaussianState, new_order: Sequence[Label]) -> GaussianState:
    """Reorder the state's modes to follow ``new_order`` (a label permutation)."""
    if set(new_order) != set(state.labels) or len(new_order) != state.n_modes:
        raise ValueError("new order is not a permutation of the state's labels")
    n = state.n_modes
    pos = [state.index(lbl) for lbl in new_order]
    idx = np.array([*pos, *(n + p for p in pos)], dtype=int)
    return GaussianState(tuple(new_order), state.mean[idx], state.cov[np.ix_(idx, idx)])


def states_equal(
    a: GaussianState,
    b: GaussianState,
    mapping: Optional[Mapping[Label, Label]] = None,
    tol: float = 1e-9,
) -> bool:
    """Entrywise equality of means and covariances under a label bijection.

    ``mapping`` sends a's labels to b's; identity by default.
    """
    if mapping is None:
        mapping = {lbl: lbl for lbl in a.labels}
    if set(mapping.keys()) != set(a.labels) or set(mapping.values()) != set(b.labels):
        raise ValueError("label bijection does not cover both states")
    b_aligned = permute_modes(b, [mapping[lbl] for lbl in a.labels])
    if a.n_modes == 0:
        return True
    return bool(
        np.max(np.abs(a.mean - b_aligned.mean)) <= tol
        and np.max(np.abs(a.cov - b_aligned.cov)) <= tol
    )
