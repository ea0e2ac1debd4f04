"""Dense symmetric linear algebra for recursive (pseudo-)inverse maintenance.

Matrices are plain ``numpy`` arrays. Every rank-one update below costs O(n^2)
and returns a freshly symmetrized matrix; inputs are never modified.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import DenominatorTooSmall, DimensionMismatch, NegativeProjection, ZeroTruth

# dense symmetric n x n float array
SymmetricMatrix = np.ndarray

TAU_BRANCH = 1e-9
# u.c below -TAU_NEGATIVE * c.c means the stored pair (H, H^+) is inconsistent.
# Between that and TAU_BRANCH the sign is round-off (it scales with cond(H)).
TAU_NEGATIVE = 1e-8
TAU_SM = 1e-12
TAU_EIG = 1e-12

PROPOSED = "proposed"
BASELINE = "baseline"


def symmetrize(a: np.ndarray) -> np.ndarray:
    return 0.5 * (a + a.T)


@dataclass(frozen=True)
class PinvState:
    """An accumulated matrix ``h`` together with its pseudo-inverse estimate.

    ``rank_hint`` counts how many updates took the rank-increasing branch.
    """

    h: SymmetricMatrix
    h_pinv: SymmetricMatrix
    rank_hint: int = 0

    def __post_init__(self):
        if self.h.shape != self.h_pinv.shape or self.h.ndim != 2 or self.h.shape[0] != self.h.shape[1]:
            raise DimensionMismatch(f"h {self.h.shape} and h_pinv {self.h_pinv.shape} must be equal square shapes")

    @property
    def order(self) -> int:
        return self.h.shape[0]

    @classmethod
    def zeros(cls, n: int) -> "PinvState":
        return cls(np.zeros((n, n)), np.zeros((n, n)), 0)

    @classmethod
    def from_matrix(cls, h: SymmetricMatrix) -> "PinvState":
        """Start from an arbitrary symmetric ``h`` with an oracle pseudo-inverse."""
        h = symmetrize(np.asarray(h, dtype=float))
        return cls(h, pinv_oracle(h), matrix_rank(h))

    def scaled(self, gamma: float) -> "PinvState":
        """State for ``gamma * h``; uses ``(gamma H)^+ = H^+ / gamma``."""
        return replace(self, h=gamma * self.h, h_pinv=self.h_pinv / gamma)


@dataclass(frozen=True)
class RankOneWorkspace:
    u: np.ndarray
    u_plus: np.ndarray | None
    k: np.ndarray
    u_dot_c: float
    positive: bool


def _check_vector(c, n):
    c = np.asarray(c, dtype=float)
    if c.shape != (n,):
        raise DimensionMismatch(f"vector of shape {c.shape} does not match order {n}")
    return c


def sherman_morrison_scaled_update(a_inv: SymmetricMatrix, u, gamma: float = 1.0) -> SymmetricMatrix:
    """Return ``(gamma A + u u^T)^{-1}`` given ``A^{-1}``."""
    u = _check_vector(u, a_inv.shape[0])
    k = a_inv @ u
    denom = gamma + u @ k
    if abs(denom) < TAU_SM:
        raise DenominatorTooSmall(f"gamma + u'A^-1 u = {denom:.3e}")
    out = a_inv - np.outer(k / denom, k)
    out /= gamma
    return symmetrize(out)


def rank_one_workspace(state: PinvState, c, method: str = PROPOSED, tau: float = TAU_BRANCH,
                       tau_negative: float = TAU_NEGATIVE) -> RankOneWorkspace:
    """Compute ``u``, ``u+`` and ``k`` for adding ``c c^T`` to ``state.h``.

    ``method="proposed"`` projects with ``I - H^+ H`` and normalizes by ``u.c``;
    ``method="baseline"`` projects with ``I - H H^+`` and normalizes by ``|u|^2``.
    The two agree in exact arithmetic but not in floating point.
    """
    c = _check_vector(c, state.order)
    h, p = state.h, state.h_pinv
    k = p @ c
    cc = c @ c
    if method == PROPOSED:
        u = c - p @ (h @ c)
        u_dot_c = float(u @ c)
        test = u_dot_c
        if u_dot_c < -tau_negative * cc:
            raise NegativeProjection(f"u.c = {u_dot_c:.3e} < -{tau_negative:g} * c.c = {-tau_negative * cc:.3e}")
    elif method == BASELINE:
        u = c - h @ k
        u_dot_c = float(u @ c)
        test = float(u @ u)
    else:
        raise ValueError(f"unknown method {method!r}")
    # a full-rank H has no complement left, so only round-off can make the test pass
    positive = test > tau * cc and state.rank_hint < state.order
    u_plus = u / test if positive else None
    return RankOneWorkspace(u=u, u_plus=u_plus, k=k, u_dot_c=u_dot_c, positive=positive)


def _pinv_rank1_update(state: PinvState, c, method: str) -> PinvState:
    c = np.asarray(c, dtype=float)
    ws = rank_one_workspace(state, c, method)
    p, k = state.h_pinv, ws.k
    if ws.positive:
        up = ws.u_plus
        cross = np.outer(k, up)
        new_p = p - cross - cross.T + (1.0 + c @ k) * np.outer(up, up)
        rank = state.rank_hint + 1
    else:
        new_p = p - np.outer(k / (1.0 + c @ k), k)
        rank = state.rank_hint
    return PinvState(h=state.h + np.outer(c, c), h_pinv=symmetrize(new_p), rank_hint=rank)


def pinv_rank1_update_proposed(state: PinvState, c) -> PinvState:
    """Update ``(H + c c^T)^+`` from ``H^+`` using the ``I - H^+ H`` projector."""
    return _pinv_rank1_update(state, c, PROPOSED)


def pinv_rank1_update_baseline(state: PinvState, c) -> PinvState:
    """Same update with ``u = (I - H H^+) c`` and ``u+ = u / |u|^2``."""
    return _pinv_rank1_update(state, c, BASELINE)


def pinv_rank1_update(state: PinvState, c, method: str = PROPOSED) -> PinvState:
    return _pinv_rank1_update(state, c, method)


def _eig_keep(h, tol):
    w, v = np.linalg.eigh(h)
    scale = np.abs(w).max() if w.size else 0.0
    keep = np.abs(w) > tol * scale if scale > 0 else np.zeros(w.shape, dtype=bool)
    return w, v, keep


def pinv_oracle(h: SymmetricMatrix, tol: float = TAU_EIG) -> SymmetricMatrix:
    """Moore-Penrose pseudo-inverse via a full symmetric eigendecomposition.

    Eigenvalues with ``|w| <= tol * max|w|`` are treated as zero.
    """
    h = symmetrize(np.asarray(h, dtype=float))
    w, v, keep = _eig_keep(h, tol)
    vk = v[:, keep]
    return symmetrize((vk / w[keep]) @ vk.T)


def matrix_rank(h: SymmetricMatrix, tol: float = TAU_EIG) -> int:
    _, _, keep = _eig_keep(symmetrize(np.asarray(h, dtype=float)), tol)
    return int(keep.sum())


def relative_error(estimate: SymmetricMatrix, truth: SymmetricMatrix) -> float:
    """Sum of squared elementwise errors over the sum of squared truth entries."""
    estimate = np.asarray(estimate, dtype=float)
    truth = np.asarray(truth, dtype=float)
    if estimate.shape != truth.shape:
        raise DimensionMismatch(f"{estimate.shape} vs {truth.shape}")
    denom = float(np.sum(truth * truth))
    if denom == 0.0:
        raise ZeroTruth("ground-truth matrix is zero")
    diff = estimate - truth
    return float(np.sum(diff * diff)) / denom


def relative_frobenius(estimate, truth) -> float:
    """``|A - B|_F / |B|_F``, i.e. the square root of :func:`relative_error`."""
    return float(np.sqrt(relative_error(estimate, truth)))


def penrose_residuals(h: SymmetricMatrix, p: SymmetricMatrix) -> tuple[float, float, float, float]:
    """Relative residuals of the four Penrose conditions for ``p`` as ``h^+``.

    Returns ``(|HPH - H|/|H|, |PHP - P|/|P|, |HP - (HP)^T|/|HP|, |PH - (PH)^T|/|PH|)``;
    a residual whose reference norm is zero is reported as its absolute value.
    """
    def rel(x, ref):
        nref = np.linalg.norm(ref)
        nx = float(np.linalg.norm(x))
        return nx / nref if nref > 0 else nx

    hp = h @ p
    ph = p @ h
    return (
        rel(hp @ h - h, h),
        rel(ph @ p - p, p),
        rel(hp - hp.T, hp),
        rel(ph - ph.T, ph),
    )
