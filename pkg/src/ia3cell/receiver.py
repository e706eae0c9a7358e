"""Phase II: cascaded zero-forcing receive beamforming.

At each BS, V (M x Kd, orthonormal columns drawn from the left null space
of the aligned interference) removes inter-cell interference; per user,
P (Kd x d) removes the other same-cell users' effective channels, leaving
a d x d effective channel per user.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .alignment import PrecoderSolution
from .errors import DegenerateChannelError, FeasibilityError
from .network import CELLS, ChannelSet
from .numerics import DEFAULT_TOL, Tolerance, left_null_basis, numerical_rank

__all__ = [
    "ReceiverSolution",
    "interference_images",
    "design_ici_eliminator",
    "design_iui_eliminator",
    "effective_channel",
    "design_receivers",
    "end_to_end_leakage",
]


@dataclass(frozen=True)
class ReceiverSolution:
    """Per-BS ICI eliminators, per-user IUI eliminators, and the resulting
    d x d effective channels."""

    V: dict[int, np.ndarray]
    P: dict[tuple[int, int], np.ndarray]
    H_eff: dict[tuple[int, int], np.ndarray]


def interference_images(
    ch: ChannelSet, sol: PrecoderSolution, bs: int
) -> np.ndarray:
    """M x 2Kd concatenation of all interfering users' H W at one BS."""
    return np.hstack(
        [
            ch.H[(bs, k, j)] @ sol.per_user_W[(k, j)]
            for k in range(1, CELLS + 1)
            if k != bs
            for j in range(1, ch.config.K + 1)
        ]
    )


def _relative_leakage(filt: np.ndarray, target: np.ndarray) -> float:
    denom = np.linalg.norm(target)
    if denom == 0.0:
        return 0.0
    return float(np.linalg.norm(filt.conj().T @ target) / denom)


def design_ici_eliminator(
    ch: ChannelSet,
    sol: PrecoderSolution,
    bs: int,
    tol: Tolerance = DEFAULT_TOL,
) -> np.ndarray:
    """First Kd left-null directions of the aligned interference at bs."""
    cfg = ch.config
    needed = cfg.K * cfg.d
    if cfg.M - (2 * cfg.K - 1) * cfg.d < needed:
        raise FeasibilityError(
            f"only {cfg.M - (2 * cfg.K - 1) * cfg.d} interference-free "
            f"dimensions at BS {bs}, need {needed}"
        )
    interference = interference_images(ch, sol, bs)
    null = left_null_basis(interference, tol)
    if null.shape[1] < needed:
        raise FeasibilityError(
            f"interference at BS {bs} leaves {null.shape[1]} free "
            f"dimensions, need {needed}"
        )
    V = null[:, :needed]
    if _relative_leakage(V, interference) > tol.leakage_tol:
        raise DegenerateChannelError(
            f"ICI leakage above tolerance at BS {bs}"
        )
    return V


def design_iui_eliminator(
    h_eff_all_users: dict[int, np.ndarray],
    target_user: int,
    tol: Tolerance = DEFAULT_TOL,
) -> np.ndarray:
    """d left-null directions of the other users' stacked Kd x d effective
    channels."""
    others = np.hstack(
        [h_eff_all_users[j] for j in sorted(h_eff_all_users) if j != target_user]
    )
    if numerical_rank(others, tol) < others.shape[1]:
        raise DegenerateChannelError(
            f"other-user effective channels rank deficient for user {target_user}"
        )
    null = left_null_basis(others, tol)
    d = h_eff_all_users[target_user].shape[1]
    if null.shape[1] < d:
        raise DegenerateChannelError(
            f"IUI null space too small for user {target_user}"
        )
    return null[:, :d]


def effective_channel(
    ch: ChannelSet,
    sol: PrecoderSolution,
    V: np.ndarray,
    P: np.ndarray,
    i: int,
    j: int,
) -> np.ndarray:
    """d x d post-cascade desired channel P^H V^H H_i^{[ij]} W^{[ij]}."""
    return P.conj().T @ V.conj().T @ ch.H[(i, i, j)] @ sol.per_user_W[(i, j)]


def design_receivers(
    ch: ChannelSet, sol: PrecoderSolution, tol: Tolerance = DEFAULT_TOL
) -> ReceiverSolution:
    """Build V, P, and H_eff for every BS and user."""
    K = ch.config.K
    V = {}
    P = {}
    H_eff = {}
    for i in range(1, CELLS + 1):
        V[i] = design_ici_eliminator(ch, sol, i, tol)
        ici_free = {
            j: V[i].conj().T @ ch.H[(i, i, j)] @ sol.per_user_W[(i, j)]
            for j in range(1, K + 1)
        }
        for j in range(1, K + 1):
            P[(i, j)] = design_iui_eliminator(ici_free, j, tol)
            H_eff[(i, j)] = P[(i, j)].conj().T @ ici_free[j]
    return ReceiverSolution(V=V, P=P, H_eff=H_eff)


def end_to_end_leakage(
    ch: ChannelSet,
    sol: PrecoderSolution,
    rx: ReceiverSolution,
    tol: Tolerance = DEFAULT_TOL,
) -> tuple[dict[int, float], dict[tuple[int, int], float]]:
    """Relative residuals of the two zero-forcing stages.

    Returns (per-BS ICI leakage, per-user IUI leakage), both relative
    Frobenius norms; exactly-zero interference reports 0.
    """
    K = ch.config.K
    ici = {}
    iui = {}
    for i in range(1, CELLS + 1):
        ici[i] = _relative_leakage(rx.V[i], interference_images(ch, sol, i))
        ici_free = {
            j: rx.V[i].conj().T @ ch.H[(i, i, j)] @ sol.per_user_W[(i, j)]
            for j in range(1, K + 1)
        }
        for j in range(1, K + 1):
            others = np.hstack([ici_free[jj] for jj in range(1, K + 1) if jj != j])
            iui[(i, j)] = _relative_leakage(rx.P[(i, j)], others)
    return ici, iui
