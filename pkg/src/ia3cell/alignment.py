"""Phase I: transmit precoder design that aligns all inter-cell
interference at each BS into a (2K-1)d-dimensional subspace.

Two constructions, dispatched by check_feasibility:
  - eigen method (M = KN): eigenvectors of the chained matrix E, with the
    other cells' combined precoders obtained through F and C;
  - null-space method (M < KN): columns of the right null space of the
    stacked cross-cell channel matrix.

Per-user precoders are the N-row blocks of the combined precoders, with
each column normalized to unit norm afterwards.  Normalization is per
vector, so it cannot change any span dimension: the scheme needs no user
cooperation.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import ConfigurationError, DegenerateChannelError
from .network import CELLS, ChannelSet, NetworkConfig, combine_channels, \
    stacked_interference_matrix
from .numerics import DEFAULT_TOL, Tolerance, general_eig, numerical_rank, \
    right_null_basis, span_dimension

__all__ = [
    "Method",
    "FeasibilityVerdict",
    "PrecoderSolution",
    "check_feasibility",
    "chained_matrices",
    "design_precoders",
    "design_precoders_eigen",
    "design_precoders_nullspace",
    "interference_dimension",
]


class Method(str, Enum):
    EIGEN = "eigen"
    NULLSPACE = "nullspace"
    INFEASIBLE = "infeasible"


@dataclass(frozen=True)
class FeasibilityVerdict:
    feasible: bool
    method: Method
    d_max: int
    eta: int


@dataclass(frozen=True)
class PrecoderSolution:
    """Per-user N x d precoders (unit-norm columns) plus the combined
    KN x d per-cell stacks before normalization."""

    per_user_W: dict[tuple[int, int], np.ndarray]
    combined_W: dict[int, np.ndarray]
    method: Method


def check_feasibility(config: NetworkConfig) -> FeasibilityVerdict:
    """Evaluate the achievability conditions for 3Kd total DoF."""
    M, N, K, d = config.M, config.N, config.K, config.d
    if M > K * N:
        raise ConfigurationError(f"M={M} exceeds K*N={K * N}")
    if M == K * N:
        d_max = M // (3 * K - 1)
        method = Method.EIGEN
    else:
        d_max = min(M // (3 * K - 1), 3 * (K * N - M))
        method = Method.NULLSPACE
    feasible = d <= d_max
    if not feasible:
        method = Method.INFEASIBLE
    return FeasibilityVerdict(
        feasible=feasible,
        method=method,
        d_max=d_max,
        eta=3 * K * d if feasible else 0,
    )


def feasibility_message(config: NetworkConfig) -> str:
    """Human-readable statement of the violated stream bound."""
    M, N, K = config.M, config.N, config.K
    if M == K * N:
        return f"d exceeds floor(M/(3K-1))={M // (3 * K - 1)}"
    d_max = min(M // (3 * K - 1), 3 * (K * N - M))
    return f"d exceeds min(floor(M/(3K-1)), 3(KN-M))={d_max}"


def chained_matrices(
    ch: ChannelSet, tol: Tolerance = DEFAULT_TOL
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """The three M x M products E, F, C built from the combined cross-cell
    channels (inverses realized as linear solves).

    Requires M = KN so every combined channel is square.
    """
    cfg = ch.config
    if cfg.M != cfg.K * cfg.N:
        raise ConfigurationError(
            f"chained matrices need M=KN, got M={cfg.M}, KN={cfg.K * cfg.N}"
        )
    G = {
        (i, j): combine_channels(ch, i, j)
        for i in range(1, CELLS + 1)
        for j in range(1, CELLS + 1)
        if i != j
    }
    for key, mat in G.items():
        if numerical_rank(mat, tol) < cfg.M:
            raise DegenerateChannelError(f"combined channel G{key} is singular")
    try:
        E = (
            np.linalg.solve(G[(3, 1)], G[(3, 2)])
            @ np.linalg.solve(G[(1, 2)], G[(1, 3)])
            @ np.linalg.solve(G[(2, 3)], G[(2, 1)])
        )
        F = np.linalg.solve(G[(3, 2)], G[(3, 1)])
        C = np.linalg.solve(G[(2, 3)], G[(2, 1)])
    except np.linalg.LinAlgError as exc:
        raise DegenerateChannelError(f"combined channel solve failed: {exc}") from exc
    return E, F, C


def _split_and_normalize(
    combined: dict[int, np.ndarray], N: int, K: int
) -> dict[tuple[int, int], np.ndarray]:
    per_user = {}
    for i, stack in combined.items():
        for j in range(1, K + 1):
            block = stack[(j - 1) * N : j * N, :]
            norms = np.linalg.norm(block, axis=0)
            if np.any(norms < 1e-300):
                raise DegenerateChannelError(
                    f"zero precoder column for user ({i},{j})"
                )
            per_user[(i, j)] = block / norms
    return per_user


def design_precoders_eigen(
    ch: ChannelSet, d: int, tol: Tolerance = DEFAULT_TOL
) -> PrecoderSolution:
    """Eigen construction for M = KN: cell 1's combined precoder is the
    first d eigenvectors of E (canonical ordering); cells 2 and 3 follow
    via F and C."""
    verdict = check_feasibility(ch.config)
    if ch.config.M != ch.config.K * ch.config.N or d > verdict.d_max:
        raise ConfigurationError(
            f"eigen method infeasible for this config with d={d}: "
            f"{feasibility_message(ch.config)}"
        )
    E, F, C = chained_matrices(ch, tol)
    _, vectors = general_eig(E)
    W1 = vectors[:, :d]
    combined = {1: W1, 2: F @ W1, 3: C @ W1}
    per_user = _split_and_normalize(combined, ch.config.N, ch.config.K)
    return PrecoderSolution(per_user_W=per_user, combined_W=combined,
                            method=Method.EIGEN)


def design_precoders_nullspace(
    ch: ChannelSet, d: int, tol: Tolerance = DEFAULT_TOL
) -> PrecoderSolution:
    """Null-space construction for M < KN: the stacked precoder is the
    first d right-null directions of the 3M x 3KN cross-cell matrix."""
    cfg = ch.config
    verdict = check_feasibility(cfg)
    if cfg.M >= cfg.K * cfg.N or d > verdict.d_max:
        raise ConfigurationError(
            f"null-space method infeasible for this config with d={d}: "
            f"{feasibility_message(cfg)}"
        )
    null = right_null_basis(stacked_interference_matrix(ch), tol)
    if null.shape[1] < d:
        raise DegenerateChannelError(
            f"stacked null space has only {null.shape[1]} dims, need {d}"
        )
    W_bar = null[:, :d]
    KN = cfg.K * cfg.N
    combined = {i: W_bar[(i - 1) * KN : i * KN, :] for i in range(1, CELLS + 1)}
    per_user = _split_and_normalize(combined, cfg.N, cfg.K)
    return PrecoderSolution(per_user_W=per_user, combined_W=combined,
                            method=Method.NULLSPACE)


def design_precoders(
    ch: ChannelSet, tol: Tolerance = DEFAULT_TOL
) -> PrecoderSolution:
    """Dispatch on the feasibility verdict for ch's configuration."""
    verdict = check_feasibility(ch.config)
    if not verdict.feasible:
        raise ConfigurationError(feasibility_message(ch.config))
    if verdict.method is Method.EIGEN:
        return design_precoders_eigen(ch, ch.config.d, tol)
    return design_precoders_nullspace(ch, ch.config.d, tol)


def interference_dimension(
    ch: ChannelSet,
    sol: PrecoderSolution,
    bs: int,
    tol: Tolerance = DEFAULT_TOL,
) -> int:
    """Dimension of the subspace spanned at the given BS by all 2K
    interfering users' effective transmit images H W."""
    images = [
        ch.H[(bs, k, j)] @ sol.per_user_W[(k, j)]
        for k in range(1, CELLS + 1)
        if k != bs
        for j in range(1, ch.config.K + 1)
    ]
    return span_dimension(images, tol)
