"""Verification and benchmarking: end-to-end trials, DoF accounting,
rank-distribution Monte Carlo, the per-M DoF sweep, and an empirical
sum-rate slope check.
"""

from __future__ import annotations

import json
import os
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .alignment import (
    Method,
    check_feasibility,
    design_precoders,
    feasibility_message,
    interference_dimension,
)
from .errors import ConfigurationError, NumericalFailureError
from .network import CELLS, NetworkConfig, generate_channels
from .numerics import DEFAULT_TOL, Tolerance, numerical_rank
from .receiver import design_receivers, end_to_end_leakage

__all__ = [
    "AlignmentReport",
    "DofSweepRow",
    "orthogonal_dof",
    "best_ia_dof_for_M",
    "dof_sweep",
    "run_trial",
    "rank_distribution",
    "sum_rate",
    "sum_rate_curve",
    "fit_slope",
]


@dataclass(frozen=True)
class AlignmentReport:
    """Measured outcome of one end-to-end trial.

    Per-user entries are ordered (cell 1 user 1, ..., cell 3 user K).
    """

    config: NetworkConfig
    seed: int
    method: Method
    per_bs_interference_dim: tuple[int, int, int]
    per_bs_ici_leakage: tuple[float, float, float]
    per_user_iui_leakage: tuple[float, ...]
    per_user_W_rank: tuple[int, ...]
    eta_achieved: int
    decodable: bool

    def to_dict(self) -> dict:
        cfg = self.config
        return {
            "config": {"M": cfg.M, "N": cfg.N, "K": cfg.K, "d": cfg.d},
            "seed": self.seed,
            "method": self.method.value,
            "per_bs_interference_dim": list(self.per_bs_interference_dim),
            "per_bs_ici_leakage": list(self.per_bs_ici_leakage),
            "per_user_iui_leakage": list(self.per_user_iui_leakage),
            "per_user_W_rank": list(self.per_user_W_rank),
            "eta_achieved": self.eta_achieved,
            "decodable": self.decodable,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


@dataclass(frozen=True)
class DofSweepRow:
    M: int
    best_K: int
    best_N: int
    best_d: int
    ia_dof: int
    orthogonal_dof: int


def orthogonal_dof(config: NetworkConfig) -> int:
    """Baseline DoF of cell time-sharing: M streams per channel use."""
    if not config.N < config.M <= config.K * config.N:
        raise ConfigurationError(
            f"baseline needs N < M <= KN, got M={config.M}, N={config.N}, "
            f"K={config.K}"
        )
    return config.M


def _d_max(M: int, N: int, K: int) -> int:
    if M == K * N:
        return M // (3 * K - 1)
    return min(M // (3 * K - 1), 3 * (K * N - M))


def best_ia_dof_for_M(M: int, N_range=None, K_range=None) -> DofSweepRow:
    """Exhaustive (K, N) search maximizing 3K*d_max subject to N < M <= KN.

    Ties go to the smallest K, then the smallest N.  If nothing is
    feasible, the row reports ia_dof = 0.
    """
    if M < 2:
        raise ConfigurationError(f"M must be >= 2, got {M}")
    if N_range is None:
        N_range = range(1, M)
    if K_range is None:
        K_range = range(2, 11)
    best = None
    for K in K_range:
        for N in N_range:
            if not N < M <= K * N:
                continue
            d = _d_max(M, N, K)
            if d < 1:
                continue
            candidate = (-3 * K * d, K, N)
            if best is None or candidate < best:
                best = candidate
    if best is None:
        return DofSweepRow(M=M, best_K=0, best_N=0, best_d=0, ia_dof=0,
                           orthogonal_dof=M)
    dof, K, N = -best[0], best[1], best[2]
    return DofSweepRow(M=M, best_K=K, best_N=N, best_d=_d_max(M, N, K),
                       ia_dof=dof, orthogonal_dof=M)


def dof_sweep(M_min: int, M_max: int) -> list[DofSweepRow]:
    if not 2 <= M_min <= M_max:
        raise ConfigurationError(
            f"need 2 <= M_min <= M_max, got {M_min}..{M_max}"
        )
    return [best_ia_dof_for_M(M) for M in range(M_min, M_max + 1)]


def run_trial(
    config: NetworkConfig, seed: int, tol: Tolerance = DEFAULT_TOL
) -> AlignmentReport:
    """Generate channels, run both phases, and verify every claim."""
    verdict = check_feasibility(config)
    if not verdict.feasible:
        raise ConfigurationError(feasibility_message(config))
    ch = generate_channels(config, seed)
    try:
        sol = design_precoders(ch, tol)
    except NumericalFailureError as exc:
        raise type(exc)(f"precoder design: {exc}") from exc
    dims = tuple(
        interference_dimension(ch, sol, bs, tol) for bs in range(1, CELLS + 1)
    )
    try:
        rx = design_receivers(ch, sol, tol)
    except NumericalFailureError as exc:
        raise type(exc)(f"receiver design: {exc}") from exc
    ici, iui = end_to_end_leakage(ch, sol, rx, tol)

    K, d = config.K, config.d
    users = [(i, j) for i in range(1, CELLS + 1) for j in range(1, K + 1)]
    w_ranks = tuple(numerical_rank(sol.per_user_W[u], tol) for u in users)
    aligned_dim = (2 * K - 1) * d
    decodable_streams = 0
    for i, j in users:
        ok = (
            dims[i - 1] == aligned_dim
            and ici[i] <= tol.leakage_tol
            and iui[(i, j)] <= tol.leakage_tol
            and numerical_rank(rx.H_eff[(i, j)], tol) == d
        )
        if ok:
            decodable_streams += d
    decodable = decodable_streams == 3 * K * d
    return AlignmentReport(
        config=config,
        seed=seed,
        method=sol.method,
        per_bs_interference_dim=dims,
        per_bs_ici_leakage=tuple(ici[i] for i in range(1, CELLS + 1)),
        per_user_iui_leakage=tuple(iui[u] for u in users),
        per_user_W_rank=w_ranks,
        eta_achieved=decodable_streams,
        decodable=decodable,
    )


def _rank_counts_chunk(args) -> dict[tuple[int, int], Counter]:
    config, seeds, tol = args
    counts = {
        (i, j): Counter()
        for i in range(1, CELLS + 1)
        for j in range(1, config.K + 1)
    }
    for seed in seeds:
        ch = generate_channels(config, seed)
        sol = design_precoders(ch, tol)
        for user, W in sol.per_user_W.items():
            counts[user][numerical_rank(W, tol)] += 1
    return counts


def _worker_count() -> int:
    raw = os.environ.get("IA3_THREADS", "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def rank_distribution(
    config: NetworkConfig,
    trials: int,
    base_seed: int,
    tol: Tolerance = DEFAULT_TOL,
) -> dict[tuple[int, int], Counter]:
    """Histogram of rank(W^{[ij]}) per user position over Monte Carlo
    trials with derived seeds base_seed + t.

    Honors the IA3_THREADS worker-count hint; aggregation is
    order-independent, so results do not depend on the worker count.
    """
    if trials < 1:
        raise ConfigurationError(f"trials must be >= 1, got {trials}")
    verdict = check_feasibility(config)
    if not verdict.feasible:
        raise ConfigurationError(feasibility_message(config))
    seeds = [base_seed + t for t in range(trials)]
    workers = min(_worker_count(), trials)
    if workers <= 1:
        return _rank_counts_chunk((config, seeds, tol))
    chunks = [(config, list(part), tol) for part in np.array_split(seeds, workers)]
    merged = {
        (i, j): Counter()
        for i in range(1, CELLS + 1)
        for j in range(1, config.K + 1)
    }
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for counts in pool.map(_rank_counts_chunk, chunks):
            for user, counter in counts.items():
                merged[user].update(counter)
    return merged


def sum_rate_curve(
    config: NetworkConfig,
    seed: int,
    snr_dbs: list[float],
    tol: Tolerance = DEFAULT_TOL,
) -> list[tuple[float, float]]:
    """Sum rate (bits per channel use) of the full cascade at each SNR.

    Per-stream power is SNR/d with unit noise variance; the effective
    noise-plus-residual-interference covariance is whitened exactly.
    """
    ch = generate_channels(config, seed)
    sol = design_precoders(ch, tol)
    rx = design_receivers(ch, sol, tol)
    K, d = config.K, config.d
    users = [(i, j) for i in range(1, CELLS + 1) for j in range(1, K + 1)]
    cascades = {}
    for i, j in users:
        T = rx.P[(i, j)].conj().T @ rx.V[i].conj().T  # d x M
        desired = T @ ch.H[(i, i, j)] @ sol.per_user_W[(i, j)]
        interferers = [
            T @ ch.H[(i, k, jj)] @ sol.per_user_W[(k, jj)]
            for (k, jj) in users
            if (k, jj) != (i, j)
        ]
        cascades[(i, j)] = (T, desired, interferers)

    curve = []
    for snr_db in snr_dbs:
        snr = 10.0 ** (snr_db / 10.0)
        total = 0.0
        for i, j in users:
            T, desired, interferers = cascades[(i, j)]
            Rz = T @ T.conj().T
            for X in interferers:
                Rz = Rz + (snr / d) * (X @ X.conj().T)
            try:
                whitened = np.linalg.solve(
                    Rz, (snr / d) * (desired @ desired.conj().T)
                )
            except np.linalg.LinAlgError as exc:
                raise NumericalFailureError(
                    f"singular effective covariance for user ({i},{j})"
                ) from exc
            sign, logdet = np.linalg.slogdet(np.eye(d) + whitened)
            if sign.real <= 0:
                raise NumericalFailureError(
                    f"non-positive rate determinant for user ({i},{j})"
                )
            total += logdet.real / np.log(2.0)
        curve.append((float(snr_db), float(total)))
    return curve


def sum_rate(
    config: NetworkConfig,
    seed: int,
    snr_db: float,
    tol: Tolerance = DEFAULT_TOL,
) -> float:
    return sum_rate_curve(config, seed, [snr_db], tol)[0][1]


def fit_slope(curve: list[tuple[float, float]]) -> float:
    """DoF estimate: slope of rate vs log2(SNR) over the top 10 dB of the
    curve (falls back to the two highest points if the window is thin)."""
    if len(curve) < 2:
        raise ConfigurationError("slope fit needs at least two SNR points")
    pts = sorted(curve)
    top = max(p[0] for p in pts)
    window = [p for p in pts if p[0] >= top - 10.0]
    if len(window) < 2:
        window = pts[-2:]
    x = np.array([p[0] / 10.0 * np.log2(10.0) for p in window])
    y = np.array([p[1] for p in window])
    return float(np.polyfit(x, y, 1)[0])
