"""Maximum quantum success probability of the game.

Closed-form optimal strategy: trine preparations for a=0 (Bloch angles
2 pi x / 3 in the xz plane), antipodal derived a=1 states, and measurement
directions proportional to the differences of consecutive preparation
observables, v_b = (a_b - a_{b+1 mod 3}) / sqrt(3), with all outcome
weights 2/3.  That reaches (1/3)(1 + sqrt(3)/2).

For arbitrary outcome weights the optimizer alternates two convex
subproblems over random restarts:

* measurement step: maximize sum_b alpha_b v_b.c_b over |v_b| <= 1 with
  sum_b alpha_b v_b = 0.  The Lagrange multiplier of the completeness
  constraint is the weighted geometric median of the c_b (Weiszfeld
  iteration plus the anchored-point test); unit vectors toward c_b - lambda
  solve the subproblem, and a short projection/clipping polish removes
  floating-point residue.
* preparation step: projected gradient ascent on the three free a=0 Bloch
  vectors; the derived a=1 states stay positive because iterates are kept
  inside the feasible set (Dykstra projection onto the two rotated
  product-ball constraints).

Restarts run vectorized and use per-index scrambled seeds, so results are
deterministic for a fixed (seed, restarts) and best-of-restarts is
monotone in the restart count.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import game
from .qubit_core import DensityState, Effect, Povm, povm_from_weighted_projectors, xz_direction

_SHIFT1 = (1, 2, 0)
_SHIFT2 = (2, 0, 1)

QUANTUM_OPTIMUM = (1.0 + np.sqrt(3.0) / 2.0) / 3.0


def splitmix64(value: int) -> int:
    """SplitMix64 scrambler; derives independent child seeds."""
    z = (value + 0x9E3779B97F4A7C15) & 0xFFFFFFFFFFFFFFFF
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & 0xFFFFFFFFFFFFFFFF
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & 0xFFFFFFFFFFFFFFFF
    return z ^ (z >> 31)


def derive_seed(base: int, *indices: int) -> int:
    z = splitmix64(base & 0xFFFFFFFFFFFFFFFF)
    for idx in indices:
        z = splitmix64(z ^ ((idx + 1) & 0xFFFFFFFFFFFFFFFF))
    return z


@dataclass(frozen=True, eq=False)
class AlphaTriple:
    """Outcome weights (a_0, a_1, a_2), each in [0, 1], summing to 2."""

    alpha: tuple

    def __post_init__(self):
        vals = tuple(float(a) for a in self.alpha)
        if len(vals) != 3:
            raise ValueError("expected three outcome weights")
        if any(a < -1e-12 or a > 1.0 + 1e-12 for a in vals):
            raise ValueError(f"outcome weights {vals} leave [0, 1]")
        if abs(sum(vals) - 2.0) > 1e-9:
            raise ValueError(f"outcome weights {vals} do not sum to 2")
        object.__setattr__(self, "alpha", vals)

    @classmethod
    def symmetric(cls, alpha0: float) -> "AlphaTriple":
        rest = (2.0 - alpha0) / 2.0
        return cls((alpha0, rest, rest))

    def __iter__(self):
        return iter(self.alpha)

    def as_array(self) -> np.ndarray:
        return np.array(self.alpha)


@dataclass(frozen=True, eq=False)
class OptimizationResult:
    value: float
    strategy: game.GameStrategy
    restarts_used: int
    converged: bool
    best_gap: float          # spread of final values across restarts


def _as_alpha(alpha) -> AlphaTriple:
    return alpha if isinstance(alpha, AlphaTriple) else AlphaTriple(tuple(alpha))


def analytic_optimal_strategy() -> game.GameStrategy:
    """The closed-form optimal strategy; success = (1/3)(1 + sqrt(3)/2)."""
    a_dirs = np.stack([xz_direction(2.0 * np.pi * x / 3.0) for x in range(3)])
    first = tuple(DensityState(a_dirs[x]) for x in range(3))
    preps = game.complete_preparations(first)
    diffs = a_dirs - a_dirs[_SHIFT1, :]
    v_dirs = diffs / np.linalg.norm(diffs, axis=1, keepdims=True)
    povm = povm_from_weighted_projectors((2.0 / 3.0,) * 3, v_dirs)
    return game.GameStrategy(preps, povm)


def _pair_sums(u: np.ndarray) -> np.ndarray:
    """c_b = u_b - u_{b+1} + (2/3) sum_y u_y for stacked (..., 3, 3) arrays."""
    return u - u[..., _SHIFT1, :] + (2.0 / 3.0) * u.sum(axis=-2, keepdims=True)


def _clip_balls(v: np.ndarray) -> np.ndarray:
    return v / np.maximum(1.0, np.linalg.norm(v, axis=-1, keepdims=True))


def _measurement_step(
    c: np.ndarray, alpha: np.ndarray, lam: np.ndarray, iters: int = 25
) -> tuple[np.ndarray, np.ndarray]:
    """Exact solution of the measurement subproblem for stacked c (R, 3, 3).

    Returns (v, lam) where v are the optimal unit-ball Bloch vectors and lam
    the converged multipliers (kept as warm starts across rounds).
    """
    r = c.shape[0]
    active = alpha > 1e-12
    v = np.zeros_like(c)
    if active.sum() == 2:
        b1, b2 = np.flatnonzero(active)
        d = c[:, b1, :] - c[:, b2, :]
        norm = np.linalg.norm(d, axis=1, keepdims=True)
        unit = np.where(norm > 1e-14, d / np.maximum(norm, 1e-14), 0.0)
        s1 = min(1.0, alpha[b2] / alpha[b1])
        v[:, b1, :] = s1 * unit
        v[:, b2, :] = -(alpha[b1] * s1 / alpha[b2]) * unit
        return v, lam

    # anchored-multiplier test: lambda may sit exactly on one of the c_b
    anchored = np.full(r, -1, dtype=int)
    anchor_v = np.zeros_like(c)
    for b in range(3):
        diffs = c - c[:, b : b + 1, :]
        norms = np.linalg.norm(diffs, axis=2, keepdims=True)
        units = np.where(norms > 1e-14, diffs / np.maximum(norms, 1e-14), 0.0)
        pull = (alpha[None, :, None] * units).sum(axis=1) - alpha[b] * units[:, b, :]
        ok = (np.linalg.norm(pull, axis=1) <= alpha[b] + 1e-14) & (anchored < 0)
        if ok.any():
            anchored[ok] = b
            cand = units[ok]
            cand[:, b, :] = -pull[ok] / alpha[b]
            anchor_v[ok] = cand

    # Weiszfeld iteration for the weighted geometric median (free restarts)
    free = anchored < 0
    if free.any():
        lam_f = lam[free]
        c_f = c[free]
        for _ in range(iters):
            d = np.maximum(np.linalg.norm(c_f - lam_f[:, None, :], axis=2), 1e-14)
            wgt = alpha[None, :] / d
            lam_new = (wgt[:, :, None] * c_f).sum(axis=1) / wgt.sum(axis=1)[:, None]
            if np.max(np.abs(lam_new - lam_f)) < 1e-14:
                lam_f = lam_new
                break
            lam_f = lam_new
        lam = lam.copy()
        lam[free] = lam_f
        diff = c_f - lam_f[:, None, :]
        nrm = np.maximum(np.linalg.norm(diff, axis=2, keepdims=True), 1e-14)
        v[free] = diff / nrm
    v[~free] = anchor_v[~free]

    # remove floating-point residue: project onto the completeness plane, clip
    asq = float((alpha**2).sum())
    for _ in range(3):
        mu = (alpha[None, :, None] * v).sum(axis=1) / asq
        v = v - alpha[None, :, None] * mu[:, None, :]
        v = _clip_balls(v)
    return v, lam


def _objective(u: np.ndarray, v: np.ndarray, alpha: np.ndarray) -> np.ndarray:
    c = _pair_sums(u)
    return 1.0 / 3.0 + (alpha[None, :, None] * v * c).sum(axis=(1, 2)) / 12.0


def optimize_quantum(
    alpha,
    restarts: int = 50,
    seed: int = 0,
    tol: float = 1e-10,
    max_rounds: int = 10_000,
) -> OptimizationResult:
    """Best strategy found by alternating maximization over random restarts."""
    alpha_t = _as_alpha(alpha)
    al = alpha_t.as_array()
    if restarts < 1:
        raise ValueError("need at least one restart")

    starts = np.empty((restarts, 3, 3))
    for r_idx in range(restarts):
        rng = np.random.default_rng(derive_seed(seed, r_idx))
        starts[r_idx] = rng.uniform(-1.0, 1.0, size=(3, 3))
    u = game.shrink_to_feasible(game.project_free_blochs(starts, iters=50))

    lam = np.zeros((restarts, 3))
    v, lam = _measurement_step(_pair_sums(u), al, lam)
    values = _objective(u, v, al)
    gains = np.full(restarts, np.inf)
    rounds = min(max_rounds, 1500)
    check_every = 16
    best_stagnant = 0
    for it in range(rounds):
        g = al[None, :, None] * v
        h = g - g[:, _SHIFT2, :] + (2.0 / 3.0) * g.sum(axis=1, keepdims=True)
        hn = np.linalg.norm(h.reshape(restarts, -1), axis=1)
        eta = max(0.5 * 0.985**it, 1e-5)
        step = np.where(hn > 1e-14, eta / np.maximum(hn, 1e-14), 0.0)
        u = game.project_free_blochs(u + step[:, None, None] * h, iters=10)
        v, lam = _measurement_step(_pair_sums(u), al, lam, iters=12)
        if (it + 1) % check_every == 0:
            new_values = _objective(u, v, al)
            gains = new_values - values
            best_gain = new_values.max() - values.max()
            values = new_values
            if np.max(gains) < tol:
                break
            best_stagnant = best_stagnant + 1 if best_gain < tol else 0
            if best_stagnant >= 4 and it > 600:
                break

    # exact feasibility, then exact evaluation of every restart
    u = game.shrink_to_feasible(game.project_free_blochs(u, iters=60))
    v, lam = _measurement_step(_pair_sums(u), al, lam, iters=150)
    finals = _objective(u, v, al)
    best = int(np.flatnonzero(finals >= finals.max() - 1e-12)[0])

    first = tuple(DensityState(u[best, x]) for x in range(3))
    preps = game.complete_preparations(first)
    effects_v = v[best]
    povm = Povm(
        tuple(Effect(al[b] / 2.0, (al[b] / 2.0) * effects_v[b]) for b in range(3)),
        alphas=tuple(al),
    )
    strategy = game.GameStrategy(preps, povm)
    value = game.success_probability(strategy)
    return OptimizationResult(
        value=value,
        strategy=strategy,
        restarts_used=restarts,
        converged=bool(gains[best] < tol),
        best_gap=float(finals.max() - finals.min()),
    )


def trine_preparation_value(alpha) -> float:
    """Exact game value when the a=0 preparations are pinned to the trine.

    The remaining measurement subproblem is convex and solved exactly, so
    this is a closed-form point of comparison for the full optimizer.
    """
    al = _as_alpha(alpha).as_array()
    a_dirs = np.stack([xz_direction(2.0 * np.pi * x / 3.0) for x in range(3)])
    c = _pair_sums(a_dirs[None, :, :])
    v, _ = _measurement_step(c, al, np.zeros((1, 3)), iters=400)
    return float(_objective(a_dirs[None, :, :], v, al)[0])


def quantum_curve(grid, restarts: int = 50, seed: int = 0) -> list[tuple[float, float]]:
    """(alpha0, P_Q) along the slice alpha_1 = alpha_2 = (2 - alpha0)/2."""
    points = []
    for idx, alpha0 in enumerate(grid):
        alpha = AlphaTriple.symmetric(float(alpha0))
        result = optimize_quantum(alpha, restarts=restarts, seed=derive_seed(seed, idx))
        points.append((float(alpha0), result.value))
    return points
