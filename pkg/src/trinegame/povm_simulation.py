"""Simulation of odd-n equatorial POVMs by mixtures of three-outcome POVMs.

The n-outcome equatorial POVM has effects (2/n) pi_k with pi_k at Bloch
angle 2 pi k / n in the xz plane.  Tossing a fair n-sided coin and, on
outcome o, measuring the three-outcome POVM

    M^o = { h0 pi_o,  h1 pi_{o+(n-1)/2},  h1 pi_{o+(n+1)/2} }      (mod n)

with h0 = 2 cos(pi/n) / (1 + cos(pi/n)) and h1 = 1 / (1 + cos(pi/n))
reproduces the parent statistics exactly: each projector pi_k appears in
three members with coefficients summing to 2, giving back weight 2/n.

Rank-one POVMs are extremal exactly when their effects are linearly
independent as Hermitian operators; the certificate is the rank of their
coordinate matrix.  Each M^o is extremal while the parent (n > 3) is not.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .qubit_core import (
    DensityState,
    Povm,
    born_probability,
    povm_from_weighted_projectors,
    random_state,
    xz_direction,
)


def _check_n(n: int) -> int:
    n = int(n)
    if n < 3 or n % 2 == 0:
        raise ValueError(f"need an odd outcome count n >= 3, got {n}")
    return n


def equatorial_angle(n: int, k: int) -> float:
    return 2.0 * np.pi * k / n


@dataclass(frozen=True, eq=False)
class EquatorialPovm:
    n: int
    povm: Povm

    @property
    def weight(self) -> float:
        return 2.0 / self.n


@dataclass(frozen=True, eq=False)
class SimulatorMember:
    """Three-outcome POVM M^o with the parent labels its outcomes report."""

    o: int
    labels: tuple          # parent outcome announced for each effect
    povm: Povm


@dataclass(frozen=True, eq=False)
class SimulatorSet:
    n: int
    h0: float
    h1: float
    members: tuple

    def __iter__(self):
        return iter(self.members)


@dataclass(frozen=True, eq=False)
class SimulationReport:
    n: int
    element_residual: float        # worst coordinate error of the mixed effects
    statistical_residual: float    # worst outcome-probability error over states
    states_checked: int
    passed: bool
    tol: float


def equatorial_povm(n: int) -> EquatorialPovm:
    """The n-outcome POVM {(2/n) pi_k} on the xz great circle."""
    n = _check_n(n)
    dirs = [xz_direction(equatorial_angle(n, k)) for k in range(n)]
    return EquatorialPovm(n, povm_from_weighted_projectors([2.0 / n] * n, dirs))


def simulation_coefficients(n: int) -> tuple[float, float]:
    n = _check_n(n)
    c = np.cos(np.pi / n)
    return 2.0 * c / (1.0 + c), 1.0 / (1.0 + c)


def simulator_set(n: int) -> SimulatorSet:
    """The n three-outcome members whose uniform mixture simulates the parent."""
    n = _check_n(n)
    h0, h1 = simulation_coefficients(n)
    members = []
    for o in range(n):
        labels = (o, (o + (n - 1) // 2) % n, (o + (n + 1) // 2) % n)
        dirs = [xz_direction(equatorial_angle(n, k)) for k in labels]
        povm = povm_from_weighted_projectors((h0, h1, h1), dirs)
        members.append(SimulatorMember(o, labels, povm))
    return SimulatorSet(n, h0, h1, tuple(members))


def mixed_effect_coords(sim: SimulatorSet) -> np.ndarray:
    """Coordinates (w, vx, vy, vz) of the uniformly mixed relabeled effects."""
    coords = np.zeros((sim.n, 4))
    for member in sim.members:
        for label, effect in zip(member.labels, member.povm.effects):
            coords[label] += effect.as_operator().coords / sim.n
    return coords


def verify_simulation(n: int, tol: float = 1e-12, n_states: int = 100, seed: int = 0) -> SimulationReport:
    """Element-wise and statistical agreement of the mixture with the parent."""
    n = _check_n(n)
    parent = equatorial_povm(n)
    sim = simulator_set(n)
    target = np.stack([e.as_operator().coords for e in parent.povm.effects])
    element_residual = float(np.max(np.abs(mixed_effect_coords(sim) - target)))

    rng = np.random.default_rng(seed)
    stat_residual = 0.0
    for _ in range(n_states):
        state = random_state(rng)
        for k in range(n):
            p_parent = born_probability(state, parent.povm.effects[k])
            p_mix = sum(
                born_probability(state, eff)
                for member in sim.members
                for label, eff in zip(member.labels, member.povm.effects)
                if label == k
            ) / n
            stat_residual = max(stat_residual, abs(p_parent - p_mix))
    passed = element_residual <= tol and stat_residual <= max(tol, 1e-10)
    return SimulationReport(n, element_residual, stat_residual, n_states, passed, tol)


@dataclass(frozen=True, eq=False)
class ExtremalityCertificate:
    applicable: bool               # all effects rank-one?
    extremal: bool | None
    gram_rank: int | None
    n_effects: int
    singular_values: tuple

    def __bool__(self) -> bool:
        return bool(self.extremal)


def is_extremal_rank_one(povm: Povm, tol: float = 1e-9) -> ExtremalityCertificate:
    """Rank-one POVMs are extremal iff their effects are linearly independent;
    the certificate is the rank of the effect-coordinate matrix."""
    effects = povm.effects
    if not all(e.is_rank_one(tol) for e in effects):
        return ExtremalityCertificate(False, None, None, len(effects), ())
    coords = np.stack([e.as_operator().coords for e in effects])
    svals = np.linalg.svd(coords, compute_uv=False)
    rank = int(np.sum(svals > 1e-9))
    return ExtremalityCertificate(True, rank == len(effects), rank, len(effects), tuple(svals))
