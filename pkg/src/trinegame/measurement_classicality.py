"""Non-classicality certificates for qubit measurements.

Four independent certificates live here:

* anti-distinguishability: for a zero-sum triple of pure states, the POVM
  {(2/3)(I - pi_b)} rules out state b with certainty on outcome b;
* a guessing-gap incompatibility witness: discriminating a partitioned
  six-state ensemble succeeds strictly better when the partition label
  arrives before the measurement than after it, and the post-measurement
  optimum has an exact dual certificate (a minimum enclosing ball in Bloch
  coordinates), so a positive gap is rigorous;
* direct joint-measurability feasibility for coplanar POVM pairs, with the
  positivity cone replaced by inscribed (feasible => compatible) and
  circumscribed (infeasible => incompatible) polygon cones, both plain LPs;
* coherence detection: a POVM is free for a basis iff every effect Bloch
  vector is collinear with the basis axis; free in some basis iff all
  effect vectors are pairwise collinear, with the best witness state lying
  along the largest off-axis component.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .lp_engine import LinearProgram, solve
from .qubit_core import (
    DensityState,
    Effect,
    PauliOperator,
    Povm,
    born_probability,
    projector_effect,
    validate_povm,
    xz_direction,
)

TWO_FIFTHS_PI = 2.0 * np.pi / 5.0


class CoplanarityError(ValueError):
    """Joint-measurability check restricted to coplanar POVM pairs."""


# ---------------------------------------------------------------------------
# anti-distinguishability


def antidistinguishing_povm(states, tol: float = 1e-9) -> Povm:
    """POVM {(2/3)(I - pi_b)} that never fires outcome b on state b.

    Requires three pure states whose Bloch vectors sum to zero; then the
    complement effects are valid and complete.
    """
    states = tuple(states)
    if len(states) != 3:
        raise ValueError("expected three states")
    blochs = np.stack([s.bloch for s in states])
    if np.linalg.norm(blochs.sum(axis=0)) > tol:
        raise ValueError("Bloch vectors must sum to zero for this construction")
    for s in states:
        if abs(s.purity_radius - 1.0) > tol:
            raise ValueError("states must be pure")
    effects = tuple(Effect(1.0 / 3.0, -blochs[b] / 3.0) for b in range(3))
    return Povm(effects)


# ---------------------------------------------------------------------------
# partitioned ensembles and guessing probabilities


@dataclass(frozen=True, eq=False)
class PartitionedEnsemble:
    """Two three-state partitions drawn with uniform prior 1/6 overall."""

    part0: tuple
    part1: tuple

    def __post_init__(self):
        object.__setattr__(self, "part0", tuple(self.part0))
        object.__setattr__(self, "part1", tuple(self.part1))
        if len(self.part0) != 3 or len(self.part1) != 3:
            raise ValueError("each partition holds three states")

    def pair_operators(self) -> list[PauliOperator]:
        """The nine operators (e_i + e'_j)/6 entering the post-measurement dual."""
        out = []
        for s0 in self.part0:
            for s1 in self.part1:
                op = s0.as_operator() + s1.as_operator()
                out.append(op.scaled(1.0 / 6.0))
        return out


def _state_at(angle: float) -> DensityState:
    return DensityState(xz_direction(angle))


def carmeli_ensemble() -> PartitionedEnsemble:
    """The partitioned ensemble certifying incompatibility of the first two
    five-outcome simulators: states at xz angles {0, 144, 216} degrees and
    {72, 216, 288} degrees."""
    part0 = tuple(_state_at(a) for a in (0.0, 2 * TWO_FIFTHS_PI, 3 * TWO_FIFTHS_PI))
    part1 = tuple(_state_at(a) for a in (TWO_FIFTHS_PI, 3 * TWO_FIFTHS_PI, 4 * TWO_FIFTHS_PI))
    return PartitionedEnsemble(part0, part1)


def ensemble_for_simulator_pair(o_first: int, o_second: int) -> PartitionedEnsemble:
    """Rotated copy of the certifying ensemble aligned with members o_first
    and o_second of the five-outcome simulator set."""
    offsets = (0.0, 2 * TWO_FIFTHS_PI, 3 * TWO_FIFTHS_PI)
    part0 = tuple(_state_at(o_first * TWO_FIFTHS_PI + d) for d in offsets)
    part1 = tuple(_state_at(o_second * TWO_FIFTHS_PI + d) for d in offsets)
    return PartitionedEnsemble(part0, part1)


def prior_guess(
    ensemble: PartitionedEnsemble,
    m_first: Povm,
    m_second: Povm,
    assignment_first=(0, 1, 2),
    assignment_second=(0, 1, 2),
) -> float:
    """Discrimination success when the partition label arrives first.

    Measurement outcomes guess states positionally by default: outcome k of
    m_first guesses part0[assignment_first.index(k)] and likewise for the
    second partition.
    """
    if len(m_first) != 3 or len(m_second) != 3:
        raise ValueError("expected three-outcome measurements")
    total = 0.0
    for i, state in enumerate(ensemble.part0):
        total += born_probability(state, m_first.effects[assignment_first[i]])
    for j, state in enumerate(ensemble.part1):
        total += born_probability(state, m_second.effects[assignment_second[j]])
    return total / 6.0


# ---------------------------------------------------------------------------
# minimum enclosing ball (exact dual of the post-measurement problem)


def _circumcenter(points: np.ndarray) -> np.ndarray | None:
    """Center equidistant from k affinely independent points (k = 2, 3, 4)."""
    base = points[0]
    rel = points[1:] - base
    gram = rel @ rel.T
    rhs = 0.5 * np.einsum("ij,ij->i", rel, rel)
    det = np.linalg.det(gram)
    if abs(det) < 1e-18:
        return None
    coeffs = np.linalg.solve(gram, rhs)
    return base + coeffs @ rel


def min_enclosing_ball(points: np.ndarray) -> tuple[np.ndarray, float]:
    """Exact smallest enclosing ball by support-set enumeration.

    The optimal ball is determined by at most four points on its boundary;
    all pairs, triples and quadruples are tried (point counts here are <= 9).
    """
    pts = np.asarray(points, dtype=float)
    k = len(pts)
    if k == 0:
        raise ValueError("no points")
    if k == 1:
        return pts[0].copy(), 0.0
    best_center, best_r = None, np.inf
    for size in (2, 3, 4):
        for idx in combinations(range(k), size):
            sub = pts[list(idx)]
            if size == 2:
                center = 0.5 * (sub[0] + sub[1])
            else:
                center = _circumcenter(sub)
                if center is None:
                    continue
            r = float(np.max(np.linalg.norm(pts - center, axis=1)))
            if r < best_r - 1e-15:
                best_r = r
                best_center = center
    return best_center, best_r


# ---------------------------------------------------------------------------
# post-measurement guessing bounds


@dataclass(frozen=True, eq=False)
class GuessingReport:
    p_prior: float
    p_post_upper: float
    p_post_lower: float
    dual_certificate: PauliOperator
    witness_margin: float
    strategy_povm: Povm
    strategy_assignment: tuple

    def dual_feasibility_margin(self, ensemble: PartitionedEnsemble) -> float:
        """Smallest eigenvalue of Y - W_ij over the nine pair operators."""
        y = self.dual_certificate
        worst = np.inf
        for w in ensemble.pair_operators():
            gap = y - w
            worst = min(worst, gap.eigenvalues()[0])
        return float(worst)


def _zero_sum_alignment(points: np.ndarray, radii: np.ndarray) -> np.ndarray:
    """max sum_z y_z.c_z over sum_z y_z = 0, |y_z| <= r_z; returns y.

    Dual: the multiplier is the r-weighted geometric median of the points
    (Weiszfeld plus anchored-point test); primal recovery takes unit
    vectors toward c_z - lambda scaled by r_z.
    """
    c = np.asarray(points, dtype=float)
    r = np.asarray(radii, dtype=float)
    k = len(c)
    active = r > 1e-12
    y = np.zeros_like(c)
    idx = np.flatnonzero(active)
    if idx.size < 2:
        return y
    ca, ra = c[idx], r[idx]
    if idx.size == 2:
        d = ca[0] - ca[1]
        nd = np.linalg.norm(d)
        if nd > 1e-14:
            t = min(ra[0], ra[1])
            y[idx[0]] = t * d / nd
            y[idx[1]] = -t * d / nd
        return y
    lam = None
    anchor = -1
    for pos in range(idx.size):
        diffs = ca - ca[pos]
        norms = np.linalg.norm(diffs, axis=1)
        mask = norms > 1e-14
        pull = ((ra[mask] / norms[mask])[:, None] * diffs[mask]).sum(axis=0)
        slack = ra[pos] + ra[~mask].sum() - ra[pos]  # coincident points share the anchor
        if np.linalg.norm(pull) <= ra[pos] + slack + 1e-14:
            lam = ca[pos]
            anchor = pos
            break
    if lam is None:
        lam = (ra[:, None] * ca).sum(axis=0) / ra.sum()
        for _ in range(400):
            d = np.maximum(np.linalg.norm(ca - lam, axis=1), 1e-15)
            wgt = ra / d
            lam_new = (wgt[:, None] * ca).sum(axis=0) / wgt.sum()
            if np.linalg.norm(lam_new - lam) < 1e-15:
                lam = lam_new
                break
            lam = lam_new
    diffs = ca - lam
    norms = np.linalg.norm(diffs, axis=1)
    away = norms > 1e-12
    units = np.zeros_like(ca)
    units[away] = diffs[away] / norms[away, None]
    if anchor >= 0 or (~away).any():
        pull = (ra[away, None] * units[away]).sum(axis=0)
        hold = np.flatnonzero(~away)
        if hold.size:
            share = ra[hold].sum()
            if share > 1e-15:
                for h in hold:
                    units[h] = -pull * (1.0 / share)
    y[idx] = ra[:, None] * units
    # polish: exact zero-sum projection, then re-clip to the radii
    for _ in range(40):
        y -= y.sum(axis=0) / max(np.count_nonzero(r > 1e-12), 1)
        y[~active] = 0.0
        norms = np.linalg.norm(y, axis=1)
        over = norms > r
        if over.any():
            scale = np.where(over, r / np.maximum(norms, 1e-15), 1.0)
            y *= scale[:, None]
        if np.linalg.norm(y.sum(axis=0)) < 1e-13 and not over.any():
            break
    return y


def _strategy_value(ensemble: PartitionedEnsemble, povm: Povm, assignment) -> float:
    total = 0.0
    for z, eff in enumerate(povm.effects):
        i, j = assignment[z]
        total += born_probability(ensemble.part0[i], eff)
        total += born_probability(ensemble.part1[j], eff)
    return total / 6.0


def _best_assignment(ensemble: PartitionedEnsemble, weights, vecs) -> list[tuple[int, int]]:
    assignment = []
    for z in range(len(weights)):
        eff = Effect(weights[z] / 2.0, (weights[z] / 2.0) * vecs[z], tol=1e-6)
        pi = [born_probability(s, eff) for s in ensemble.part0]
        pj = [born_probability(s, eff) for s in ensemble.part1]
        assignment.append((int(np.argmax(pi)), int(np.argmax(pj))))
    return assignment


def _ascend_strategy(ensemble: PartitionedEnsemble, weights: np.ndarray, vecs: np.ndarray):
    """Alternate argmax guessing assignments with the exact measurement update."""
    pair_ops = ensemble.pair_operators()
    pair_vecs = np.array([op.vec for op in pair_ops]).reshape(3, 3, 3)
    assignment = _best_assignment(ensemble, weights, vecs)
    value = -np.inf
    for _ in range(60):
        targets = np.stack([pair_vecs[i, j] for (i, j) in assignment])
        y = _zero_sum_alignment(targets, weights)
        vecs = np.where(weights[:, None] > 1e-12, y / np.maximum(weights[:, None], 1e-12), 0.0)
        assignment = _best_assignment(ensemble, weights, vecs)
        povm = Povm(
            tuple(Effect(weights[z] / 2.0, y[z] / 2.0) for z in range(len(weights))),
            tol=1e-7,
        )
        new_value = _strategy_value(ensemble, povm, assignment)
        if new_value <= value + 1e-13:
            return new_value, povm, tuple(assignment)
        value = new_value
    return value, povm, tuple(assignment)


def post_guess_bounds(
    ensemble: PartitionedEnsemble, restarts: int = 12, seed: int = 7
) -> tuple[float, float, PauliOperator, Povm, tuple]:
    """(p_post_lower, p_post_upper, dual certificate, witness POVM, assignment).

    Upper bound: min Tr[Y] over Y >= W_ij for all nine pair operators.  All
    W_ij share identity coefficient 1/6, so the optimal Y is 1/6 + R plus
    the center of the minimum enclosing ball of the W Bloch parts: an exact
    dual optimum, not an estimate.  Lower bound: the best explicit strategy
    found by random-restart ascent over Bloch-parametrized POVMs, evaluated
    directly; structured starts include the dual ball's diameter direction
    and the z basis.
    """
    pair_ops = ensemble.pair_operators()
    pts = np.array([op.vec for op in pair_ops])
    center, radius = min_enclosing_ball(pts)
    upper = 2.0 * (1.0 / 6.0 + radius)
    certificate = PauliOperator(1.0 / 6.0 + radius, center)

    # contact points of the ball give the best two-outcome direction
    dists = np.linalg.norm(pts - center, axis=1)
    contacts = pts[dists >= radius - 1e-9]
    starts = []
    if len(contacts) >= 2:
        d = contacts[0] - contacts[-1]
        if np.linalg.norm(d) > 1e-12:
            starts.append((np.array([1.0, 1.0]), np.stack([d, -d]) / np.linalg.norm(d)))
    starts.append((np.array([1.0, 1.0]), np.stack([[0.0, 0.0, 1.0], [0.0, 0.0, -1.0]])))

    rng = np.random.default_rng(seed)
    weight_menu = [
        np.array([1.0, 1.0]),
        np.full(3, 2.0 / 3.0),
        np.array([1.0, 0.5, 0.5]),
        np.full(4, 0.5),
    ]
    for t in range(restarts):
        weights = weight_menu[t % len(weight_menu)]
        vecs = rng.normal(size=(len(weights), 3))
        vecs /= np.linalg.norm(vecs, axis=1, keepdims=True)
        starts.append((weights, vecs))

    best = (-np.inf, None, None)
    for weights, vecs in starts:
        y = _zero_sum_alignment(vecs * weights[:, None], weights)
        v0 = np.where(weights[:, None] > 1e-12, y / np.maximum(weights[:, None], 1e-12), 0.0)
        value, povm, assignment = _ascend_strategy(ensemble, weights, v0)
        if value > best[0]:
            best = (value, povm, assignment)
    return best[0], upper, certificate, best[1], best[2]


def guessing_report(
    ensemble: PartitionedEnsemble,
    m_first: Povm,
    m_second: Povm,
    restarts: int = 12,
    seed: int = 7,
) -> GuessingReport:
    lower, upper, certificate, povm, assignment = post_guess_bounds(ensemble, restarts, seed)
    prior = prior_guess(ensemble, m_first, m_second)
    return GuessingReport(
        p_prior=prior,
        p_post_upper=upper,
        p_post_lower=lower,
        dual_certificate=certificate,
        witness_margin=prior - upper,
        strategy_povm=povm,
        strategy_assignment=assignment,
    )


def incompatibility_witness(m_first: Povm, m_second: Povm, ensemble: PartitionedEnsemble) -> float:
    """prior_guess minus the certified post-measurement optimum; a positive
    margin proves the pair incompatible."""
    _, upper, _, _, _ = post_guess_bounds(ensemble)
    return prior_guess(ensemble, m_first, m_second) - upper


# ---------------------------------------------------------------------------
# joint measurability via polygonal cone relaxations


@dataclass(frozen=True, eq=False)
class JointMeasurabilityResult:
    verdict: str                 # "compatible" | "incompatible" | "undecided"
    inner_feasible: bool         # inscribed cone (sound for compatibility)
    outer_feasible: bool         # circumscribed cone (sound for incompatibility)
    polygon_k: int


def _common_plane_basis(povms, tol: float = 1e-9) -> tuple[np.ndarray, np.ndarray]:
    vecs = np.array([e.vec for povm in povms for e in povm.effects])
    norms = np.linalg.norm(vecs, axis=1)
    vecs = vecs[norms > 1e-13]
    if len(vecs) == 0:
        return np.array([1.0, 0.0, 0.0]), np.array([0.0, 0.0, 1.0])
    _, svals, vt = np.linalg.svd(vecs, full_matrices=True)
    if svals.size >= 3 and svals[2] > tol * svals[0]:
        raise CoplanarityError("effect Bloch vectors are not coplanar")
    return vt[0], vt[1]


def _joint_feasible(m_first: Povm, m_second: Povm, generators: np.ndarray) -> bool:
    """Feasibility of a 3x3 joint POVM with effects in the cone spanned by
    (1, g) for the given in-plane generator directions g."""
    e1, e2 = _common_plane_basis((m_first, m_second))
    n_gen = generators.shape[0]
    n_vars = 9 * n_gen

    def var(i: int, j: int, m: int) -> int:
        return (3 * i + j) * n_gen + m

    rows = []
    rhs = []
    for i, eff in enumerate(m_first.effects):
        coords = (eff.weight, eff.vec @ e1, eff.vec @ e2)
        for comp in range(3):
            row = np.zeros(n_vars)
            for j in range(3):
                for m in range(n_gen):
                    row[var(i, j, m)] = 1.0 if comp == 0 else generators[m, comp - 1]
            rows.append(row)
            rhs.append(coords[comp])
    for j, eff in enumerate(m_second.effects):
        coords = (eff.weight, eff.vec @ e1, eff.vec @ e2)
        for comp in range(3):
            row = np.zeros(n_vars)
            for i in range(3):
                for m in range(n_gen):
                    row[var(i, j, m)] = 1.0 if comp == 0 else generators[m, comp - 1]
            rows.append(row)
            rhs.append(coords[comp])
    lp = LinearProgram(
        objective=np.zeros(n_vars),
        eq_matrix=np.array(rows),
        eq_rhs=np.array(rhs),
        lower=np.zeros(n_vars),
        upper=np.full(n_vars, np.inf),
    )
    return solve(lp).status == "optimal"


def _polygon_generators(m_first: Povm, m_second: Povm, k: int, radius: float, include_inputs: bool):
    angles = [2.0 * np.pi * m / k for m in range(k)]
    gens = [(radius * np.cos(a), radius * np.sin(a)) for a in angles]
    if include_inputs:
        e1, e2 = _common_plane_basis((m_first, m_second))
        for povm in (m_first, m_second):
            for eff in povm.effects:
                v = np.array([eff.vec @ e1, eff.vec @ e2])
                n = np.linalg.norm(v)
                if n > 1e-12:
                    gens.append(tuple(v / n))
    return np.array(gens)


def joint_measurability_check(m_first: Povm, m_second: Povm, polygon_k: int = 64) -> JointMeasurabilityResult:
    """Three-valued joint-measurability test for coplanar POVM pairs.

    The positivity cone |v| <= w of each joint effect is replaced by an
    inscribed polygon cone (feasible implies truly compatible) and by a
    circumscribed one (infeasible implies truly incompatible).  Input effect
    directions are added to the inscribed generators so exact rank-one
    joints such as G_ij = delta_ij E_i stay representable.
    """
    if len(m_first) != 3 or len(m_second) != 3:
        raise ValueError("expected three-outcome measurements")
    inner = _joint_feasible(
        m_first, m_second, _polygon_generators(m_first, m_second, polygon_k, 1.0, True)
    )
    if inner:
        return JointMeasurabilityResult("compatible", True, True, polygon_k)
    outer_radius = 1.0 / np.cos(np.pi / polygon_k)
    outer = _joint_feasible(
        m_first, m_second, _polygon_generators(m_first, m_second, polygon_k, outer_radius, False)
    )
    verdict = "incompatible" if not outer else "undecided"
    return JointMeasurabilityResult(verdict, False, outer, polygon_k)


def add_noise(povm: Povm, eta: float) -> Povm:
    """E -> eta E + (1 - eta) Tr[E] I / 2: scales Bloch parts, keeps weights."""
    effects = tuple(Effect(e.weight, eta * e.vec) for e in povm.effects)
    return Povm(effects, alphas=povm.alphas)


def noise_compatibility_threshold(
    m_first: Povm, m_second: Povm, polygon_k: int = 64, tol: float = 1e-4
) -> tuple[float, float]:
    """Bisection bracket (last compatible eta, first incompatible eta)."""
    lo, hi = 0.0, 1.0
    if joint_measurability_check(m_first, m_second, polygon_k).verdict == "compatible":
        return 1.0, 1.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        verdict = joint_measurability_check(
            add_noise(m_first, mid), add_noise(m_second, mid), polygon_k
        ).verdict
        if verdict == "compatible":
            lo = mid
        else:
            hi = mid
    return lo, hi


# ---------------------------------------------------------------------------
# coherence detection


def dephase(state: DensityState, basis_direction) -> DensityState:
    """Project the Bloch vector onto the basis axis (full dephasing map)."""
    n = np.asarray(basis_direction, dtype=float)
    norm = np.linalg.norm(n)
    if norm < 1e-14:
        raise ValueError("basis direction must be nonzero")
    n = n / norm
    return DensityState((state.bloch @ n) * n)


@dataclass(frozen=True, eq=False)
class FreePovmReport:
    free: bool
    off_axis: tuple                      # per-effect off-axis Bloch magnitude
    max_off_axis: float
    witness_state: DensityState | None   # pure state with Tr[(rho - dephased rho) E] = max_off_axis
    witness_effect: int | None
    tol: float


def is_free_povm(povm: Povm, basis_direction, tol: float = 1e-9) -> FreePovmReport:
    """Free iff every effect Bloch vector is (anti)parallel to the basis axis,
    i.e. the POVM cannot tell any state from its dephasing.

    When not free, the pure state along the largest perpendicular component
    detects coherence with value equal to that component's magnitude.
    """
    n = np.asarray(basis_direction, dtype=float)
    norm = np.linalg.norm(n)
    if norm < 1e-14:
        raise ValueError("basis direction must be nonzero")
    n = n / norm
    perps = [e.vec - (e.vec @ n) * n for e in povm.effects]
    off = [float(np.linalg.norm(p)) for p in perps]
    worst = max(off, default=0.0)
    witness_state = None
    witness_effect = None
    if off and worst > tol:
        witness_effect = int(np.argmax(off))
        witness_state = DensityState(perps[witness_effect] / worst)
    return FreePovmReport(worst <= tol, tuple(off), worst, witness_state, witness_effect, tol)


def all_effects_collinear(povm: Povm, tol: float = 1e-9) -> bool:
    """Pairwise cross products of effect Bloch vectors vanish."""
    vecs = [e.vec for e in povm.effects]
    return all(
        float(np.linalg.norm(np.cross(u, v))) <= tol for u, v in combinations(vecs, 2)
    )


def all_commutators_vanish(povm: Povm, tol: float = 1e-9) -> bool:
    """[E, F] = 2i (v_E x v_F).sigma; the norm used is |v_E x v_F|."""
    return all_effects_collinear(povm, tol)


def common_diagonal_axis(povm: Povm, tol: float = 1e-9) -> np.ndarray | None:
    """Axis making every effect diagonal, or None; via the principal
    direction of the stacked effect Bloch vectors."""
    vecs = np.array([e.vec for e in povm.effects])
    norms = np.linalg.norm(vecs, axis=1)
    if np.all(norms <= tol):
        return np.array([0.0, 0.0, 1.0])
    _, _, vt = np.linalg.svd(vecs)
    axis = vt[0]
    residual = max(
        float(np.linalg.norm(v - (v @ axis) * axis)) for v in vecs
    )
    return axis if residual <= tol else None


@dataclass(frozen=True, eq=False)
class CoherenceDetectionReport:
    free_in_some_basis: bool
    basis_direction: np.ndarray | None
    witness_value: float                 # max off-axis Bloch magnitude
    witness_state: DensityState | None   # pure state maximizing Tr[(rho - dephased rho) E]
    witness_effect: int | None


def is_free_in_any_basis(povm: Povm, tol: float = 1e-9) -> CoherenceDetectionReport:
    """Free in some basis iff all effect Bloch vectors are pairwise collinear.

    When not free, the best-fit axis plus the largest off-axis component
    give the optimal coherence witness: the pure state along that component
    maximizes Tr[(rho - Lambda rho) E] with value equal to the off-axis
    Bloch magnitude.
    """
    axis = common_diagonal_axis(povm, tol)
    if axis is not None:
        return CoherenceDetectionReport(True, axis, 0.0, None, None)
    vecs = np.array([e.vec for e in povm.effects])
    _, _, vt = np.linalg.svd(vecs)
    best_axis = vt[0]
    perp = vecs - (vecs @ best_axis)[:, None] * best_axis[None, :]
    mags = np.linalg.norm(perp, axis=1)
    worst = int(np.argmax(mags))
    direction = perp[worst] / mags[worst]
    return CoherenceDetectionReport(
        False, None, float(mags[worst]), DensityState(direction), worst
    )
