"""Dense two-phase simplex for small equality-constrained LPs with box bounds.

Maximizes c.x subject to A x = b and l <= x <= u.  Lower bounds are
shifted to zero; upper bounds are handled natively by the bounded-variable
rules (nonbasic variables may sit at either bound, with bound flips in the
ratio test).  Bland's anti-cycling rule is always on, so every solve
terminates and is deterministic.  Problem sizes here are tens of variables
and constraints; no sparse machinery is warranted.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

PIVOT_TOL = 1e-11
FEASIBILITY_TOL = 1e-9
_MAX_ITERS = 50_000


class LpDimensionError(ValueError):
    """Inconsistent LP dimensions or invalid bounds."""


@dataclass(frozen=True, eq=False)
class LinearProgram:
    """max objective.x  s.t.  eq_matrix x = eq_rhs,  lower <= x <= upper."""

    objective: np.ndarray
    eq_matrix: np.ndarray
    eq_rhs: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    names: tuple | None = None
    row_names: tuple | None = None

    def __post_init__(self):
        c = np.asarray(self.objective, dtype=float).reshape(-1)
        a = np.asarray(self.eq_matrix, dtype=float)
        if a.ndim != 2:
            a = a.reshape((0, c.size)) if a.size == 0 else np.atleast_2d(a)
        b = np.asarray(self.eq_rhs, dtype=float).reshape(-1)
        lo = np.asarray(self.lower, dtype=float).reshape(-1)
        hi = np.asarray(self.upper, dtype=float).reshape(-1)
        n = c.size
        if a.shape[1] != n or b.size != a.shape[0] or lo.size != n or hi.size != n:
            raise LpDimensionError(
                f"inconsistent sizes: c={c.size}, A={a.shape}, b={b.size}, l={lo.size}, u={hi.size}"
            )
        if not np.all(np.isfinite(lo)):
            raise LpDimensionError("lower bounds must be finite")
        if np.any(lo > hi + 1e-15):
            raise LpDimensionError("lower bound exceeds upper bound")
        for attr, val in (("objective", c), ("eq_matrix", a), ("eq_rhs", b), ("lower", lo), ("upper", hi)):
            val.flags.writeable = False
            object.__setattr__(self, attr, val)
        if self.names is not None:
            object.__setattr__(self, "names", tuple(self.names))
        if self.row_names is not None:
            object.__setattr__(self, "row_names", tuple(self.row_names))

    @property
    def n_vars(self) -> int:
        return self.objective.size

    @property
    def n_eqs(self) -> int:
        return self.eq_matrix.shape[0]


@dataclass(frozen=True, eq=False)
class LpSolution:
    status: str                  # "optimal" | "infeasible" | "unbounded"
    value: float
    x: np.ndarray | None
    residual: float
    phase1_objective: float = 0.0


class _Dictionary:
    """Simplex state for the shifted problem: A y = b0, 0 <= y <= span."""

    def __init__(self, a: np.ndarray, b0: np.ndarray, span: np.ndarray):
        m, n = a.shape
        sign = np.where(b0 < 0.0, -1.0, 1.0)
        self.tab = np.hstack([a * sign[:, None], np.eye(m)])
        self.rhs = b0 * sign
        self.basis = list(range(n, n + m))
        self.span = np.concatenate([span, np.full(m, np.inf)])
        self.at_upper = np.zeros(n + m, dtype=bool)
        self.is_basic = np.zeros(n + m, dtype=bool)
        self.is_basic[n:] = True
        self.n_struct = n

    def clone(self) -> "_Dictionary":
        other = object.__new__(_Dictionary)
        other.tab = self.tab.copy()
        other.rhs = self.rhs.copy()
        other.basis = list(self.basis)
        other.span = self.span.copy()
        other.at_upper = self.at_upper.copy()
        other.is_basic = self.is_basic.copy()
        other.n_struct = self.n_struct
        return other

    def basic_values(self) -> np.ndarray:
        up = np.where(self.at_upper & ~self.is_basic)[0]
        beta = self.rhs.copy()
        if up.size:
            beta = beta - self.tab[:, up] @ self.span[up]
        return beta

    def point(self) -> np.ndarray:
        y = np.where(self.at_upper, self.span, 0.0)
        y[self.is_basic] = 0.0
        y[self.basis] = self.basic_values()
        return y

    def _pivot(self, row: int, col: int):
        tab, rhs = self.tab, self.rhs
        piv = tab[row, col]
        tab[row] /= piv
        rhs[row] /= piv
        factors = tab[:, col].copy()
        factors[row] = 0.0
        tab -= np.outer(factors, tab[row])
        rhs -= factors * rhs[row]
        tab[:, col] = 0.0
        tab[row, col] = 1.0
        leaving = self.basis[row]
        self.is_basic[leaving] = False
        self.is_basic[col] = True
        self.at_upper[col] = False
        self.basis[row] = col

    def run(self, cost: np.ndarray, allowed: np.ndarray) -> str:
        """Maximize cost.y with Bland's rule; returns "optimal" or "unbounded"."""
        tab, span = self.tab, self.span
        enterable = allowed & (span > PIVOT_TOL)
        for _ in range(_MAX_ITERS):
            cb = cost[self.basis]
            reduced = cost - cb @ tab if len(self.basis) else cost.copy()
            favorable = enterable & ~self.is_basic & (
                (~self.at_upper & (reduced > PIVOT_TOL)) | (self.at_upper & (reduced < -PIVOT_TOL))
            )
            idx = np.flatnonzero(favorable)
            if idx.size == 0:
                return "optimal"
            j = int(idx[0])  # Bland: smallest index enters
            sigma = -1.0 if self.at_upper[j] else 1.0
            col = sigma * tab[:, j]
            beta = self.basic_values()

            # ratio test: how far the entering variable can move
            row_ratios = []  # (t, basic var index, row, leaves to upper bound)
            for i in range(len(self.basis)):
                ci = col[i]
                if ci > PIVOT_TOL:
                    t = max(beta[i], 0.0) / ci
                    row_ratios.append((t, self.basis[i], i, False))
                elif ci < -PIVOT_TOL and np.isfinite(span[self.basis[i]]):
                    t = max(span[self.basis[i]] - beta[i], 0.0) / (-ci)
                    row_ratios.append((t, self.basis[i], i, True))
            row_min = min((t for t, _, _, _ in row_ratios), default=np.inf)
            t_best = min(span[j], row_min)
            if not np.isfinite(t_best):
                return "unbounded"
            if row_min <= span[j] + 1e-12 and row_ratios:
                # Bland tie-break: smallest basic variable index among minimal ratios
                _, leave_row, leave_to_upper = min(
                    (var, i, up) for t, var, i, up in row_ratios if t <= row_min + 1e-12
                )
                leaving = self.basis[leave_row]
                self._pivot(leave_row, j)
                self.at_upper[leaving] = leave_to_upper
            else:
                # entering variable flips to its other bound
                self.at_upper[j] = not self.at_upper[j]
        raise RuntimeError("simplex iteration limit exceeded")

    def drop_artificials(self):
        """Pivot artificial variables out of the basis; drop redundant rows."""
        n = self.n_struct
        redundant = []
        for row in range(len(self.basis)):
            if self.basis[row] < n:
                continue
            piv_col = -1
            for j in range(n):
                if not self.is_basic[j] and abs(self.tab[row, j]) > PIVOT_TOL:
                    piv_col = j
                    break
            if piv_col >= 0:
                self._pivot(row, piv_col)
            else:
                redundant.append(row)
        if redundant:
            keep = [i for i in range(len(self.basis)) if i not in redundant]
            for row in redundant:
                self.is_basic[self.basis[row]] = False
            self.tab = self.tab[keep]
            self.rhs = self.rhs[keep]
            self.basis = [self.basis[i] for i in keep]
        self.tab = self.tab[:, :n]
        self.span = self.span[:n]
        self.at_upper = self.at_upper[:n]
        self.is_basic = self.is_basic[:n]


def _phase1(a: np.ndarray, b0: np.ndarray, span: np.ndarray) -> tuple[_Dictionary, float]:
    m, n = a.shape
    d = _Dictionary(a, b0, span)
    if m == 0:
        d.tab = np.zeros((0, n))
        d.span = span.copy()
        d.at_upper = np.zeros(n, dtype=bool)
        d.is_basic = np.zeros(n, dtype=bool)
        d.basis = []
        d.n_struct = n
        return d, 0.0
    cost = np.concatenate([np.zeros(n), -np.ones(m)])
    allowed = np.ones(n + m, dtype=bool)
    status = d.run(cost, allowed)
    if status != "optimal":  # pragma: no cover - phase 1 is always bounded
        raise RuntimeError("phase 1 unbounded")
    y = d.point()
    infeas = float(y[n:].sum())
    return d, infeas


class LpFamily:
    """Repeated maximization over one feasible region (shared A, b, bounds).

    Phase 1 runs once; each objective then starts phase 2 from the stored
    feasible dictionary.  Used for sweeps where only the objective varies.
    """

    def __init__(self, eq_matrix, eq_rhs, lower, upper):
        a = np.atleast_2d(np.asarray(eq_matrix, dtype=float))
        self.lower = np.asarray(lower, dtype=float).reshape(-1)
        self.upper = np.asarray(upper, dtype=float).reshape(-1)
        if a.size == 0:
            a = a.reshape((0, self.lower.size))
        self.a = a
        self.b = np.asarray(eq_rhs, dtype=float).reshape(-1)
        span = self.upper - self.lower
        b0 = self.b - a @ self.lower
        core, infeas = _phase1(a, b0, span)
        self.phase1_objective = infeas
        self.feasible = infeas <= FEASIBILITY_TOL
        if self.feasible:
            core.drop_artificials()
            self._core = core

    def maximize(self, objective) -> LpSolution:
        c = np.asarray(objective, dtype=float).reshape(-1)
        if c.size != self.lower.size:
            raise LpDimensionError("objective size mismatch")
        if not self.feasible:
            return LpSolution("infeasible", float("nan"), None, float("inf"), self.phase1_objective)
        d = self._core.clone()
        status = d.run(c, np.ones(d.n_struct, dtype=bool))
        if status == "unbounded":
            return LpSolution("unbounded", float("inf"), None, float("inf"), 0.0)
        y = d.point()
        x = y + self.lower
        x = np.clip(x, self.lower, self.upper)
        residual = float(np.max(np.abs(self.a @ x - self.b))) if self.a.shape[0] else 0.0
        return LpSolution("optimal", float(c @ x), x, residual, 0.0)


def solve(lp: LinearProgram) -> LpSolution:
    """Two-phase bounded simplex; Bland's rule on throughout."""
    family = LpFamily(lp.eq_matrix, lp.eq_rhs, lp.lower, lp.upper)
    return family.maximize(lp.objective)


def format_lp(lp: LinearProgram) -> str:
    """Plain-text dump, one line per constraint, for audit."""
    names = lp.names or tuple(f"x{i}" for i in range(lp.n_vars))
    row_names = lp.row_names or tuple(f"eq{i}" for i in range(lp.n_eqs))

    def comb(coeffs) -> str:
        parts = []
        for coef, name in zip(coeffs, names):
            if abs(coef) < 1e-14:
                continue
            mag = abs(coef)
            term = name if abs(mag - 1.0) < 1e-14 else f"{mag:g} {name}"
            if not parts:
                parts.append(term if coef > 0 else f"-{term}")
            else:
                parts.append(f"+ {term}" if coef > 0 else f"- {term}")
        return " ".join(parts) if parts else "0"

    lines = [f"maximize: {comb(lp.objective)}"]
    for rname, row, rhs in zip(row_names, lp.eq_matrix, lp.eq_rhs):
        lines.append(f"{rname}: {comb(row)} = {rhs:g}")
    for name, lo, hi in zip(names, lp.lower, lp.upper):
        lines.append(f"bound: {lo:g} <= {name} <= {hi:g}")
    return "\n".join(lines)
