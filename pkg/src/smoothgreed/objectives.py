"""Objectives over the nonnegative orthant and the PSD cone.

Holds the step data model (linear maps into the cone plus compact feasible
sets), support functions, dual-objective evaluation, the lp-ball distance
penalty with its subgradients, and the rank-one determinant state used by
the online engines.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from smoothgreed.scalar import NegPlusPenalty
from smoothgreed.smoothing import SmoothedScalar

# ----------------------------------------------------------------------
# Feasible sets and step maps
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class FeasibleSet:
    """Compact convex set containing 0: simplex, unit interval, or box."""

    kind: str
    k: int = 1

    def __post_init__(self):
        if self.kind not in ("simplex", "unit_interval", "box"):
            raise ValueError(f"unknown feasible set kind {self.kind!r}")
        if self.kind == "unit_interval" and self.k != 1:
            raise ValueError("unit_interval is one-dimensional")

    def support(self, z):
        """max over the set of <x, z>, with a maximizing point.

        Ties toward the origin, then toward the lowest vertex index, so
        runs are reproducible.
        """
        z = np.atleast_1d(np.asarray(z, dtype=float))
        if len(z) != self.k:
            raise ValueError(f"support: dim mismatch ({len(z)} != {self.k})")
        x = np.zeros(self.k)
        if self.kind == "simplex":
            j = int(np.argmax(z))
            if z[j] > 0.0:
                x[j] = 1.0
                return float(z[j]), x
            return 0.0, x
        if self.kind == "unit_interval":
            if z[0] > 0.0:
                return float(z[0]), np.ones(1)
            return 0.0, x
        pos = z > 0.0
        x[pos] = 1.0
        return float(z[pos].sum()), x

    def to_descriptor(self):
        return {"kind": self.kind, "k": self.k}


@dataclass(frozen=True)
class DiagMap:
    """x -> diag(a) x; the budgeted-allocation step shape."""

    a: np.ndarray

    def apply(self, x):
        return self.a * x

    def adjoint(self, y):
        return self.a * y

    def to_descriptor(self):
        return {"kind": "diag", "a": np.asarray(self.a).tolist()}


@dataclass(frozen=True)
class StackedMap:
    """x -> (c^T x, B x); reward plus consumption for packing steps."""

    c: np.ndarray
    B: np.ndarray

    def apply(self, x):
        return np.concatenate(([float(self.c @ x)], self.B @ x))

    def adjoint(self, y):
        return self.c * y[0] + self.B.T @ y[1:]

    def to_descriptor(self):
        return {"kind": "stacked", "c": np.asarray(self.c).tolist(),
                "B": np.asarray(self.B).tolist()}


@dataclass(frozen=True)
class RankOneMap:
    """x -> (x * a a^T, x); the determinant-maximization step shape."""

    a: np.ndarray

    def apply(self, x):
        return float(x)

    def to_descriptor(self):
        return {"kind": "rank_one", "a": np.asarray(self.a).tolist()}


@dataclass(frozen=True)
class Step:
    A: object
    F: FeasibleSet

    def to_descriptor(self):
        return {"A": self.A.to_descriptor(), "F": self.F.to_descriptor()}


def step_from_descriptor(d: dict) -> Step:
    a = d["A"]
    if a["kind"] == "diag":
        A = DiagMap(np.asarray(a["a"], dtype=float))
    elif a["kind"] == "stacked":
        A = StackedMap(np.asarray(a["c"], dtype=float), np.asarray(a["B"], dtype=float))
    elif a["kind"] == "rank_one":
        A = RankOneMap(np.asarray(a["a"], dtype=float))
    else:
        raise ValueError(f"unknown step map kind {a['kind']!r}")
    f = d["F"]
    return Step(A, FeasibleSet(f["kind"], f.get("k", 1)))


# ----------------------------------------------------------------------
# Objectives
# ----------------------------------------------------------------------


class SeparableObjective:
    """Coordinatewise sum of scalar concave functions on the orthant.

    ``smoothed`` optionally supplies the surrogate the engines run on; the
    original coordinates still define primal values and dual certificates.
    """

    cone = "orthant"

    def __init__(self, coords, smoothed=None, certified_beta=None):
        self.coords = list(coords)
        self.n = len(self.coords)
        if smoothed is not None and not isinstance(smoothed, (list, tuple)):
            smoothed = [smoothed] * self.n
        self.smoothed = list(smoothed) if smoothed is not None else None
        self.certified_beta = certified_beta
        self._uniform = all(c is self.coords[0] for c in self.coords)
        self._uniform_s = self.smoothed is not None and all(
            s is self.smoothed[0] for s in self.smoothed)

    @property
    def engine_coords(self):
        return self.smoothed if self.smoothed is not None else self.coords

    def value(self, u):
        u = np.asarray(u, dtype=float)
        if self._uniform:
            return float(np.sum(self.coords[0].value(u)))
        return float(sum(c.value(ui) for c, ui in zip(self.coords, u)))

    def engine_value(self, u):
        if self.smoothed is None:
            return self.value(u)
        u = np.asarray(u, dtype=float)
        if self._uniform_s:
            return float(np.sum(self.smoothed[0].value(u)))
        return float(sum(s.value(ui) for s, ui in zip(self.smoothed, u)))

    def engine_grad_lo(self, u):
        """Minimal supergradient of the engine objective, coordinatewise."""
        u = np.asarray(u, dtype=float)
        cs = self.engine_coords
        if self.smoothed is not None and self._uniform_s:
            return np.asarray(cs[0].deriv_right(u), dtype=float)
        if self.smoothed is None and self._uniform:
            return np.asarray(cs[0].deriv_right(u), dtype=float)
        return np.array([float(c.deriv_right(ui)) for c, ui in zip(cs, u)])

    def conj_orig(self, y):
        y = np.asarray(y, dtype=float)
        if self._uniform:
            return float(np.sum(self.coords[0].conjugate(y)))
        return float(sum(c.conj1(float(yi)) for c, yi in zip(self.coords, y)))

    def conj_engine(self, y):
        if self.smoothed is None:
            return self.conj_orig(y)
        y = np.asarray(y, dtype=float)
        if self._uniform_s:
            return float(np.sum(self.smoothed[0].conjugate(y)))
        return float(sum(s.conjugate(float(yi)) for s, yi in zip(self.smoothed, y)))

    def alpha_bar(self, u_max: float = 1e4) -> float:
        from smoothgreed.scalar import alpha_bar as ab
        return min(ab(c, u_max) for c in self.coords)

    def ratio_bound(self) -> float:
        """Certified competitive-ratio lower bound for the simultaneous engine."""
        if self.smoothed is not None:
            if self.certified_beta is None:
                raise ValueError("smoothed objective without a certified beta")
            return 1.0 / self.certified_beta
        return 1.0 / (1.0 - self.alpha_bar())


class PenaltyLPObjective:
    """Linear reward plus an exact budget penalty on the orthant.

    State vectors are laid out as (v, u_1..u_n): the accumulated reward
    followed by the consumption coordinates.  ``penalty_kind`` is either
    "separable_cap" (one hinge per coordinate) or "lp_ball" (the l1
    distance from the p-norm ball).
    """

    cone = "orthant"

    def __init__(self, n, l, theta, penalty_kind="separable_cap", p=None,
                 smoothed_penalty=None):
        if l <= 0 or theta <= 0:
            raise ValueError("PenaltyLPObjective: l and theta must be positive")
        self.n = int(n)
        self.l = float(l)
        self.theta = float(theta)
        self.penalty_kind = penalty_kind
        if penalty_kind == "lp_ball":
            if p is None or p < 1:
                raise ValueError("lp_ball penalty needs p >= 1")
            if smoothed_penalty is not None:
                raise ValueError("smoothing is only wired for the separable penalty")
        elif penalty_kind != "separable_cap":
            raise ValueError(f"unknown penalty kind {penalty_kind!r}")
        self.p = p
        self.base_pen = NegPlusPenalty(self.l, 1.0)
        self.smoothed_penalty = smoothed_penalty

    def penalty_value(self, u):
        u = np.asarray(u, dtype=float)
        if self.penalty_kind == "separable_cap":
            return float(np.sum(self.base_pen.value(u)))
        return -self.l * lp_ball_distance(u, self.p)[0]

    def value(self, state):
        return float(state[0]) + self.penalty_value(state[1:])

    def engine_pen(self):
        return self.smoothed_penalty if self.smoothed_penalty is not None else self.base_pen

    def engine_value(self, state):
        if self.smoothed_penalty is None:
            return self.value(state)
        return float(state[0]) + float(np.sum(self.smoothed_penalty.value(state[1:])))

    def engine_grad_lo(self, state):
        """Minimal supergradient (1, dG) of the engine objective."""
        u = np.asarray(state[1:], dtype=float)
        if self.penalty_kind == "separable_cap":
            pen = self.engine_pen()
            g = np.asarray(pen.deriv_right(u), dtype=float)
        else:
            _, g_lo, g_hi = lp_ball_distance(u, self.p)
            g = -self.l * g_hi
        return np.concatenate(([1.0], g))

    def conj_orig(self, y):
        y = np.asarray(y, dtype=float)
        if y[0] < 1.0 - 1e-12:
            return -math.inf
        pen = y[1:]
        if self.penalty_kind == "separable_cap":
            return float(np.sum(self.base_pen.conjugate(pen)))
        if np.min(pen) < -self.l - 1e-12:
            return -math.inf
        q = math.inf if self.p == 1 else (self.p / (self.p - 1.0) if self.p != math.inf else 1.0)
        neg = np.maximum(-pen, 0.0)
        nrm = float(np.max(neg)) if q == math.inf else float(np.sum(neg ** q) ** (1.0 / q))
        return -nrm

    def conj_engine(self, y):
        if self.smoothed_penalty is None:
            return self.conj_orig(y)
        y = np.asarray(y, dtype=float)
        if y[0] < 1.0 - 1e-12:
            return -math.inf
        return float(np.sum(self.smoothed_penalty.conjugate(y[1:])))

    def alpha_at_realized(self, state) -> float:
        """Ratio parameter at the realized point; lower-bounded by -l/theta."""
        val = self.value(state)
        if val <= 0:
            raise ValueError("alpha_at_realized: nonpositive objective value")
        y = self.engine_grad_lo_original(state)
        return self.conj_orig(y) / val

    def engine_grad_lo_original(self, state):
        u = np.asarray(state[1:], dtype=float)
        if self.penalty_kind == "separable_cap":
            g = np.asarray(self.base_pen.deriv_right(u), dtype=float)
        else:
            _, _, g_hi = lp_ball_distance(u, self.p)
            g = -self.l * g_hi
        return np.concatenate(([1.0], g))


class LogDetObjective:
    """Shifted determinant objective with a budget penalty on the PSD cone.

    The reward part is logdet(A0 + U) - logdet(A0); the budget consumption
    is scalar and carries the penalty -l*(u - b)_+, optionally smoothed.
    The penalty slope must dominate the dual variable, which holds when
    l > 2 / lambda_min(A0).
    """

    cone = "psd"

    def __init__(self, A0, b, l=None, smoothed_budget=None):
        A0 = np.asarray(A0, dtype=float)
        if A0.ndim != 2 or A0.shape[0] != A0.shape[1]:
            raise ValueError("LogDetObjective: A0 must be square")
        if not np.allclose(A0, A0.T, atol=1e-10):
            raise ValueError("LogDetObjective: A0 must be symmetric")
        lam_min = float(np.linalg.eigvalsh(A0)[0])
        if lam_min <= 0:
            raise ValueError("LogDetObjective: A0 must be positive definite")
        self.A0 = A0
        self.n = A0.shape[0]
        self.b = float(b)
        self.l_floor = 2.0 / lam_min
        self.l = float(l) if l is not None else self.l_floor * (1.0 + 1e-6)
        if self.l <= self.l_floor:
            raise ValueError(f"LogDetObjective: need l > {self.l_floor:.6g}")
        self.base_pen = NegPlusPenalty(self.l, self.b)
        self.smoothed_budget = smoothed_budget
        self.theta = math.log1p(1.0 / self.n)
        sign, self._logdet_A0 = np.linalg.slogdet(A0)
        if sign <= 0:
            raise ValueError("LogDetObjective: A0 has nonpositive determinant")

    def engine_pen(self):
        return self.smoothed_budget if self.smoothed_budget is not None else self.base_pen

    def reward(self, U):
        sign, ld = np.linalg.slogdet(self.A0 + U)
        if sign <= 0:
            raise ValueError("LogDetObjective: state left the PSD cone")
        return float(ld - self._logdet_A0)

    def value(self, U, used):
        return self.reward(U) + float(self.base_pen.value(used))

    def engine_value(self, U, used):
        return self.reward(U) + float(self.engine_pen().value(used))

    def hstar(self, Y):
        """Conjugate of the shifted reward at a dual matrix 0 < Y <= A0^-1."""
        sign, ld = np.linalg.slogdet(Y)
        if sign <= 0:
            return -math.inf
        return float(self.n - np.trace(Y @ self.A0) + ld + self._logdet_A0)

    def conj_orig(self, dual):
        Y, yb = dual
        return self.hstar(Y) + float(self.base_pen.conj1(float(yb)))

    def conj_engine(self, dual):
        Y, yb = dual
        pen = self.engine_pen()
        if isinstance(pen, SmoothedScalar):
            return self.hstar(Y) + float(pen.conjugate(float(yb)))
        return self.conj_orig(dual)

    def ratio_bound(self) -> float:
        if self.smoothed_budget is not None and hasattr(self.smoothed_budget, "ratio_bound"):
            return self.smoothed_budget.ratio_bound
        return 0.5  # unsmoothed determinant reward has ratio parameter -1


# ----------------------------------------------------------------------
# Support machinery
# ----------------------------------------------------------------------


def dual_objective(obj, steps, y) -> float:
    """sum_t support(F_t, A_t^T y) - conj(y); upper-bounds the offline optimum."""
    conj = obj.conj_orig(y)
    if conj == -math.inf:
        return math.inf
    total = 0.0
    for st in steps:
        if isinstance(st.A, RankOneMap):
            Y, yb = y
            z = float(st.A.a @ Y @ st.A.a) + float(yb)
            total += st.F.support([z])[0]
        else:
            total += st.F.support(st.A.adjoint(np.asarray(y, dtype=float)))[0]
    return total - conj


def lp_ball_distance(u, p):
    """l1 distance from the p-norm ball over the orthant, with subgradients.

    Returns (value, sub_lo, sub_hi); the closest ball point clips every
    coordinate at a common level r chosen so the clipped vector has unit
    p-norm.  The subgradient is an interval only when the level equals the
    largest coordinate, which happens exactly on the ball boundary.
    """
    u = np.asarray(u, dtype=float)
    if np.any(u < -1e-12):
        raise ValueError("lp_ball_distance: u must be nonnegative")
    u = np.maximum(u, 0.0)
    zeros = np.zeros_like(u)
    if p == math.inf:
        val = float(np.sum(np.maximum(u - 1.0, 0.0)))
        if val == 0.0 and not np.any(u >= 1.0):
            return 0.0, zeros, zeros
        return val, (u > 1.0).astype(float), (u >= 1.0).astype(float)
    if p < 1:
        raise ValueError("lp_ball_distance: p must be >= 1")
    norm = float(np.sum(u ** p) ** (1.0 / p))
    if norm <= 1.0:
        return 0.0, zeros, zeros
    hi = float(np.max(u))
    lo = 0.0
    for _ in range(200):
        r = 0.5 * (lo + hi)
        if float(np.sum(np.minimum(u, r) ** p)) >= 1.0:
            hi = r
        else:
            lo = r
        if hi - lo <= 1e-14 * max(1.0, hi):
            break
    r = hi
    clipped = np.minimum(u, r)
    val = float(np.sum(u - clipped))
    g = (clipped / r) ** (p - 1.0)
    if r >= float(np.max(u)) * (1.0 - 1e-10):
        return val, zeros, g
    return val, g, g


def theta_of_instance(steps) -> float:
    """Worst-case reward per unit of total consumption over step vertices."""
    best = math.inf
    for st in steps:
        if isinstance(st.A, StackedMap):
            c, B = st.A.c, st.A.B
            den = B.sum(axis=0)
            for j in range(len(c)):
                if den[j] > 0:
                    best = min(best, float(c[j] / den[j]))
        elif isinstance(st.A, DiagMap):
            if np.any(st.A.a > 0):
                best = min(best, 1.0)
        else:
            raise TypeError("theta_of_instance: expects orthant steps")
    if best is math.inf:
        raise ValueError("theta_of_instance: no step consumes anything")
    return best


def l_bound_lp(steps, eps: float = 1e-6) -> float:
    """Penalty slope strictly dominating every optimal dual variable."""
    worst = 0.0
    for st in steps:
        if isinstance(st.A, StackedMap):
            c, B = st.A.c, st.A.B
            mask = B > 0
            if mask.any():
                ratios = np.broadcast_to(c, B.shape)[mask] / B[mask]
                worst = max(worst, float(np.max(ratios)))
        elif isinstance(st.A, DiagMap):
            if np.any(st.A.a > 0):
                worst = max(worst, 1.0)
    if worst == 0.0:
        raise ValueError("l_bound_lp: instance never consumes budget")
    return worst * (1.0 + eps)


# ----------------------------------------------------------------------
# Rank-one determinant state
# ----------------------------------------------------------------------


class LogDetState:
    """Maintains (A0 + sum_t x_t a_t a_t^T)^{-1} through rank-one updates.

    Refactorizes every ``refactor_every`` accepted updates or when the
    inverse drifts; keeps the dense accumulator for drift checks.
    """

    def __init__(self, A0, refactor_every: int = 128, drift_tol: float = 1e-6):
        self.A0 = np.asarray(A0, dtype=float)
        self.Asum = self.A0.copy()
        self.Y = np.linalg.inv(self.A0)
        self.refactor_every = refactor_every
        self.drift_tol = drift_tol
        self.updates_since_refactor = 0

    def quad(self, a) -> float:
        return float(a @ self.Y @ a)

    def drift(self) -> float:
        return float(np.max(np.abs(self.Y @ self.Asum - np.eye(len(self.A0)))))

    def apply(self, a, x: float):
        if x == 0.0:
            return
        q = self.quad(a)
        if 1.0 + x * q <= 0:
            raise FloatingPointError("LogDetState: update would leave the PSD cone")
        Ya = self.Y @ a
        self.Y -= np.outer(Ya, Ya) * (x / (1.0 + x * q))
        self.Asum += x * np.outer(a, a)
        self.updates_since_refactor += 1
        if (self.updates_since_refactor >= self.refactor_every
                or self.drift() > self.drift_tol):
            self.Y = np.linalg.inv(self.Asum)
            self.updates_since_refactor = 0

    @property
    def U(self):
        return self.Asum - self.A0


def logdet_step_gain(state: LogDetState, a, x: float) -> float:
    """log-determinant gain of adding x * a a^T, via the rank-one identity."""
    if not 0.0 <= x <= 1.0:
        raise ValueError("logdet_step_gain: x must lie in [0, 1]")
    return math.log1p(state.quad(a) * x)


# ----------------------------------------------------------------------
# Order-reversing gradient check
# ----------------------------------------------------------------------


@dataclass
class AntitoneReport:
    passed: bool
    max_violation: float
    trials: int
    detail: str = ""


def antitone_check(obj, trials: int = 50, seed: int = 0, tol: float = 1e-8) -> AntitoneReport:
    """Sample cone-ordered pairs and test the order-reversing gradient law.

    For orthant objectives compares supergradient intervals coordinatewise;
    for the PSD objective checks grad(V) - grad(U) against -tol * I in the
    eigenvalue order.  Anything with scalar deriv_left/deriv_right methods
    is accepted, so convex negative controls can be probed too.
    """
    rng = np.random.default_rng(np.random.Philox(key=seed))
    worst = 0.0
    if isinstance(obj, LogDetObjective):
        n = obj.n
        for _ in range(trials):
            M1 = rng.normal(size=(n, n))
            M2 = rng.normal(size=(n, n))
            V = M1 @ M1.T * 0.5
            U = V + M2 @ M2.T * 0.5
            GV = np.linalg.inv(V + obj.A0)
            GU = np.linalg.inv(U + obj.A0)
            lam = float(np.linalg.eigvalsh(GV - GU)[0])
            worst = max(worst, -lam)
        return AntitoneReport(worst <= tol, worst, trials, "psd pairs")
    if isinstance(obj, SeparableObjective):
        coords = obj.coords
        for _ in range(trials):
            v = rng.uniform(0.0, 3.0, size=obj.n)
            u = v + rng.uniform(0.0, 3.0, size=obj.n)
            for f, ui, vi in zip(coords, u, v):
                hi_u = min(float(f.deriv_left(ui)), 1e15)
                lo_v = float(f.deriv_right(vi))
                worst = max(worst, hi_u - lo_v)
        return AntitoneReport(worst <= tol, worst, trials, "orthant pairs")
    # scalar path: any object exposing one-sided derivatives
    for _ in range(trials):
        v = float(rng.uniform(0.0, 3.0))
        u = v + float(rng.uniform(1e-6, 3.0))
        worst = max(worst, float(obj.deriv_left(u)) - float(obj.deriv_right(v)))
    return AntitoneReport(worst <= tol, worst, trials, "scalar pairs")
