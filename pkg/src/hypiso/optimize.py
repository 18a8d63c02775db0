"""Curvature-constrained shape optimization over closed arc chains.

Minimizes total boundary turning at fixed perimeter subject to the
two-sided curvature box, using projected gradient steps with Newton
restoration onto the closure manifold.  Also provides random thick
bodies for fuzzing and the perimeter-to-length helper for building the
comparison sausage.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geom import ORIGIN_FRAME
from .spline import (
    Arc,
    ArcSpline,
    GeometryError,
    arc_matrix,
    arc_matrix_dkappa,
    frenet_matrix,
)
from .bodies import Body

KKT_TOL = 1e-8
RESTORE_TOL = 1e-12


def lam_ball_circumference(lam: float) -> float:
    """Perimeter of the ball whose boundary curvature equals lam."""
    if lam <= 1.0:
        raise ValueError("thickness parameter must exceed 1")
    return 2.0 * math.pi * math.sinh(math.atanh(1.0 / lam))


def perimeter_to_d(lam: float, perimeter: float) -> float:
    """Half-length of the sausage with the given thickness and perimeter.

    Inverts perimeter = 2 pi sinh(R) + 4 d cosh(R) with R = arccoth(lam).
    Perimeters below the matching ball's circumference leave no room
    for any thick body and are rejected.
    """
    floor = lam_ball_circumference(lam)
    if perimeter < floor - 1e-12:
        raise ValueError(
            f"perimeter {perimeter:.6g} is below the thick feasibility "
            f"floor {floor:.6g}")
    r = math.atanh(1.0 / lam)
    return max(0.0, (perimeter - floor) / (4.0 * math.cosh(r)))


@dataclass(frozen=True)
class ShapeProblem:
    """Minimize total turning at fixed perimeter, kappa in [1/lam, lam]."""

    lam: float
    perimeter: float
    n_arcs: int

    def __post_init__(self):
        if self.lam <= 1.0:
            raise ValueError("thickness parameter must exceed 1")
        if self.n_arcs < 4:
            raise ValueError("need at least 4 arcs")
        if self.perimeter < lam_ball_circumference(self.lam) - 1e-12:
            raise ValueError("perimeter below the thick feasibility floor")


@dataclass(frozen=True)
class Candidate:
    """One optimizer outcome; kappas and lengths define the chain."""

    kappas: tuple
    lengths: tuple
    objective: float
    closure_residual: float
    kkt_residual: float
    converged: bool
    n_iters: int

    def to_spline(self) -> ArcSpline:
        arcs = [Arc(k, l) for k, l in zip(self.kappas, self.lengths)
                if l > 1e-12]
        return ArcSpline(ORIGIN_FRAME, tuple(arcs), closure_tol=1e-8)

    def to_body(self, lam: float | None = None) -> Body:
        s = self.to_spline()
        return Body(boundary=s, convex=min(a.kappa for a in s.arcs) >= 0.0,
                    thick_for=lam, meta={"kind": "optimized"})

    def to_json_dict(self) -> dict:
        return {
            "kappas": list(self.kappas),
            "lengths": list(self.lengths),
            "objective": self.objective,
            "closure_residual": self.closure_residual,
            "kkt_residual": self.kkt_residual,
            "converged": self.converged,
            "n_iters": self.n_iters,
        }


# ---------------------------------------------------------------------------
# closure constraints
#
# A chain from the origin frame closes when the end frame returns to
# the identity.  Of the nine matrix entries only three are independent
# near the identity: both position components and the tangent's normal
# component.  The remaining entries are pinned by the Lorentz
# orthonormality of the frame.


def _chain_matrices(kappas, lengths):
    return [arc_matrix(k, l) for k, l in zip(kappas, lengths)]


def closure_residual_vec(kappas, lengths) -> np.ndarray:
    E = np.eye(3)
    for A in _chain_matrices(kappas, lengths):
        E = E @ A
    return np.array([E[1, 0], E[2, 0], E[2, 1]])


def closure_jacobian(kappas, lengths):
    """Residuals and their Jacobian wrt (kappas, lengths), shape (3, 2n).

    Uses prefix and suffix chain products so each partial is a single
    triple product with the per-arc derivative in the middle.
    """
    n = len(kappas)
    mats = _chain_matrices(kappas, lengths)
    prefix = [np.eye(3)]
    for A in mats:
        prefix.append(prefix[-1] @ A)
    suffix = [np.eye(3)] * (n + 1)
    for i in range(n - 1, -1, -1):
        suffix[i] = mats[i] @ suffix[i + 1]
    E = prefix[n]
    res = np.array([E[1, 0], E[2, 0], E[2, 1]])
    J = np.zeros((3, 2 * n))
    for i in range(n):
        dK = prefix[i] @ arc_matrix_dkappa(kappas[i], lengths[i]) @ suffix[i + 1]
        # d/dlength of exp(s M) is exp(s M) M, applied inside the chain
        dL = prefix[i + 1] @ frenet_matrix(kappas[i]) @ suffix[i + 1]
        J[:, i] = (dK[1, 0], dK[2, 0], dK[2, 1])
        J[:, n + i] = (dL[1, 0], dL[2, 0], dL[2, 1])
    return res, J, E


def _full_constraints(x, n, perimeter):
    kap, lon = x[:n], x[n:]
    res, Jc, E = closure_jacobian(kap, lon)
    c = np.concatenate([[lon.sum() - perimeter], res])
    J = np.zeros((4, 2 * n))
    J[0, n:] = 1.0
    J[1:, :] = Jc
    return c, J, E


def _constraints_only(x, n, perimeter):
    kap, lon = x[:n], x[n:]
    res = closure_residual_vec(kap, lon)
    return np.concatenate([[lon.sum() - perimeter], res])


def _restore(x, n, perimeter, lb, ub, tol=RESTORE_TOL, max_iter=60):
    """Newton least-norm steps back onto the constraint manifold.

    Variables pinned at the box have their columns dropped before the
    min-norm solve, otherwise clipping stalls the iteration; each step
    backtracks on the residual norm.
    """
    x = x.copy()
    for _ in range(max_iter):
        c, J, E = _full_constraints(x, n, perimeter)
        norm = np.max(np.abs(c))
        if norm <= tol:
            return x if E[1, 1] > 0.0 else None
        if not np.isfinite(norm) or norm > 1e8:
            return None
        free = np.ones(x.size, dtype=bool)
        delta = None
        for _ in range(4):
            Jf = J[:, free]
            gram = Jf @ Jf.T + 1e-13 * np.eye(4)
            try:
                y = np.linalg.solve(gram, -c)
            except np.linalg.LinAlgError:
                return None
            delta = np.zeros_like(x)
            delta[free] = Jf.T @ y
            stepped = np.clip(x + delta, lb, ub)
            clipped = stepped != x + delta
            if not clipped.any():
                break
            free &= ~clipped
            if not free.any():
                return None
        t = 1.0
        improved = False
        for _ in range(10):
            xt = np.clip(x + t * delta, lb, ub)
            ct = _constraints_only(xt, n, perimeter)
            if np.max(np.abs(ct)) <= norm * (1.0 - 0.2 * t):
                x = xt
                improved = True
                break
            t *= 0.5
        if not improved:
            return None
    return None


def _objective(x, n):
    kap, lon = x[:n], x[n:]
    return float(kap @ lon)


def _grad(x, n):
    kap, lon = x[:n], x[n:]
    return np.concatenate([lon, kap])


def _reduced_gradient(x, g, J, lb, ub, passes=4):
    """Project the gradient onto the constraint tangent space and the
    inactive box; returns (direction, kkt_residual)."""
    m = x.size
    free = np.ones(m, dtype=bool)
    r = g.copy()
    for _ in range(passes):
        Jf = J[:, free]
        if Jf.shape[1] == 0:
            return np.zeros(m), 0.0
        nu, *_ = np.linalg.lstsq(Jf.T, g[free], rcond=None)
        r = g - J.T @ nu
        # band wide enough to absorb restoration drift off the bounds
        at_lo = (x <= lb + 1e-9) & (r > 0.0)
        at_hi = (x >= ub - 1e-9) & (r < 0.0)
        blocked = at_lo | at_hi
        new_free = ~blocked
        if np.array_equal(new_free, free):
            break
        free = new_free
    r = np.where(free, r, 0.0)
    kkt = float(np.max(np.abs(r))) if free.any() else 0.0
    return r, kkt


def _ball_start(problem: ShapeProblem, rng) -> np.ndarray:
    """Jittered round configuration matching the target perimeter."""
    n = problem.n_arcs
    r = math.asinh(problem.perimeter / (2.0 * math.pi))
    k_ball = 1.0 / math.tanh(r)
    k_ball = min(max(k_ball, 1.0 / problem.lam), problem.lam)
    kap = np.full(n, k_ball) + 1e-3 * rng.standard_normal(n)
    kap = np.clip(kap, 1.0 / problem.lam, problem.lam)
    lon = np.full(n, problem.perimeter / n)
    return np.concatenate([kap, lon])


def _random_start(problem: ShapeProblem, rng) -> np.ndarray:
    """Random draw with total turning nudged above 2 pi so it can close."""
    n = problem.n_arcs
    kap = rng.uniform(1.0 / problem.lam, problem.lam, size=n)
    lon = rng.uniform(0.3, 1.7, size=n)
    lon *= problem.perimeter / lon.sum()
    target = 2.0 * math.pi * (1.0 + rng.uniform(0.1, 0.6))
    kap = np.clip(kap * (target / float(kap @ lon)),
                  1.0 / problem.lam, problem.lam)
    return np.concatenate([kap, lon])


def _polish(x, n, problem, lb, ub):
    """Clean up a near bang-bang iterate.

    Vestigial arcs (tiny length, often with interior curvature) keep the
    projected gradient from reaching stationarity; zero them out, snap
    near-bound curvatures exactly onto the box, and restore.  Returns
    None when the cleaned point cannot be restored.
    """
    xp = x.copy()
    kap, lon = xp[:n], xp[n:]
    tiny = lon < 0.05 * problem.perimeter / n
    lon[tiny] = 0.0
    mid = 0.5 * (lb[:n] + ub[:n])
    kap[tiny] = np.where(kap[tiny] < mid[tiny], lb[:n][tiny], ub[:n][tiny])
    for bnd in (lb[:n], ub[:n]):
        near = np.abs(kap - bnd) < 1e-4
        kap[near] = bnd[near]
    return _restore(xp, n, problem.perimeter, lb, ub)


def _pg_loop(x, n, problem, lb, ub, max_iters, kkt_tol, step0=0.1):
    """Projected reduced-gradient descent with restoration per trial."""
    step = step0
    kkt = math.inf
    it = 0
    for it in range(1, max_iters + 1):
        g = _grad(x, n)
        c, J, _ = _full_constraints(x, n, problem.perimeter)
        r, kkt = _reduced_gradient(x, g, J, lb, ub)
        if kkt < kkt_tol:
            break
        f0 = _objective(x, n)
        rn2 = float(r @ r)
        accepted = False
        t = step
        for _ in range(16):
            trial = np.clip(x - t * r, lb, ub)
            trial = _restore(trial, n, problem.perimeter, lb, ub)
            if trial is not None and \
                    _objective(trial, n) <= f0 - 1e-4 * t * rn2:
                x = trial
                accepted = True
                break
            t *= 0.5
        if not accepted:
            break
        step = min(max(t * 2.0, 1e-6), 10.0)
    return x, kkt, it


def solve(problem: ShapeProblem, seed: int = 0, n_starts: int = 8,
          max_iters: int = 600, kkt_tol: float = KKT_TOL):
    """Run the optimizer from several starts; candidates sorted by value.

    Each start is restored onto the closure manifold, then follows
    projected negative reduced gradients with backtracking, restoring
    after every step.  A candidate is converged when the projected
    gradient is below kkt_tol with the constraints at restoration
    accuracy.
    """
    n = problem.n_arcs
    # length <= perimeter is implied by the sum constraint; making it
    # part of the box keeps restoration trials from overflowing cosh
    lb = np.concatenate([np.full(n, 1.0 / problem.lam), np.zeros(n)])
    ub = np.concatenate([np.full(n, problem.lam),
                         np.full(n, problem.perimeter)])
    rng = np.random.default_rng(seed)
    out = []
    for idx in range(n_starts):
        if idx == 0:
            x0 = _ball_start(problem, rng)
            x = _restore(x0, n, problem.perimeter, lb, ub)
        else:
            x = None
            for _ in range(5):  # redraw until one restores
                x0 = _random_start(problem, rng)
                x = _restore(x0, n, problem.perimeter, lb, ub)
                if x is not None:
                    break
        if x is None:
            out.append(Candidate(
                kappas=tuple(x0[:n]), lengths=tuple(x0[n:]),
                objective=math.inf, closure_residual=math.inf,
                kkt_residual=math.inf, converged=False, n_iters=0))
            continue
        x, kkt, it = _pg_loop(x, n, problem, lb, ub, max_iters, kkt_tol)
        for _ in range(2):
            if kkt < kkt_tol:
                break
            xp = _polish(x, n, problem, lb, ub)
            if xp is None:
                break
            xp, kkt_p, it_p = _pg_loop(xp, n, problem, lb, ub, 100, kkt_tol)
            it += it_p
            f_old, f_new = _objective(x, n), _objective(xp, n)
            # a converged vertex is worth a sliver of objective
            if (kkt_p < kkt and f_new <= f_old + 5e-4) or f_new < f_old:
                x, kkt = xp, kkt_p
            else:
                break
        c, _, _ = _full_constraints(x, n, problem.perimeter)
        spline_res = math.inf
        try:
            cand_arcs = [Arc(k, l) for k, l in
                         zip(x[:n], x[n:]) if l > 1e-12]
            spline_res = ArcSpline(ORIGIN_FRAME, tuple(cand_arcs),
                                   closure_tol=math.inf).closure_residual()
        except (ValueError, GeometryError):
            pass
        out.append(Candidate(
            kappas=tuple(x[:n]), lengths=tuple(x[n:]),
            objective=_objective(x, n),
            closure_residual=spline_res,
            kkt_residual=kkt,
            converged=bool(kkt < kkt_tol and np.max(np.abs(c)) < 1e-9),
            n_iters=it))
    out.sort(key=lambda cand: cand.objective)
    return out


# ---------------------------------------------------------------------------
# random thick bodies

def random_thick_body(lam: float, n_arcs: int, seed: int) -> Body:
    """Random simple closed body with curvature inside [1/lam, lam].

    Draws curvatures and lengths, then closes the chain by Newton on
    the last three degrees of freedom; draws the tail Newton cannot
    close are handed to the all-variable restoration used by the
    optimizer before being redrawn.  Draws that close on the reversed
    branch or self-intersect are redrawn; deterministic per seed.
    """
    if lam <= 1.0:
        raise ValueError("thickness parameter must exceed 1")
    if n_arcs < 4:
        raise ValueError("need at least 4 arcs")
    rng = np.random.default_rng(seed)
    lo, hi = 1.0 / lam, lam
    n = n_arcs
    lb = np.concatenate([np.full(n, lo), np.zeros(n)])
    for _ in range(100):
        kap = rng.uniform(lo, hi, size=n)
        lon = rng.uniform(0.5, 1.5, size=n)
        # aim the total turning at a closed convex range above 2 pi
        target = 2.0 * math.pi * (1.0 + rng.uniform(0.1, 0.8))
        lon *= target / (kap @ lon)
        x = _close_tail(kap, lon, lo, hi)
        if x is None:
            # tail cannot reach closure for this head; let every
            # variable share the correction instead of discarding
            perim = float(lon.sum())
            ub = np.concatenate([np.full(n, hi), np.full(n, perim)])
            full = _restore(np.concatenate([kap, lon]), n, perim, lb, ub)
            if full is None:
                continue
            x = (full[:n], full[n:])
        kap, lon = x
        if np.any(lon <= 1e-6):
            continue
        try:
            spline = ArcSpline(
                ORIGIN_FRAME,
                tuple(Arc(k, l) for k, l in zip(kap, lon)),
                closure_tol=1e-8)
        except (ValueError, GeometryError):
            continue
        if not spline.is_simple():
            continue
        return Body(boundary=spline, convex=True, thick_for=lam,
                    meta={"kind": "random_thick", "lambda": lam,
                          "seed": seed})
    raise GeometryError(
        f"no simple thick body found for lam={lam}, n={n_arcs}, seed={seed}")


def _close_tail(kap, lon, lo, hi, max_iter=25):
    """Newton on (lon[-2], kap[-1], lon[-1]) to zero the closure triple."""
    n = kap.size
    kap = kap.copy()
    lon = lon.copy()
    for _ in range(max_iter):
        res, J, E = closure_jacobian(kap, lon)
        norm = np.max(np.abs(res))
        if norm <= RESTORE_TOL:
            return (kap, lon) if E[1, 1] > 0.0 else None
        if not np.isfinite(norm) or norm > 1e6:
            return None
        cols = np.column_stack([J[:, n + (n - 2)], J[:, n - 1], J[:, n + (n - 1)]])
        try:
            delta = np.linalg.solve(cols, -res)
        except np.linalg.LinAlgError:
            return None
        if not np.all(np.isfinite(delta)):
            return None
        # damped, box-projected update
        scale = min(1.0, 2.0 / (1.0 + np.max(np.abs(delta))))
        lon[n - 2] = max(lon[n - 2] + scale * delta[0], 1e-9)
        kap[n - 1] = min(max(kap[n - 1] + scale * delta[1], lo), hi)
        lon[n - 1] = max(lon[n - 1] + scale * delta[2], 1e-9)
    return None
