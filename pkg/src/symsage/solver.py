"""Interior-point solver for the canonical exponential-cone programs.

The solver embeds  min c'x  s.t.  Ax = b, Gx + s = h, s in K  in the
homogeneous self-dual model

    A'y + G'z + c tau = 0
    -A x        + b tau = 0
    -G x        + h tau = s
    -c'x - b'y - h'z    = kappa,      s in K, z in K*, tau, kappa >= 0,

and follows the central path  z = -mu grad F(s), tau kappa = mu  with a
predictor-corrector scheme that needs only the primal barrier F (product of
-log for R+ and the 3-self-concordant exponential-cone barrier).  tau > 0 at
convergence recovers an optimal primal-dual pair; kappa > 0 yields a Farkas
certificate (primal infeasible) or an improving ray (unbounded).

Feasibility and gap checks run on the original unscaled data every
iteration; Ruiz equilibration (cone-blockwise uniform) is applied
internally only.
"""

from __future__ import annotations

import enum
import math
import time
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla
from scipy.linalg import lu_factor, lu_solve

from . import cones
from .programs import CanonicalProgram, ConicProgram, canonicalize


class SolveStatus(enum.Enum):
    OPTIMAL = "Optimal"
    INFEASIBLE = "Infeasible"
    UNBOUNDED = "Unbounded"
    ITERATION_LIMIT = "IterationLimit"
    NUMERICAL_TROUBLE = "NumericalTrouble"

    def __str__(self):
        return self.value


@dataclass
class SolverConfig:
    feasibility_tol: float = 1e-8
    gap_tol: float = 1e-8
    max_iterations: int = 100_000
    verbose: bool = False
    # internals of the predictor-corrector; the defaults are deliberately
    # conservative and deterministic.  The predictor is accepted inside a
    # wide per-block gap-ratio band with explicit primal and dual cone
    # interiority; correctors then pull the iterate back into the tight
    # Hessian-norm neighborhood.
    gap_ratio: float = 0.01
    boundary_fraction: float = 0.99
    eta_corrector: float = 0.35
    eta_accept: float = 0.8
    dual_slack: float = 1e-9
    max_correctors: int = 6
    min_step: float = 1e-9
    regularization: float = 1e-11
    dense_cutoff: int = 600
    equilibrate_passes: int = 3


@dataclass
class ResidualReport:
    """Worst-case violations of a structured program at a given point."""

    equality: float = 0.0
    inequality: float = 0.0
    entropy: float = 0.0
    nonneg: float = 0.0
    gap: float | None = None

    @property
    def max_violation(self):
        return max(self.equality, self.inequality, self.entropy, self.nonneg)


@dataclass
class SolveResult:
    status: SolveStatus
    objective: float | None
    x: np.ndarray
    num_program_vars: int
    iterations: int
    solve_time: float
    residuals: ResidualReport
    primal_residual: float = math.inf
    dual_residual: float = math.inf
    gap: float = math.inf
    certificate_ray: np.ndarray | None = None
    y: np.ndarray | None = None
    z: np.ndarray | None = None
    s: np.ndarray | None = None
    message: str = ""

    @property
    def x_program(self):
        return self.x[: self.num_program_vars]


def entropy_value(pairs, x):
    """sum w * nu * log(nu / (e c)) with 0 log 0 = 0 and nu>0, c=0 -> +inf."""
    total = 0.0
    for nu_idx, c_idx, w in pairs:
        nu = x[nu_idx]
        c = x[c_idx]
        if nu <= 0.0:
            continue
        if c <= 0.0:
            return math.inf
        total += w * nu * (math.log(nu / c) - 1.0)
    return total


def residuals(program, point, gap=None):
    """Evaluate a structured ConicProgram at a point of its variables."""
    x = np.asarray(point, dtype=float)
    if x.shape != (program.num_variables,):
        raise ValueError(
            "point has length %d, expected %d" % (x.size, program.num_variables)
        )
    eq = 0.0
    for coeffs, rhs in program.eq_rows:
        eq = max(eq, abs(sum(v * x[i] for i, v in coeffs.items()) - rhs))
    ineq = 0.0
    for coeffs, rhs in program.ineq_rows:
        ineq = max(ineq, sum(v * x[i] for i, v in coeffs.items()) - rhs)
    ent = 0.0
    for block in program.blocks:
        lhs = entropy_value(block.terms, x)
        lhs += sum(v * x[i] for i, v in block.lhs_linear.items())
        rhs = block.rhs_constant + sum(v * x[i] for i, v in block.rhs_linear.items())
        ent = max(ent, lhs - rhs)
    nn = 0.0
    for i, flag in enumerate(program.nonneg):
        if flag:
            nn = max(nn, -x[i])
    return ResidualReport(
        equality=eq, inequality=max(0.0, ineq), entropy=max(0.0, ent),
        nonneg=max(0.0, nn), gap=gap,
    )


# -- equilibration -----------------------------------------------------------


@dataclass
class _Scaling:
    col: np.ndarray
    d_eq: np.ndarray
    d_cone: np.ndarray
    sigma: float
    rho: float


def _equilibrate(A, b, G, h, c, l, e, passes):
    p, n = A.shape
    q = G.shape[0]
    col = np.ones(n)
    d_eq = np.ones(p)
    d_cone = np.ones(q)
    A = A.tocsr().copy()
    G = G.tocsr().copy()
    for _ in range(passes):
        stacked = sp.vstack([A, G], format="csr") if p else G
        cmax = np.zeros(n)
        sq = stacked.copy()
        sq.data = np.abs(sq.data)
        cm = sq.max(axis=0).toarray().ravel() if sq.nnz else np.zeros(n)
        cmax = np.maximum(cm, 1e-12)
        cscale = 1.0 / np.sqrt(cmax)
        cscale[cmax <= 1e-12] = 1.0
        Dc = sp.diags(cscale)
        A = (A @ Dc).tocsr()
        G = (G @ Dc).tocsr()
        col *= cscale

        def row_max(M):
            Mm = M.copy()
            Mm.data = np.abs(Mm.data)
            return Mm.max(axis=1).toarray().ravel() if Mm.nnz else np.zeros(M.shape[0])

        if p:
            rmax = np.maximum(row_max(A), 1e-12)
            rscale = 1.0 / np.sqrt(rmax)
            rscale[rmax <= 1e-12] = 1.0
            A = (sp.diags(rscale) @ A).tocsr()
            d_eq *= rscale
            b = b * rscale
        if q:
            rmax = np.maximum(row_max(G), 1e-12)
            rscale = 1.0 / np.sqrt(rmax)
            rscale[rmax <= 1e-12] = 1.0
            if e:
                # one uniform scale per exponential triple keeps s in the cone
                tri = rscale[l:].reshape(e, 3)
                geo = np.exp(np.mean(np.log(tri), axis=1))
                rscale[l:] = np.repeat(geo, 3)
            G = (sp.diags(rscale) @ G).tocsr()
            d_cone *= rscale
            h = h * rscale
    c = c * col
    sigma = max(1.0, np.max(np.abs(c)) if c.size else 1.0)
    rho = max(
        1.0,
        np.max(np.abs(b)) if b.size else 0.0,
        np.max(np.abs(h)) if h.size else 0.0,
    )
    return A, b / rho, G, h / rho, c / sigma, _Scaling(col, d_eq, d_cone, sigma, rho)


# -- the homogeneous embedding ------------------------------------------------


class _HSDE:
    def __init__(self, can: CanonicalProgram, cfg: SolverConfig):
        self.cfg = cfg
        self.l = can.nonneg_rows
        self.e = can.exp_triples
        self.orig = can
        (self.A, self.b, self.G, self.h, self.c, self.scaling) = _equilibrate(
            can.A, can.b.copy(), can.G, can.h.copy(), can.c.copy(),
            self.l, self.e, cfg.equilibrate_passes,
        )
        self.n = can.A.shape[1]
        self.p = can.A.shape[0]
        self.q = can.G.shape[0]
        self.nu_bar = self.l + 3 * self.e
        self.AT = self.A.T.tocsr()
        self.GT = self.G.T.tocsr()

    # residuals of the embedding at the current (scaled) state
    def hsde_residuals(self, x, y, z, s, tau, kappa):
        rx = self.AT @ y + self.GT @ z + self.c * tau
        ry = -self.A @ x + self.b * tau
        rz = -self.G @ x + self.h * tau - s
        rt = -float(self.c @ x + self.b @ y + self.h @ z) - kappa
        return rx, ry, rz, rt

    def factor(self, s, mu):
        reg = self.cfg.regularization
        n, p, q, l, e = self.n, self.p, self.q, self.l, self.e
        d, Hinv = cones.hess_inv_blocks(s, l, e)
        rows = [np.arange(l)]
        cols = [np.arange(l)]
        vals = [d / mu + reg]
        if e:
            base = l + 3 * np.arange(e)
            for i in range(3):
                for j in range(3):
                    rows.append(base + i)
                    cols.append(base + j)
                    v = Hinv[:, i, j] / mu
                    if i == j:
                        v = v + reg
                    vals.append(v)
        D = sp.coo_matrix(
            (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
            shape=(q, q),
        )
        eye_n = sp.identity(n) * reg
        eye_p = sp.identity(p) * reg if p else None
        blocks = [
            [eye_n, self.AT if p else None, self.GT],
            [-self.A if p else None, eye_p, None],
            [-self.G, None, D],
        ]
        if p == 0:
            blocks = [[eye_n, self.GT], [-self.G, D]]
        M = sp.bmat(blocks, format="csc")
        if M.shape[0] <= self.cfg.dense_cutoff:
            lu = lu_factor(M.toarray())
            return ("dense", lu, M)
        return ("sparse", spla.splu(M), M)

    def solve_kkt(self, fac, rhs):
        kind, lu, M = fac
        base = lu_solve(lu, rhs) if kind == "dense" else lu.solve(rhs)
        # iterative refinement recovers accuracy lost to the wide dynamic
        # range of the scaling block near convergence
        scale = np.max(np.abs(rhs)) + 1.0
        for _ in range(2):
            r = rhs - M @ base
            if np.max(np.abs(r)) <= 1e-13 * scale:
                break
            base = base + (lu_solve(lu, r) if kind == "dense" else lu.solve(r))
        return base

    def direction(self, fac, state, mu, r_lin, r_cone, r_kappa, r_tau):
        """Solve one Newton system of the embedding.

        r_lin = (r1, r2, r3) targets for the three linear residual rows,
        r_cone the target of  mu H ds + dz,  r_kappa of  kappa dtau + tau
        dkappa,  r_tau of the tau row.
        """
        x, y, z, s, tau, kappa = state
        n, p, q = self.n, self.p, self.q
        r1, r2, r3 = r_lin
        hinv_rc = cones.mul_hess_inv(s, self.l, self.e, r_cone)
        rhs = np.concatenate([r1, r2, r3 + hinv_rc / mu])
        d = np.concatenate([self.c, self.b, self.h])
        if p == 0:
            rhs = np.concatenate([r1, r3 + hinv_rc / mu])
            d = np.concatenate([self.c, self.h])
        sol = self.solve_kkt(fac, np.column_stack([rhs, d]))
        v_r, v_d = sol[:, 0], sol[:, 1]
        denom = kappa / tau + float(d @ v_d)
        dtau = (r_tau + r_kappa / tau + float(d @ v_r)) / denom
        v = v_r - dtau * v_d
        dx = v[:n]
        if p:
            dy = v[n : n + p]
            dz = v[n + p :]
        else:
            dy = np.zeros(0)
            dz = v[n:]
        ds = -self.G @ dx + self.h * dtau - r3
        dkappa = (r_kappa - kappa * dtau) / tau
        return dx, dy, dz, ds, dtau, dkappa

    def neighborhood(self, z, s, tau, kappa, mu):
        # near-boundary trial points can overflow the Hessian solve; report
        # them as far outside the neighborhood instead of raising
        try:
            with np.errstate(over="raise", invalid="raise", divide="raise"):
                nsq = cones.neighborhood_block_max(s, z, mu, self.l, self.e)
        except (np.linalg.LinAlgError, FloatingPointError):
            return math.inf
        nsq = max(nsq, (tau * kappa - mu) ** 2)
        if not math.isfinite(nsq):
            return math.inf
        return math.sqrt(max(nsq, 0.0)) / mu


def _max_boundary_step(vals, dirs):
    """Largest alpha with vals + alpha dirs > 0 (vals > 0 componentwise)."""
    mask = dirs < 0
    if not np.any(mask):
        return math.inf
    return float(np.min(-vals[mask] / dirs[mask]))


def solve(program, config=None):
    """Solve a structured ConicProgram or a CanonicalProgram.

    The reported objective is in the program's maximize sense.  Status
    Optimal guarantees that the structured residual report and the canonical
    feasibility/gap measures are all within the configured tolerances.
    """
    cfg = config or SolverConfig()
    t0 = time.perf_counter()
    if isinstance(program, ConicProgram):
        structured = program
        can = canonicalize(program)
    else:
        structured = getattr(program, "source", None)
        can = program

    result = _solve_canonical(can, structured, cfg)
    result.solve_time = time.perf_counter() - t0
    return result


def _trivial_result(can, structured, status, objective, x, message, cfg,
                    ray=None, iterations=0):
    rep = (
        residuals(structured, x[: structured.num_variables])
        if structured is not None and status == SolveStatus.OPTIMAL
        else ResidualReport()
    )
    return SolveResult(
        status=status,
        objective=objective,
        x=x,
        num_program_vars=can.num_program_vars,
        iterations=iterations,
        solve_time=0.0,
        residuals=rep,
        primal_residual=0.0 if status == SolveStatus.OPTIMAL else math.inf,
        dual_residual=0.0 if status == SolveStatus.OPTIMAL else math.inf,
        gap=0.0 if status == SolveStatus.OPTIMAL else math.inf,
        certificate_ray=ray,
        message=message,
    )


def _solve_canonical(can, structured, cfg):
    n = can.A.shape[1]
    p, q = can.A.shape[0], can.G.shape[0]
    feastol = cfg.feasibility_tol

    if n == 0:
        bad = (np.max(np.abs(can.b)) if p else 0.0) > feastol or (
            np.min(can.h) if q else 0.0
        ) < -feastol
        status = SolveStatus.INFEASIBLE if bad else SolveStatus.OPTIMAL
        return _trivial_result(
            can, structured, status, 0.0 if not bad else None, np.zeros(0),
            "empty program", cfg,
        )
    if q == 0:
        return _solve_equality_lp(can, structured, cfg)
    return _ipm(can, structured, cfg)


def _solve_equality_lp(can, structured, cfg):
    # no cone rows at all: either an equality-constrained LP or unconstrained
    A = can.A.toarray() if can.A.shape[0] else np.zeros((0, can.A.shape[1]))
    c = can.c
    feastol = cfg.feasibility_tol
    if A.shape[0]:
        x0, *_ = np.linalg.lstsq(A, can.b, rcond=None)
        if np.max(np.abs(A @ x0 - can.b)) > feastol * (1.0 + np.max(np.abs(can.b))):
            return _trivial_result(
                can, structured, SolveStatus.INFEASIBLE, None,
                np.zeros(can.A.shape[1]), "inconsistent equalities", cfg,
            )
        # minimize over the affine set: unbounded unless c lies in row space
        ct, *_ = np.linalg.lstsq(A.T, c, rcond=None)
        resid = c - A.T @ ct
    else:
        x0 = np.zeros(can.A.shape[1])
        resid = c
    if np.max(np.abs(resid)) > feastol * (1.0 + np.max(np.abs(c)) if c.size else 1.0):
        ray = -resid
        return _trivial_result(
            can, structured, SolveStatus.UNBOUNDED, None, x0,
            "objective unbounded on the affine feasible set", cfg, ray=ray,
        )
    return _trivial_result(
        can, structured, SolveStatus.OPTIMAL, -float(c @ x0), x0,
        "equality-constrained linear program", cfg,
    )


def _ipm(can, structured, cfg):
    emb = _HSDE(can, cfg)
    n, p, q, l, e = emb.n, emb.p, emb.q, emb.l, emb.e
    feastol, gaptol = cfg.feasibility_tol, cfg.gap_tol

    x = np.zeros(n)
    y = np.zeros(p)
    s = cones.initial_point(l, e)
    z = -cones.barrier_grad(s, l, e)
    tau = 1.0
    kappa = 1.0

    # unscaled data for the convergence tests
    A0, b0, G0, h0, c0 = can.A, can.b, can.G, can.h, can.c
    norm_b = np.max(np.abs(b0)) if b0.size else 0.0
    norm_h = np.max(np.abs(h0)) if h0.size else 0.0
    norm_c = np.max(np.abs(c0)) if c0.size else 0.0
    sc = emb.scaling

    best = None
    iterations = 0
    message = ""

    def recentre(x, y, z, s, tau, kappa):
        """Corrector sweeps; returns the improved state and its final eta."""
        for _ in range(cfg.max_correctors):
            mu = (float(s @ z) + tau * kappa) / (emb.nu_bar + 1)
            eta = emb.neighborhood(z, s, tau, kappa, mu)
            if eta <= cfg.eta_corrector:
                return (x, y, z, s, tau, kappa), eta
            state = (x, y, z, s, tau, kappa)
            g = cones.barrier_grad(s, l, e)
            try:
                fac = emb.factor(s, mu)
                dx, dy, dz, ds, dtau, dkappa = emb.direction(
                    fac, state, mu,
                    (np.zeros(n), np.zeros(p), np.zeros(q)),
                    -(z + mu * g), mu - tau * kappa, 0.0,
                )
            except (RuntimeError, np.linalg.LinAlgError):
                return (x, y, z, s, tau, kappa), float("inf")
            accepted = False
            for step in (1.0, 0.7, 0.4, 0.2, 0.1, 0.05):
                s_t = s + step * ds
                tau_t = tau + step * dtau
                kappa_t = kappa + step * dkappa
                if tau_t <= 0 or kappa_t <= 0 or not cones.cone_interior(s_t, l):
                    continue
                z_t = z + step * dz
                mu_t = (float(s_t @ z_t) + tau_t * kappa_t) / (emb.nu_bar + 1)
                if mu_t <= 0:
                    continue
                eta_t = emb.neighborhood(z_t, s_t, tau_t, kappa_t, mu_t)
                if eta_t > cfg.eta_accept and not cones.dual_interior(
                    z_t, l, -cfg.dual_slack
                ):
                    continue
                if eta_t < eta:
                    x = x + step * dx
                    y = y + step * dy
                    z, s, tau, kappa = z_t, s_t, tau_t, kappa_t
                    accepted = True
                    break
            if not accepted:
                return (x, y, z, s, tau, kappa), eta
        mu = (float(s @ z) + tau * kappa) / (emb.nu_bar + 1)
        return (x, y, z, s, tau, kappa), emb.neighborhood(z, s, tau, kappa, mu)

    for iterations in range(1, int(cfg.max_iterations) + 1):
        mu = (float(s @ z) + tau * kappa) / (emb.nu_bar + 1)

        # -- unscaled candidates and convergence tests --------------------
        xs = sc.rho * (sc.col * x)
        ss = sc.rho * (s / sc.d_cone)
        ys = sc.sigma * (sc.d_eq * y)
        zs = sc.sigma * (sc.d_cone * z)

        if tau > 1e-12:
            xh, yh, zh, sh = xs / tau, ys / tau, zs / tau, ss / tau
            pres = 0.0
            if p:
                pres = np.max(np.abs(A0 @ xh - b0)) / (1.0 + norm_b)
            prc = np.max(np.abs(G0 @ xh + sh - h0)) / (1.0 + norm_h)
            pres = max(pres, prc)
            dres = np.max(np.abs(A0.T @ yh + G0.T @ zh + c0)) / (1.0 + norm_c)
            pobj = float(c0 @ xh)
            dobj = -float(b0 @ yh) - float(h0 @ zh)
            gap = abs(pobj - dobj) / max(1.0, abs(pobj), abs(dobj))
            if pres <= feastol and dres <= feastol and gap <= gaptol:
                rep = (
                    residuals(structured, xh[: structured.num_variables], gap=gap)
                    if structured is not None
                    else ResidualReport(gap=gap)
                )
                if structured is None or rep.max_violation <= feastol * 10:
                    return SolveResult(
                        status=SolveStatus.OPTIMAL,
                        objective=-pobj,
                        x=xh,
                        num_program_vars=can.num_program_vars,
                        iterations=iterations,
                        solve_time=0.0,
                        residuals=rep,
                        primal_residual=pres,
                        dual_residual=dres,
                        gap=gap,
                        y=yh, z=zh, s=sh,
                    )
            if best is None or pres + dres + gap < best[0]:
                best = (pres + dres + gap, xh.copy(), pres, dres, gap)

        # infeasibility / unboundedness certificates; the tests are ratios,
        # so they stay meaningful as the embedding magnitudes decay
        ip = -(float(b0 @ ys) + float(h0 @ zs))
        if ip > 0:
            res = np.max(np.abs(A0.T @ ys + G0.T @ zs)) * max(1.0, norm_b, norm_h) / ip
            if res <= feastol:
                ray = np.concatenate([ys, zs]) / ip
                return _final(
                    can, structured, SolveStatus.INFEASIBLE, None, np.zeros(n),
                    iterations, "primal infeasibility certificate found", ray,
                )
        du = -float(c0 @ xs)
        if du > 0:
            pr = np.max(np.abs(A0 @ xs)) if p else 0.0
            pr = max(pr, np.max(np.abs(G0 @ xs + ss)))
            if pr * max(1.0, norm_c) / du <= feastol:
                return _final(
                    can, structured, SolveStatus.UNBOUNDED, None, np.zeros(n),
                    iterations, "improving ray found (dual infeasible)", xs / du,
                )

        if mu < 1e-22:
            message = "mu vanished without a certificate"
            break

        # -- predictor ------------------------------------------------------
        rx, ry, rz, rt = emb.hsde_residuals(x, y, z, s, tau, kappa)
        state = (x, y, z, s, tau, kappa)
        try:
            fac = emb.factor(s, mu)
            dx, dy, dz, ds, dtau, dkappa = emb.direction(
                fac, state, mu, (-rx, -ry, -rz), -z, -tau * kappa, -rt
            )
        except (RuntimeError, np.linalg.LinAlgError):
            message = "singular Newton system"
            break

        # tentative step with rollback: accept the largest step the
        # correctors can pull back into the neighborhood afterwards
        direction = (dx, dy, dz, ds, dtau, dkappa)
        accepted = False
        cap = 1.0
        alpha_pred = 0.0
        for _ in range(6):
            alpha = _line_search(emb, state, direction, cfg, cap)
            alpha_pred = alpha
            if alpha <= 1e-6:
                break
            trial = (
                x + alpha * dx, y + alpha * dy, z + alpha * dz,
                s + alpha * ds, tau + alpha * dtau, kappa + alpha * dkappa,
            )
            centred, eta_end = recentre(*trial)
            if eta_end <= cfg.eta_accept:
                x, y, z, s, tau, kappa = centred
                accepted = True
                break
            cap = alpha * 0.25
        if not accepted:
            message = "predictor stalled"
            break

        if cfg.verbose:
            print(
                "iter %4d  mu %9.2e  tau %8.2e  kappa %8.2e  alpha %6.3f"
                % (iterations, mu, tau, kappa, alpha_pred)
            )
    else:
        message = "iteration limit reached"
        return _final(
            can, structured, SolveStatus.ITERATION_LIMIT,
            None, best[1] if best else np.zeros(n), iterations, message, None,
        )

    status = SolveStatus.NUMERICAL_TROUBLE
    return _final(
        can, structured, status, None, best[1] if best else np.zeros(n),
        iterations, message or "no certificate within tolerances", None,
    )


def _final(can, structured, status, objective, x, iterations, message, ray):
    rep = ResidualReport()
    if structured is not None and x.size >= structured.num_variables:
        rep = residuals(structured, x[: structured.num_variables])
    return SolveResult(
        status=status,
        objective=objective,
        x=x,
        num_program_vars=can.num_program_vars,
        iterations=iterations,
        solve_time=0.0,
        residuals=rep,
        certificate_ray=ray,
        message=message,
    )


def _line_search(emb, state, direction, cfg, cap=1.0):
    """Largest step keeping both cones strictly interior and every block's
    complementarity gap within a wide band around the average."""
    x, y, z, s, tau, kappa = state
    dx, dy, dz, ds, dtau, dkappa = direction
    l, e = emb.l, emb.e
    gamma = cfg.gap_ratio

    # closed-form positivity bound on the linear coordinates and tau, kappa
    vals = [np.array([tau, kappa])]
    dirs = [np.array([dtau, dkappa])]
    if l:
        vals.append(s[:l])
        dirs.append(ds[:l])
        vals.append(z[:l])
        dirs.append(dz[:l])
    bound = _max_boundary_step(np.concatenate(vals), np.concatenate(dirs))
    alpha = min(cap, cfg.boundary_fraction * bound)
    while alpha > cfg.min_step:
        s_t = s + alpha * ds
        z_t = z + alpha * dz
        tau_t = tau + alpha * dtau
        kappa_t = kappa + alpha * dkappa
        if tau_t > 0 and kappa_t > 0 and cones.cone_interior(s_t, l):
            mu_t = (float(s_t @ z_t) + tau_t * kappa_t) / (emb.nu_bar + 1)
            if mu_t > 0:
                ok = False
                if cones.dual_interior(z_t, l, -cfg.dual_slack):
                    gaps = cones.block_gaps(s_t, z_t, l, e)
                    lo = gaps.min() if gaps.size else tau_t * kappa_t
                    hi = gaps.max() if gaps.size else tau_t * kappa_t
                    lo = min(lo, tau_t * kappa_t)
                    hi = max(hi, tau_t * kappa_t)
                    ok = lo >= gamma * mu_t and hi <= mu_t / gamma
                if not ok:
                    # a small Dikin radius certifies dual interiority even
                    # when the explicit membership test loses to roundoff
                    eta_t = emb.neighborhood(z_t, s_t, tau_t, kappa_t, mu_t)
                    ok = eta_t <= cfg.eta_accept
                if ok:
                    return alpha
        alpha *= 0.9
    return 0.0
