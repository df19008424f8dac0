"""Barrier calculus for the cones used by the interior-point solver.

The cone of a canonical program is R+^l x (K_exp)^e with

    K_exp = cl{(u, v, w) : v > 0, v exp(u/v) <= w},

carrying the 3-logarithmically-homogeneous barrier

    F(u, v, w) = -log(v log(w/v) - u) - log v - log w.

All triple computations are vectorized over an (e, 3) array.
"""

from __future__ import annotations

import math

import numpy as np

# Solution of grad F(s) = -s: the point where the cone's primal and dual
# central initializations coincide (s0 = z0, s0' z0 = 3).
EXP_CENTRAL_POINT = (-0.82783839906567858, 0.80510200158479539, 1.290927709856958)


def exp_interior(S, margin=0.0):
    """Boolean mask of triples strictly inside K_exp (psi, v, w > margin)."""
    S = np.atleast_2d(S)
    u, v, w = S[:, 0], S[:, 1], S[:, 2]
    ok = (v > margin) & (w > margin)
    psi = np.full_like(u, -1.0)
    good = ok
    with np.errstate(divide="ignore", invalid="ignore"):
        psi_vals = v * np.log(w / v) - u
    psi = np.where(good, psi_vals, -1.0)
    return ok & (psi > margin)


def exp_grad_hess(S, want_hess=True, floor=True):
    """Barrier gradient (e,3) and Hessian (e,3,3) at interior triples.

    With floor=True a relative diagonal shift keeps the 3x3 solves alive
    when one triple sits many orders of magnitude closer to the boundary
    than the others; exact Hessians (floor=False) are for step acceptance,
    where underestimating curvature would be unsafe.
    """
    S = np.atleast_2d(S)
    u, v, w = S[:, 0], S[:, 1], S[:, 2]
    L = np.log(w / v)
    psi = np.maximum(v * L - u, 1e-300)
    grad = np.empty_like(S)
    grad[:, 0] = 1.0 / psi
    grad[:, 1] = -(L - 1.0) / psi - 1.0 / v
    grad[:, 2] = -v / (psi * w) - 1.0 / w
    if not want_hess:
        return grad, None
    e = S.shape[0]
    gp = np.empty((e, 3))
    gp[:, 0] = -1.0
    gp[:, 1] = L - 1.0
    gp[:, 2] = v / w
    H = gp[:, :, None] * gp[:, None, :] / (psi**2)[:, None, None]
    inv_psi = 1.0 / psi
    H[:, 1, 1] += inv_psi / v + 1.0 / v**2
    H[:, 2, 2] += inv_psi * v / w**2 + 1.0 / w**2
    H[:, 1, 2] -= inv_psi / w
    H[:, 2, 1] -= inv_psi / w
    if floor:
        scale = np.abs(H).max(axis=(1, 2))
        H += (1e-14 * scale)[:, None, None] * np.eye(3)
    return grad, H


def exp_dual_interior(Z, margin=0.0):
    """Strict interior of the dual cone cl{(u,v,w): u < 0, -u exp(v/u) <= e w}."""
    Z = np.atleast_2d(Z)
    u, v, w = Z[:, 0], Z[:, 1], Z[:, 2]
    ok = (u < -margin) & (w > margin)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        gap = np.log(w) + 1.0 - np.log(-np.where(ok, u, -1.0)) - v / np.where(ok, u, -1.0)
    return ok & (gap > margin)


def exp_distance(u, v, w):
    """Cheap distance-to-cone estimate for one triple (for residual reports).

    Inside the cone this is 0.  Near the smooth part of the boundary it is
    the first-order estimate max(0, -psi)/|grad psi|; otherwise the Euclidean
    distance to the nearest face is approximated componentwise.
    """
    if v > 0:
        if w > 0:
            L = math.log(w / v)
            psi = v * L - u
            if psi >= 0:
                return 0.0
            gnorm = math.sqrt(1.0 + (L - 1.0) ** 2 + (v / w) ** 2)
            return -psi / gnorm
        # v > 0 but w <= 0: w is short of v exp(u/v) > 0
        surplus = v * math.exp(min(u / v, 700.0))
        return math.hypot(surplus - w if surplus - w > 0 else 0.0, 0.0)
    # v <= 0 face: project onto {u <= 0, v = 0, w >= 0}
    return math.sqrt(max(u, 0.0) ** 2 + v * v + max(-w, 0.0) ** 2)


def cone_interior(s, l, margin=0.0):
    """Interior test for the product cone: s[:l] > margin and all triples."""
    if l and not np.all(s[:l] > margin):
        return False
    if len(s) > l:
        return bool(np.all(exp_interior(s[l:].reshape(-1, 3), margin)))
    return True


def dual_interior(z, l, margin=0.0):
    """Interior test for the dual cone R+^l x (K_exp^*)^e.

    A small negative margin admits points a hair outside the boundary;
    infeasibility certificates ride the boundary and would otherwise force
    vanishing steps.  The nonnegative part compares against a relative
    scale, the exponential margin is already logarithmic.
    """
    if l:
        slack = margin if margin >= 0 else margin * max(1.0, float(np.max(np.abs(z))))
        if not np.all(z[:l] > slack):
            return False
    if len(z) > l:
        return bool(np.all(exp_dual_interior(z[l:].reshape(-1, 3), margin)))
    return True


def block_gaps(s, z, l, e):
    """Per-block complementarity gaps s_i' z_i normalized by barrier degree."""
    gaps = np.empty(l + e)
    gaps[:l] = s[:l] * z[:l]
    if e:
        gaps[l:] = np.sum(s[l:].reshape(e, 3) * z[l:].reshape(e, 3), axis=1) / 3.0
    return gaps


def initial_point(l, e):
    """Central initial slack: ones on R+, the exp central point per triple."""
    s = np.empty(l + 3 * e)
    s[:l] = 1.0
    if e:
        s[l:] = np.tile(EXP_CENTRAL_POINT, e)
    return s


def barrier_grad(s, l, e):
    """Gradient of the product barrier at an interior point."""
    g = np.empty_like(s)
    g[:l] = -1.0 / s[:l]
    if e:
        grad, _ = exp_grad_hess(s[l:].reshape(e, 3), want_hess=False)
        g[l:] = grad.ravel()
    return g


def mul_hess_inv(s, l, e, rhs):
    """H(s)^-1 rhs for the product barrier (rhs may be (q,) or (q, k))."""
    single = rhs.ndim == 1
    R = rhs[:, None] if single else rhs
    out = np.empty_like(R)
    out[:l] = (s[:l] ** 2)[:, None] * R[:l]
    if e:
        _, H = exp_grad_hess(s[l:].reshape(e, 3))
        blocks = R[l:].reshape(e, 3, -1)
        out[l:] = np.linalg.solve(H, blocks).reshape(3 * e, -1)
    return out[:, 0] if single else out


def hess_inv_blocks(s, l, e):
    """Dense inverse-Hessian blocks: (diag part for R+, (e,3,3) for triples)."""
    d = s[:l] ** 2
    if e:
        _, H = exp_grad_hess(s[l:].reshape(e, 3))
        Hinv = np.linalg.inv(H)
    else:
        Hinv = np.zeros((0, 3, 3))
    return d, Hinv


def neighborhood_norm_sq(s, z, mu, l, e):
    """||z + mu grad F(s)||^2 in the H(s)^-1 norm (cone part only)."""
    g = barrier_grad(s, l, e)
    zeta = z + mu * g
    return float(zeta @ mul_hess_inv(s, l, e, zeta))


def neighborhood_block_max(s, z, mu, l, e):
    """max over cone blocks of ||z_i + mu grad F_i(s_i)||^2_{H_i(s_i)^-1}.

    The per-block measure keeps step sizes independent of the number of
    cone blocks; a value < mu^2 still certifies z_i in the dual interior
    block by block.
    """
    g = barrier_grad(s, l, e)
    zeta = z + mu * g
    worst = 0.0
    if l:
        worst = float(np.max((s[:l] * zeta[:l]) ** 2))
    if e:
        _, H = exp_grad_hess(s[l:].reshape(e, 3))
        zb = zeta[l:].reshape(e, 3)
        sol = np.linalg.solve(H, zb[:, :, None])[:, :, 0]
        quad = np.einsum("ei,ei->e", zb, sol)
        if not np.all(np.isfinite(quad)) or np.any(quad < 0):
            return float("inf")
        worst = max(worst, float(np.max(quad)))
    return worst
