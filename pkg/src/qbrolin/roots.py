"""All-roots solver for complex polynomials.

Aberth-Ehrlich simultaneous iteration with deterministic initial guesses on a
circle, followed by Newton polish, with multiplicity detection by clustering.
Degrees 1 and 2 use closed forms (they dominate the preimage workloads).
"""

from __future__ import annotations

import numpy as np

from .errors import SolverFailure
from .policy import DEFAULT, NumericPolicy

__all__ = ["all_roots", "cluster_roots", "quadratic_roots_many"]


def _horner(coeffs, z):
    """Evaluate sum coeffs[k] z^k (ascending) at scalar or array z."""
    acc = np.zeros_like(np.asarray(z, dtype=complex))
    for c in coeffs[::-1]:
        acc = acc * z + c
    return acc


def _horner_pair(coeffs, dcoeffs, z):
    return _horner(coeffs, z), _horner(dcoeffs, z)


def all_roots(coeffs, policy: NumericPolicy = DEFAULT):
    """Roots (with repetitions) of sum coeffs[k] z^k, ascending coefficients.

    Returns an ndarray of length deg, sorted by (real, imag). Raises
    SolverFailure when the post-polish residual check fails.
    """
    coeffs = np.asarray(coeffs, dtype=complex)
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs = coeffs[:-1]
    deg = len(coeffs) - 1
    if deg < 1:
        return np.array([], dtype=complex)
    if deg == 1:
        roots = np.array([-coeffs[0] / coeffs[1]])
    elif deg == 2:
        roots = _quadratic(coeffs[0], coeffs[1], coeffs[2])
    else:
        roots = _aberth(coeffs, policy)
        roots = _newton_polish(coeffs, roots)
    # backward-error residual: |p(z)| against sum |c_k| max(1,|z|)^k
    # (the max keeps clustered roots near the origin certifiable)
    bound = _horner(np.abs(coeffs), np.maximum(np.abs(roots), 1.0)).real
    resid = np.abs(_horner(coeffs, roots)) / np.maximum(bound, 1e-300)
    worst = float(np.max(resid)) if len(resid) else 0.0
    if worst > policy.fiber_residual_tol:
        raise SolverFailure(worst)
    order = np.lexsort((roots.imag, roots.real))
    return roots[order]


def _quadratic(c0, c1, c2):
    # numerically stable quadratic formula
    disc = np.sqrt(c1 * c1 - 4.0 * c2 * c0)
    qq = -(c1 + disc) if (c1.conjugate() * disc).real >= 0 else -(c1 - disc)
    qq = qq / 2.0
    if qq == 0:
        # c1 == 0 and c0 == 0: double root at origin
        if c0 == 0:
            return np.array([0.0 + 0j, 0.0 + 0j])
        r = np.sqrt(-c0 / c2)
        return np.array([r, -r])
    return np.array([qq / c2, c0 / qq])


def quadratic_roots_many(c0s, c1, c2):
    """Vectorized stable quadratic roots for many constant terms c0s.

    Solves c2 z^2 + c1 z + c0 = 0 for each c0 in c0s; returns (n, 2) array.
    """
    c0s = np.asarray(c0s, dtype=complex)
    disc = np.sqrt(c1 * c1 - 4.0 * c2 * c0s)
    sign = np.where((np.conj(c1) * disc).real >= 0, 1.0, -1.0)
    qq = -(c1 + sign * disc) / 2.0
    out = np.empty(c0s.shape + (2,), dtype=complex)
    nz = qq != 0
    out[nz, 0] = qq[nz] / c2
    out[nz, 1] = c0s[nz] / qq[nz]
    if np.any(~nz):
        r = np.sqrt(-c0s[~nz] / c2)
        out[~nz, 0] = r
        out[~nz, 1] = -r
    return out


def _aberth(coeffs, policy: NumericPolicy):
    deg = len(coeffs) - 1
    dcoeffs = coeffs[1:] * np.arange(1, deg + 1)
    # Fujiwara root bound, via logs (iterated polynomials have huge
    # mid-range coefficients; the Cauchy bound would overflow the solver)
    with np.errstate(divide="ignore"):
        logc = np.log(np.abs(coeffs[:-1]))
    k = np.arange(deg, 0, -1)
    finite = np.isfinite(logc)
    log_lead = np.log(abs(coeffs[-1]))
    radius = 2.0 * float(np.exp(np.max((logc[finite] - log_lead) / k[finite]))) \
        if np.any(finite) else 1e-12
    radius = max(radius, 1e-12)
    # deterministic start: slightly irrational phase offset breaks symmetry
    angles = 2.0 * np.pi * (np.arange(deg) + 0.25) / deg + 0.5 / deg
    z = radius * np.exp(1j * angles)
    for _ in range(policy.aberth_max_iter):
        p, dp = _horner_pair(coeffs, dcoeffs, z)
        with np.errstate(divide="ignore", invalid="ignore"):
            newton = np.where(dp != 0, p / np.where(dp != 0, dp, 1), 0.0)
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, np.inf)
            repulse = np.sum(1.0 / diff, axis=1)
            denom = 1.0 - newton * repulse
            step = np.where(denom != 0, newton / np.where(denom != 0, denom, 1), newton)
        z = z - step
        if np.max(np.abs(step)) < policy.aberth_tol * (1.0 + np.max(np.abs(z))):
            break
    return z


def _newton_polish(coeffs, roots, iters=3):
    deg = len(coeffs) - 1
    dcoeffs = coeffs[1:] * np.arange(1, deg + 1)
    z = roots.copy()
    for _ in range(iters):
        p, dp = _horner_pair(coeffs, dcoeffs, z)
        ok = (dp != 0) & (np.abs(p) > 0)
        step = np.zeros_like(z)
        step[ok] = p[ok] / dp[ok]
        # do not polish across a cluster: cap the step
        step = np.where(np.abs(step) < 1e-2 * (1 + np.abs(z)), step, 0.0)
        z = z - step
    return z


def cluster_roots(roots, scale, policy: NumericPolicy = DEFAULT):
    """Group near-identical roots; returns list of (center, multiplicity).

    The clustering radius is policy.cluster_tol * scale; centers are cluster
    means. Output is sorted by (real, imag) for deterministic downstream use.
    """
    roots = np.asarray(roots, dtype=complex)
    if len(roots) == 0:
        return []
    tol = policy.cluster_tol * max(scale, 1.0)
    order = np.lexsort((roots.imag, roots.real))
    roots = roots[order]
    used = np.zeros(len(roots), dtype=bool)
    clusters = []
    for i in range(len(roots)):
        if used[i]:
            continue
        members = np.abs(roots - roots[i]) <= tol
        members &= ~used
        used |= members
        pts = roots[members]
        clusters.append((complex(np.mean(pts)), int(len(pts))))
    clusters.sort(key=lambda c: (c[0].real, c[0].imag))
    return clusters
