"""Dynamical statistics over the equilibrium measure.

Sampling realization: the backward random orbit (repeatedly pick a uniformly
random fiber root, multiplicity-weighted) equidistributes toward the slice
equilibrium measure; after burn-in the chain points are treated as mu_I
samples. One chain also encodes forward orbits for free: p(z_{t}) = z_{t-1},
so lagged statistics of the chain are forward-orbit statistics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import stats as _sstats

from .cdyn import is_exceptional, solve_fiber
from .errors import DegenerateSample, SolverFailure
from .policy import DEFAULT, NumericPolicy
from .poly import ComplexPoly, QPolynomial
from .quat import ImaginaryUnit, Quaternion, SlicePoint, UNIT_I, sphere_quadrature
from .roots import quadratic_roots_many

__all__ = [
    "EstimateReport",
    "AxialBox",
    "sample_mu",
    "sample_mu_chains",
    "lyapunov_slice",
    "lyapunov_sphere_direction",
    "transfer_apply",
    "mixing_correlation",
    "fit_log_slope",
    "CltResult",
    "clt_harness",
    "calibrate_ks_null",
    "separated_count",
    "topological_entropy",
    "partition_entropy",
    "interval_partition",
]

_DEFAULT_START = complex(0.41, 0.37)


@dataclass(frozen=True)
class EstimateReport:
    """A named scalar estimate with provenance for CLI output."""

    name: str
    value: float
    stderr: float
    n_samples: int
    params: dict = field(default_factory=dict)

    def to_json(self):
        return {"name": self.name, "value": self.value, "stderr": self.stderr,
                "n_samples": self.n_samples, "params": self.params}


@dataclass(frozen=True)
class AxialBox:
    """Axially symmetric box: S x ([alpha_lo, alpha_hi] x [beta_lo, beta_hi])."""

    alpha_lo: float
    alpha_hi: float
    beta_lo: float
    beta_hi: float

    def contains(self, alpha, beta):
        return ((alpha >= self.alpha_lo) & (alpha <= self.alpha_hi)
                & (beta >= self.beta_lo) & (beta <= self.beta_hi))


def _chain_step(p: ComplexPoly, targets, rng, policy):
    """One backward step for an array of chain heads."""
    d = p.degree
    if d == 2:
        roots = quadratic_roots_many(p.coeffs[0] - targets, p.coeffs[1],
                                     p.coeffs[2])
        pick = rng.integers(0, 2, size=len(targets))
        return roots[np.arange(len(targets)), pick]
    out = np.empty(len(targets), dtype=complex)
    for i, t in enumerate(targets):
        clusters = solve_fiber(p, complex(t), policy)
        flat = [r for r, m in clusters for _ in range(m)]
        out[i] = flat[rng.integers(0, len(flat))]
    return out


def sample_mu(p: ComplexPoly, count: int, seed: int,
              start: complex = _DEFAULT_START, burn_in: int | None = None,
              policy: NumericPolicy = DEFAULT) -> np.ndarray:
    """One backward random orbit: `count` mu_I-distributed points after burn-in.

    Consecutive points satisfy p(z_{t+1}) = z_t exactly (up to the solver).
    Deterministic given (seed, params).
    """
    if p.degree < 2:
        raise ValueError("sampling needs degree >= 2")
    if burn_in is None:
        burn_in = policy.burn_in
    if is_exceptional(p, start, policy=policy):
        raise ValueError(f"start point {start} is exceptional")
    rng = np.random.default_rng(seed)
    z = np.array([start], dtype=complex)
    for _ in range(burn_in):
        z = _chain_step(p, z, rng, policy)
    out = np.empty(count, dtype=complex)
    for t in range(count):
        z = _chain_step(p, z, rng, policy)
        out[t] = z[0]
    return out


def sample_mu_chains(p: ComplexPoly, n_chains: int, seed: int,
                     start: complex = _DEFAULT_START,
                     burn_in: int | None = None,
                     policy: NumericPolicy = DEFAULT) -> np.ndarray:
    """Independent mu_I samples: one backward orbit per chain, one draw each."""
    if burn_in is None:
        burn_in = policy.burn_in
    rng = np.random.default_rng(seed)
    z = np.full(n_chains, start, dtype=complex)
    for _ in range(burn_in):
        z = _chain_step(p, z, rng, policy)
    return z


def lyapunov_slice(p: ComplexPoly, n_samples: int, seed: int,
                   policy: NumericPolicy = DEFAULT) -> EstimateReport:
    """Slice-direction exponent: Birkhoff average of log|p'(z)| over mu_I.

    Samples within tolerance of a critical point are dropped and counted
    (resampled by drawing extra points).
    """
    dp = p.derivative()
    z = sample_mu(p, n_samples, seed, policy=policy)
    vals = np.abs(dp(z))
    good = vals > 1e-12
    dropped = int(np.sum(~good))
    logs = np.log(vals[good])
    value = float(np.mean(logs))
    stderr = float(np.std(logs, ddof=1) / math.sqrt(len(logs)))
    return EstimateReport("lyapunov_slice", value, stderr, len(logs),
                          {"seed": seed, "dropped_critical": dropped})


def lyapunov_sphere_direction(p: QPolynomial, q0: SlicePoint, n: int,
                              eps: float = 1e-6) -> float:
    """Finite-n exponent in the tangent-to-S direction at q0 (beta > 0).

    Perturbs the imaginary unit, iterates both quaternionic orbits, and
    returns (1/n) log(|p^n(q') - p^n(q)| / (|I'-I| beta)). The theorem value
    is 0.
    """
    if not q0.beta > 0:
        raise ValueError("sphere-direction splitting undefined on the real axis")
    unit = q0.unit
    # tangent direction orthogonal to the unit
    ref = (0.0, 0.0, 1.0) if abs(unit.z) < 0.9 else (0.0, 1.0, 0.0)
    tx = unit.y * ref[2] - unit.z * ref[1]
    ty = unit.z * ref[0] - unit.x * ref[2]
    tz = unit.x * ref[1] - unit.y * ref[0]
    unit2 = ImaginaryUnit.from_vector(unit.x + eps * tx, unit.y + eps * ty,
                                      unit.z + eps * tz)
    q = q0.embed()
    q2 = SlicePoint(q0.alpha, q0.beta, unit2).embed()
    for _ in range(n):
        q = p.eval(q)
        q2 = p.eval(q2)
    du = abs(unit2.as_quaternion() - unit.as_quaternion())
    gap = abs(q2 - q)
    if gap == 0.0 or not math.isfinite(gap):
        # both orbits collapsed to a fixed point (or escaped); the
        # splitting is only meaningful on the chaotic set
        raise DegenerateSample("sphere-direction splitting collapsed; "
                               "pick a base point on the Julia set")
    return math.log(gap / (du * q0.beta)) / n


def transfer_apply(p: ComplexPoly, f, z: complex,
                   policy: NumericPolicy = DEFAULT) -> float:
    """(Perron-Frobenius) (1/d) sum_{p(w)=z} f(w) with multiplicity."""
    total = 0.0
    for w, m in solve_fiber(p, z, policy):
        total += m * f(w)
    return total / p.degree


def _slice_values(f, z):
    """Values of a test function on the spheres of slice points z.

    Axial functions evaluate directly; general ones are averaged over a
    level-3 sphere quadrature (axial symmetry of the measures).
    """
    if getattr(f, "axial", None) is not None:
        return np.asarray(f.axial(z.real, np.abs(z.imag)), dtype=float)
    quad = sphere_quadrature(3)
    out = np.empty(len(z))
    for i, zz in enumerate(z):
        alpha, beta = zz.real, abs(zz.imag)
        out[i] = quad.average(
            lambda u: f(Quaternion(alpha, beta * u.x, beta * u.y, beta * u.z)))
    return out


def _level_phi_means(p: ComplexPoly, phi, z, n_max, policy, batch=1024):
    """(L^n phi)(z_t) for n = 0..n_max: fiber-tree averages per sample.

    L is the normalized transfer operator (Lf)(z) = d^-1 sum_{p(w)=z} f(w);
    one depth-n_max preimage tree per sample yields every level at once.
    Degree 2 runs on the vectorized quadratic path; higher degrees solve
    fibers one by one and are only practical for small n_max.
    """
    d = p.degree
    out = np.empty((n_max + 1, len(z)))
    out[0] = _slice_values(phi, z)
    for lo in range(0, len(z), batch):
        w = np.asarray(z[lo:lo + batch])[:, None]
        for n in range(1, n_max + 1):
            if d == 2:
                flat = w.ravel()
                roots = quadratic_roots_many(p.coeffs[0] - flat, p.coeffs[1],
                                             p.coeffs[2])
                w = roots.reshape(w.shape[0], -1)
            else:
                nxt = np.empty((w.shape[0], w.shape[1] * d), dtype=complex)
                for i, row in enumerate(w):
                    col = 0
                    for t in row:
                        for r, m in solve_fiber(p, complex(t), policy):
                            nxt[i, col:col + m] = r
                            col += m
                w = nxt
            vals = _slice_values(phi, w.ravel()).reshape(w.shape)
            out[n, lo:lo + w.shape[0]] = vals.mean(axis=1)
    return out


def mixing_correlation(p: ComplexPoly, phi, psi, n_max: int, samples: int,
                       seed: int, policy: NumericPolicy = DEFAULT):
    """corr(n) = <mu, (psi o p^n) phi> - <mu,phi><mu,psi> for n = 0..n_max.

    With z ~ mu and w a uniform fiber-tree leaf over p^n(w) = z, the pairing
    is E[psi(z) (L^n phi)(z)]; averaging phi over the whole fiber tree
    instead of one random leaf keeps the noise proportional to the decaying
    signal, which a plain lagged-chain covariance cannot do.
    """
    z = sample_mu(p, samples, seed, policy=policy)
    psi_s = _slice_values(psi, z)
    lphi = _level_phi_means(p, phi, z, n_max, policy)
    out = []
    for n in range(n_max + 1):
        corr = float(np.mean(psi_s * lphi[n])
                     - np.mean(psi_s) * np.mean(lphi[n]))
        out.append((n, corr))
    return out


def fit_log_slope(pairs, n_min=1, n_max=None):
    """Least-squares slope of log|value| vs n over [n_min, n_max]."""
    xs, ys = [], []
    for n, v in pairs:
        if n < n_min or (n_max is not None and n > n_max) or v == 0:
            continue
        xs.append(n)
        ys.append(math.log(abs(v)))
    if len(xs) < 2:
        raise ValueError("not enough points for a slope fit")
    slope, _ = np.polyfit(xs, ys, 1)
    return float(slope)


@dataclass(frozen=True)
class CltResult:
    ks_statistic: float
    sigma_hat: float
    degenerate: bool
    n_samples: int


def clt_harness(p: ComplexPoly, phi, n_terms: int, n_samples: int, seed: int,
                policy: NumericPolicy = DEFAULT) -> CltResult:
    """Distribution of S_n/sqrt(n) = n^{-1/2} sum_i phi(p^i z) over mu starts.

    phi is centered internally by its empirical mean over all visited points.
    Returns the KS distance to the zero-mean Gaussian with the fitted sigma.
    A sigma below 1e-6 is reported as degenerate (coboundary candidate), not
    failed.
    """
    starts = sample_mu_chains(p, n_samples, seed, policy=policy)
    z = starts.copy()
    if np.max(np.abs(z.imag)) <= 1e-8:
        # burn-in leaves a residual transverse component that the forward
        # expansion would double each step; a real Julia set is numerically
        # forward-invariant only on the axis itself
        z = z.real + 0j
    vals = np.empty((n_terms, n_samples))
    for i in range(n_terms):
        vals[i] = _slice_values(phi, z)
        z = p(z)
        if np.any(np.abs(z) > 1e6):
            raise SolverFailure(float(np.max(np.abs(z))),
                                "forward orbit escaped; phi support left the Julia set")
    mean = float(np.mean(vals))
    s = np.sum(vals - mean, axis=0) / math.sqrt(n_terms)
    sigma = float(np.std(s, ddof=1))
    if sigma < 1e-6:
        return CltResult(float("nan"), sigma, True, n_samples)
    ks = float(_sstats.kstest(s, "norm", args=(0.0, sigma)).statistic)
    return CltResult(ks, sigma, False, n_samples)


def calibrate_ks_null(n_samples: int, reps: int = 200, seed: int = 0,
                      quantile: float = 0.95) -> float:
    """KS pass bar: the given quantile of the same-size Gaussian null,
    fitted the same way (sigma estimated from the data)."""
    rng = np.random.default_rng(seed)
    ks_vals = np.empty(reps)
    for r in range(reps):
        s = rng.normal(size=n_samples)
        sigma = float(np.std(s, ddof=1))
        mean = float(np.mean(s))
        ks_vals[r] = _sstats.kstest(s - mean, "norm", args=(0.0, sigma)).statistic
    return float(np.quantile(ks_vals, quantile))


def _orbit_matrix(pc: ComplexPoly, z0, units_xyz, n):
    """Quaternion n-orbits as an (N, n, 4) array for Bowen distances.

    For a real-coefficient restriction the slice orbit (alpha_j, beta_j) is
    shared across units: the quaternion iterate of alpha + I beta is
    alpha_j + I beta_j.
    """
    N = len(z0)
    out = np.empty((N, n, 4))
    z = np.asarray(z0, dtype=complex)
    for j in range(n):
        out[:, j, 0] = z.real
        out[:, j, 1] = z.imag * units_xyz[:, 0]
        out[:, j, 2] = z.imag * units_xyz[:, 1]
        out[:, j, 3] = z.imag * units_xyz[:, 2]
        z = pc(z)
    return out


def _candidate_points(pc: ComplexPoly, box: AxialBox, count: int, seed: int,
                      n_units: int, policy: NumericPolicy):
    """Candidate slice points on the measure support, inside the box,
    with units cycling through a deterministic quadrature node set.

    Sampling on the support (backward orbit) instead of a blind raster keeps
    the candidate set where the separation actually happens.
    """
    z = sample_mu(pc, count, seed, policy=policy)
    alpha, beta = z.real, np.abs(z.imag)
    keep = box.contains(alpha, beta)
    z = (alpha + 1j * beta)[keep]
    units = sphere_quadrature(2).units[:n_units]
    uxyz = np.array([[u.x, u.y, u.z] for u in units])
    units_xyz = uxyz[np.arange(len(z)) % len(units)]
    return z, units_xyz


def separated_count(p: QPolynomial, box: AxialBox, n: int, eps: float,
                    grid_density: int = 20000, seed: int = 0,
                    policy: NumericPolicy = DEFAULT,
                    _orbits=None) -> int:
    """Greedy maximal (n, eps)-separated subset size over the candidate set.

    dis_n(q1, q2) = max_{j<n} |p^j(q1) - p^j(q2)|; greedy gives a maximal
    (hence within-factor) separated set, an under-estimator with stable bias
    across n, which is what the entropy slope needs.
    """
    pc = p.restrict_to_slice(UNIT_I, policy)
    if _orbits is None:
        z, units_xyz = _candidate_points(pc, box, grid_density, seed,
                                         n_units=6, policy=policy)
        orbits = _orbit_matrix(pc, z, units_xyz, n)
    else:
        orbits = _orbits[:, :n, :]
    orbits = np.asarray(orbits, dtype=np.float32)
    N = orbits.shape[0]
    first = orbits[:, 0, :]
    alive = np.ones(N, dtype=bool)
    count = 0
    eps2 = np.float32(eps * eps)
    idx = np.arange(N)
    while True:
        live_idx = idx[alive]
        if len(live_idx) == 0:
            break
        i = live_idx[0]
        count += 1
        # dis_n >= distance of the first iterate, so only pairs close at
        # j = 0 need the full max over iterates
        d0 = first[live_idx] - first[i]
        near = live_idx[np.sum(d0 * d0, axis=1) < eps2]
        diff = orbits[near] - orbits[i]
        d2 = np.max(np.sum(diff * diff, axis=2), axis=1)
        alive[near[d2 < eps2]] = False
    return count


def topological_entropy(p: QPolynomial, box: AxialBox, n_max: int,
                        eps_list, grid_density: int = 20000, seed: int = 0,
                        policy: NumericPolicy = DEFAULT) -> EstimateReport:
    """sup over eps of the fitted growth slope of log N(K, n, eps).

    The fit is least squares on the last max(3, n_max//2) points of
    log N vs n, reported with the fit residual as stderr.
    """
    pc = p.restrict_to_slice(UNIT_I, policy)
    z, units_xyz = _candidate_points(pc, box, grid_density, seed,
                                     n_units=6, policy=policy)
    orbits = _orbit_matrix(pc, z, units_xyz, n_max)
    best = None
    for eps in eps_list:
        counts = [(n, separated_count(p, box, n, eps, policy=policy,
                                      _orbits=orbits))
                  for n in range(1, n_max + 1)]
        window = max(3, n_max // 2)
        tail = counts[-window:]
        xs = np.array([n for n, _ in tail], dtype=float)
        ys = np.array([math.log(c) for _, c in tail])
        slope, intercept = np.polyfit(xs, ys, 1)
        resid = float(np.sqrt(np.mean((ys - (slope * xs + intercept)) ** 2)))
        if best is None or slope > best[0]:
            best = (float(slope), resid, eps, counts)
    slope, resid, eps, counts = best
    return EstimateReport("topological_entropy", slope, resid, len(z),
                          {"eps": eps, "n_max": n_max, "seed": seed,
                           "counts": counts})


def interval_partition(lo: float, hi: float, cells: int,
                       beta_hi: float = math.inf):
    """cells equal boxes S x ([a_i, a_{i+1}] x [0, beta_hi])."""
    edges = np.linspace(lo, hi, cells + 1)
    return [AxialBox(edges[i], edges[i + 1], 0.0, beta_hi)
            for i in range(cells)]


def partition_entropy(p: QPolynomial, partition, n_max: int,
                      samples: int | np.ndarray = 100000, seed: int = 0,
                      policy: NumericPolicy = DEFAULT) -> EstimateReport:
    """Kolmogorov entropy of the refined partition via itinerary coding.

    Chain samples give sliding itinerary words (the forward orbit of z_t is
    z_{t-1}, z_{t-2}, ...). H_n is the n-gram entropy with the Miller-Madow
    bias correction; the reported value is the least-squares slope of H_n vs
    n on the last max(3, n_max//2) points.
    """
    pc = p.restrict_to_slice(UNIT_I, policy)
    if isinstance(samples, np.ndarray):
        z = samples
    else:
        z = sample_mu(pc, int(samples), seed, policy=policy)
    alpha, beta = z.real, np.abs(z.imag)
    symbols = np.full(len(z), -1, dtype=np.int64)
    for k, cell in enumerate(partition):
        inside = cell.contains(alpha, beta) & (symbols < 0)
        symbols[inside] = k
    symbols = symbols[symbols >= 0]
    m = len(partition) + 1
    hs = []
    for n in range(1, n_max + 1):
        # word for position t covers symbols of (z_t, p z_t, ..., p^{n-1} z_t)
        codes = np.zeros(len(symbols) - n + 1, dtype=np.int64)
        for j in range(n):
            codes = codes * m + symbols[j:len(symbols) - n + 1 + j]
        _, counts = np.unique(codes, return_counts=True)
        probs = counts / counts.sum()
        h = float(-np.sum(probs * np.log(probs)))
        h += (len(counts) - 1) / (2.0 * counts.sum())  # Miller-Madow
        hs.append((n, h))
    window = max(3, n_max // 2)
    tail = hs[-window:]
    xs = np.array([n for n, _ in tail], dtype=float)
    ys = np.array([h for _, h in tail])
    slope, intercept = np.polyfit(xs, ys, 1)
    resid = float(np.sqrt(np.mean((ys - (slope * xs + intercept)) ** 2)))
    return EstimateReport("partition_entropy", float(slope), resid,
                          len(symbols), {"n_max": n_max, "seed": seed,
                                         "cells": len(partition),
                                         "H_n": hs})
