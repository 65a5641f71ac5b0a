"""Equilibrium constructions beyond real coefficients.

One-slice case: all coefficients live in a single slice plane C_I with at
least one nonreal. The symmetrized slice iterate g_n = (P^n_I)^s has real
coefficients, and the candidate limit measure is

    mu' = (1/8 pi) int_S mu_{P(.,J)} dJ + (1/8 pi) int_S mu_{P^c(.,J)} dJ,

where P(., J) rewrites each coefficient x + I y as x + J y.

General case: arbitrary quaternionic coefficients. The bullet iterate
p^{bullet n} symmetrizes to a real-coefficient h_n of degree 2 d^n, and the
testable statement is the vanishing gap
d^{-n} (log|h_n(q) - a| - log|h_n(q) - b|) -> 0; no limit measure is claimed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .cdyn import is_exceptional, preimage_tree, solve_fiber
from .errors import BudgetExceeded, ExceptionalTarget, ProbeOnFiber
from .measures import EmpiricalMeasure, measure_from_complex_atoms
from .policy import DEFAULT, NumericPolicy
from .poly import ComplexPoly, QPolynomial
from .quat import ImaginaryUnit, Quaternion, SphereQuadrature, UNIT_I, sphere_quadrature

__all__ = [
    "OneSlicePolynomial",
    "GeneralIterate",
    "gn_build",
    "mu_prime_estimate",
    "gn_pullback_measure",
    "hn_build",
    "orbit_finite",
    "brolin3_gap",
    "annulus_probes",
]


def _realify(f: QPolynomial, scale: float | None = None,
             tol: float = 1e-10) -> QPolynomial:
    """Assert coefficients are real to tolerance, then drop the imaginary parts.

    scale is the magnitude the convolution producing f actually summed
    (symmetrization cancels heavily, so the output coefficients can sit many
    orders below the products whose rounding sets the error floor).
    """
    if scale is None:
        scale = max(abs(c) for c in f.coeffs) or 1.0
    if f.max_imag_coeff() > tol * scale:
        raise AssertionError(
            f"expected real coefficients, worst imaginary part {f.max_imag_coeff():.3g}")
    return QPolynomial.from_real([c.w for c in f.coeffs])


@dataclass(frozen=True)
class OneSlicePolynomial:
    """Polynomial with all coefficients in one slice plane C_I.

    has_nonreal_coefficient separates the genuinely one-slice case from the
    slice-preserving (all real) one; builders route on it.
    """

    base: ComplexPoly
    unit: ImaginaryUnit
    has_nonreal_coefficient: bool = False

    def __post_init__(self):
        flag = not self.base.is_real()
        object.__setattr__(self, "has_nonreal_coefficient", flag)

    @property
    def degree(self):
        return self.base.degree

    def rewritten(self, conjugate: bool = False) -> ComplexPoly:
        """Coefficients transported to another unit J, as a complex polynomial.

        x + I y maps to x + J y, so over any J the coefficient array is the
        same complex data; only the embedding unit changes. The conjugate
        variant P^c flips the sign of every y.
        """
        return self.base.conj_coeffs() if conjugate else self.base


@dataclass(frozen=True)
class GeneralIterate:
    """h_n = (p^{bullet n})^s together with its provenance."""

    hn: QPolynomial
    n: int
    source: QPolynomial

    def __post_init__(self):
        d = self.source.degree
        if self.hn.degree != 2 * d ** self.n:
            raise AssertionError(
                f"deg h_n = {self.hn.degree}, expected {2 * d ** self.n}")


def gn_build(P: OneSlicePolynomial, n: int,
             policy: NumericPolicy = DEFAULT) -> QPolynomial:
    """g_n = (P^n_I)^s: iterate within the slice, lift, symmetrize.

    C_I is a commutative field, so the slice iterate is an ordinary complex
    composition. Real-coefficient input short-circuits to g_n = (P^n)^2.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    d = P.degree
    if d ** n > policy.degree_budget:
        raise BudgetExceeded(f"d^n = {d ** n} exceeds budget {policy.degree_budget}")
    pn = P.base.iterate_poly(n)
    if not P.has_nonreal_coefficient:
        sq = ComplexPoly(np.convolve(pn.coeffs, pn.coeffs))
        return QPolynomial.from_real(sq.coeffs.real)
    g = pn.lift(P.unit).symmetrize()
    g = _realify(g, scale=float(np.sum(np.abs(pn.coeffs))) ** 2)
    assert g.degree == 2 * d ** n
    return g


def _screen_gn_target(P: OneSlicePolynomial, a: float, policy: NumericPolicy):
    """Exceptional screening of a real target through g_1's slice restriction."""
    g1 = gn_build(P, 1, policy).restrict_to_slice(UNIT_I, policy)
    if is_exceptional(g1, complex(a), policy=policy):
        raise ExceptionalTarget(f"target {a} is exceptional for g_n")


def _binned(points, weights, bin_width, meta, policy):
    """Aggregate slice atoms into (alpha, rho) bins of the given width.

    Bin mass sits at the weighted mean of its members, which keeps first
    moments exact; rho snaps to 0 when the whole bin hugs the real axis.
    """
    points = np.asarray(points, dtype=complex)
    weights = np.asarray(weights, dtype=float)
    alpha, rho = points.real, np.abs(points.imag)
    ia = np.floor(alpha / bin_width).astype(np.int64)
    ir = np.floor(rho / bin_width).astype(np.int64)
    keys = {}
    for k in range(len(points)):
        keys.setdefault((ia[k], ir[k]), []).append(k)
    out_pts, out_w = [], []
    for key in sorted(keys):
        idx = keys[key]
        w = weights[idx].sum()
        a_mean = float(np.average(alpha[idx], weights=weights[idx]))
        r_mean = float(np.average(rho[idx], weights=weights[idx]))
        out_pts.append(complex(a_mean, r_mean))
        out_w.append(w)
    return measure_from_complex_atoms(out_pts, out_w, meta=meta, policy=policy)


def mu_prime_estimate(P: OneSlicePolynomial, quad: SphereQuadrature, n: int,
                      a: float = 0.0, bin_width: float = 1.0 / 128.0,
                      policy: NumericPolicy = DEFAULT,
                      keep_debug_atoms: bool = False) -> EmpiricalMeasure:
    """Estimator of mu' by quadrature over units J.

    For each node J the pair P(., J), P^c(., J) gets a depth-n complex
    Brolin pullback of the real target a; atom clouds are averaged with
    weights w_J / (8 pi) each (total mass 1 since sum w_J = 4 pi). With real
    coefficients both halves coincide and the formula collapses to
    (1/4 pi) int mu_{P(., J)} dJ, the slice-preserving corollary.
    """
    d = P.degree
    if d < 2:
        raise ValueError("degree must be >= 2")
    if d ** n > policy.degree_budget:
        raise BudgetExceeded(f"d^n = {d ** n} exceeds budget {policy.degree_budget}")
    _screen_gn_target(P, a, policy)

    clouds = {}
    for conjugate in (False, True):
        pc = P.rewritten(conjugate)
        nodes = preimage_tree(pc, complex(a), n, policy.degree_budget, policy)
        clouds[conjugate] = ([nd.point for nd in nodes],
                            [nd.multiplicity / float(d) ** n for nd in nodes])

    points, weights = [], []
    debug = []
    total_w = sum(quad.weights)
    for J, wj in zip(quad.units, quad.weights):
        for conjugate in (False, True):
            pts, ws = clouds[conjugate]
            share = wj / (2.0 * total_w)
            points.extend(pts)
            weights.extend(w * share for w in ws)
            if keep_debug_atoms:
                debug.extend(
                    {"unit": J.to_json(), "conjugate": conjugate,
                     "x": z.real, "y": z.imag, "weight": w * share}
                    for z, w in zip(pts, ws))
    meta = {"estimator": "mu_prime", "depth": n, "target": a,
            "quad_level": quad.level, "bin_width": bin_width,
            "binning": {"width": bin_width, "rule": "weighted-mean"}}
    if keep_debug_atoms:
        meta["debug_atoms"] = debug
    m = _binned(points, weights, bin_width, meta, policy)
    if abs(m.total_mass() - 1.0) > 1e-9:
        raise AssertionError(f"mu' mass {m.total_mass()} != 1")
    return m


def gn_pullback_measure(P: OneSlicePolynomial, a: float, n: int,
                        policy: NumericPolicy = DEFAULT) -> EmpiricalMeasure:
    """Normalized fiber measure of the real target a under g_n.

    g_n has real coefficients and degree 2 d^n; each complex fiber root
    carries 1/(2 d^n), spheres fold conjugate pairs as usual.
    """
    g = gn_build(P, n, policy)
    _screen_gn_target(P, a, policy)
    gc = g.restrict_to_slice(UNIT_I, policy)
    deg = gc.degree
    pts, ws = [], []
    for z, mult in solve_fiber(gc, complex(a), policy):
        if abs(z.imag) <= policy.real_axis_tol * (1.0 + abs(z)):
            pts.append(complex(z.real, 0.0))
            ws.append(mult / deg)
        else:
            # one atom per conjugate pair; its mirror root carries the
            # other half, so the sphere weight is 2 mult / deg
            if z.imag > 0:
                pts.append(z)
                ws.append(2.0 * mult / deg)
    meta = {"estimator": "gn_pullback", "depth": n, "target": a}
    m = measure_from_complex_atoms(pts, ws, meta=meta, policy=policy)
    if abs(m.total_mass() - 1.0) > 1e-6:
        raise AssertionError(f"g_n fiber mass {m.total_mass()} != 1")
    return m


def hn_build(p: QPolynomial, n: int,
             policy: NumericPolicy = DEFAULT) -> GeneralIterate:
    """h_n = (p^{bullet n})^s for arbitrary quaternionic coefficients."""
    d = p.degree
    if d < 2:
        raise ValueError("degree must be >= 2")
    if n < 1:
        raise ValueError("n must be >= 1")
    if 2 * d ** n > policy.degree_budget:
        raise BudgetExceeded(
            f"2 d^n = {2 * d ** n} exceeds budget {policy.degree_budget}")
    it = p
    for _ in range(n - 1):
        it = p.bullet_compose(it)
    assert it.degree == d ** n
    hn = _realify(it.symmetrize(),
                  scale=sum(abs(c) for c in it.coeffs) ** 2)
    return GeneralIterate(hn, n, p)


def orbit_finite(p: QPolynomial, q0: Quaternion, horizon: int,
                 policy: NumericPolicy = DEFAULT) -> bool:
    """Heuristic finite-orbit test for the exceptional set of the h_n family.

    True iff {h_n(q0) : n <= horizon} has fewer than horizon distinct values
    after clustering. Heuristic at the declared horizon; callers echo the
    horizon in their reports.
    """
    if horizon < 2:
        raise ValueError("horizon must be >= 2")
    values = []
    for n in range(1, horizon + 1):
        hn = hn_build(p, n, policy).hn
        v = hn.eval(q0)
        if abs(v) > 1e12:
            return False
        values.append(v)
    tol = policy.cluster_tol * (1.0 + max(abs(v) for v in values))
    distinct = []
    for v in values:
        if all(abs(v - u) > tol for u in distinct):
            distinct.append(v)
    return len(distinct) < horizon


def annulus_probes(count: int = 100, r_lo: float = 1.1,
                   r_hi: float = 1.4) -> list:
    """Deterministic probe grid on an upper-half annulus, as quaternions.

    Radii x angles factor count into the nearest balanced product.
    """
    n_r = max(2, int(math.sqrt(count)))
    n_t = max(2, count // n_r)
    probes = []
    for r in np.linspace(r_lo, r_hi, n_r):
        for t in np.linspace(0.15, math.pi - 0.15, n_t):
            probes.append(Quaternion(r * math.cos(t), r * math.sin(t), 0.0, 0.0))
    return probes


def brolin3_gap(p: QPolynomial, a: float, b: float, n: int,
                probe_points=None, screen_horizon: int | None = None,
                policy: NumericPolicy = DEFAULT) -> float:
    """max over probes of |d^-n (log|h_n(q) - a| - log|h_n(q) - b|)|.

    Probes too close to a fiber of a or b are skipped; an empty surviving
    probe set raises ProbeOnFiber. Exceptional screening of a and b (via
    orbit_finite) is the caller's duty; pass screen_horizon to have it run
    here and raise ExceptionalTarget. It is off by default because bounded
    targets routinely have finite h-orbits while the gap statement, probed
    away from the fibers, is insensitive to that.
    """
    if a == b:
        return 0.0
    if screen_horizon is not None:
        for target in (a, b):
            if orbit_finite(p, Quaternion.real(target), screen_horizon, policy):
                raise ExceptionalTarget(
                    f"target {target} looks exceptional at horizon {screen_horizon}")
    hn = hn_build(p, n, policy).hn
    hc = hn.restrict_to_slice(UNIT_I, policy)
    d = p.degree
    gap = 0.0
    survivors = 0
    for q in (probe_points if probe_points is not None else annulus_probes()):
        z = complex(q.re(), q.im_norm())
        v = hc(z)
        da, db = abs(v - a), abs(v - b)
        if min(da, db) < policy.fiber_residual_tol * (1.0 + abs(v)):
            continue  # on (or hugging) a fiber; skip this probe
        survivors += 1
        gap = max(gap, abs(math.log(da) - math.log(db)) / float(d) ** n)
    if survivors == 0:
        raise ProbeOnFiber("every probe point sits on a fiber of a or b")
    return gap
