"""One-slice complex dynamics: iteration with an overflow-safe escape ledger,
fibers and preimage trees, Green's functions G_n, filled Julia masks, and
exceptional-point screening.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BudgetExceeded
from .grids import GridField, SliceGrid
from .policy import DEFAULT, NumericPolicy
from .poly import ComplexPoly
from .roots import all_roots, cluster_roots, quadratic_roots_many

__all__ = [
    "EscapeParams",
    "PreimageNode",
    "OrbitValue",
    "escape_radius",
    "iterate",
    "green_n",
    "green_field",
    "solve_fiber",
    "preimage_tree",
    "filled_julia_mask",
    "is_exceptional",
]

def _ledger_switch(d: int) -> float:
    """Magnitude at which iteration switches to log tracking.

    Chosen so the next step |c_d| |z|^d stays representable; the dropped
    lower-order correction is bounded by ~1/switch.
    """
    return 10.0 ** min(30.0, 250.0 / d)


@dataclass(frozen=True)
class EscapeParams:
    """Escape test parameters; radius must guarantee |z| > R implies escape."""

    radius: float
    max_iter: int


def escape_radius(p: ComplexPoly) -> float:
    """R = 2 * max(1, sum|c_k| / |c_d|); |z| > R implies monotone escape."""
    lead = abs(p.coeffs[-1])
    return 2.0 * max(1.0, float(np.sum(np.abs(p.coeffs))) / lead)


@dataclass(frozen=True)
class OrbitValue:
    """Value of p^n(z): either the exact point, or an escaped log-magnitude.

    log_mag = log|p^n(z)| is valid in both cases (escape is a value, not an
    error).
    """

    escaped: bool
    point: complex  # meaningful only when not escaped
    log_mag: float


def _ledger_step(p: ComplexPoly, log_mag: float) -> float:
    """log|p(z)| from log|z| in the escaped regime, correction dropped."""
    d = p.degree
    return d * log_mag + math.log(abs(p.coeffs[-1]))


def iterate(p: ComplexPoly, z: complex, n: int,
            radius: float | None = None) -> OrbitValue:
    """n-fold composition with the escape ledger.

    While |z| is representable the exact value is kept; once |z| exceeds the
    ledger switch the iteration tracks log|z| via log|p(z)| = d log|z| +
    log|c_d| + log|1 + sum_{k<d} c_k z^{k-d}/c_d|, evaluating the correction
    while it is representable.
    """
    if radius is None:
        radius = escape_radius(p)
    switch = _ledger_switch(p.degree)
    z = complex(z)
    escaped = False
    log_mag = math.log(abs(z)) if z != 0 else -math.inf
    for _ in range(n):
        if not escaped:
            z = p(z)
            log_mag = math.log(abs(z)) if z != 0 else -math.inf
            if abs(z) > switch:
                escaped = True
        else:
            log_mag = _ledger_step(p, log_mag)
    return OrbitValue(escaped, z, log_mag)


def green_n(p: ComplexPoly, z: complex, n: int) -> float:
    """G_n(z) = d^-n log+ |p^n(z)| via the escape ledger."""
    orbit = iterate(p, z, n)
    return max(0.0, orbit.log_mag) / (p.degree ** n)


def green_field(p: ComplexPoly, grid: SliceGrid, n: int) -> GridField:
    """G_n on every node of a slice raster (vectorized ledger)."""
    z = grid.mesh()
    d = p.degree
    switch = _ledger_switch(d)
    live = np.ones(z.shape, dtype=bool)
    log_mag = np.full(z.shape, -np.inf)
    log_lead = math.log(abs(p.coeffs[-1]))
    for _ in range(n):
        dead_before = ~live
        if np.any(live):
            z = np.where(live, p(np.where(live, z, 0.0)), z)
            mag = np.abs(z)
            with np.errstate(divide="ignore"):
                log_mag = np.where(live, np.log(np.maximum(mag, 1e-320)), log_mag)
            live &= mag <= switch
        if np.any(dead_before):
            log_mag = np.where(dead_before, d * log_mag + log_lead, log_mag)
    values = np.maximum(0.0, log_mag) / (d ** n)
    return GridField(grid, values)


def solve_fiber(p: ComplexPoly, w: complex, policy: NumericPolicy = DEFAULT):
    """All d roots of p(z) = w with multiplicity, residual-certified.

    Returns list of (root, multiplicity) with multiplicities summing to d.
    """
    if p.degree < 1:
        raise ValueError("fiber solve needs degree >= 1")
    roots = all_roots(p.shifted(w).coeffs, policy)
    scale = 1.0 + float(np.max(np.abs(roots))) if len(roots) else 1.0
    return cluster_roots(roots, scale, policy)


@dataclass(frozen=True)
class PreimageNode:
    """A depth-n preimage point with its accumulated multiplicity."""

    point: complex
    depth: int
    multiplicity: int


def _merge_level(points, mults, scale, policy):
    """Merge coincident points, summing multiplicities; deterministic order."""
    order = np.lexsort((np.imag(points), np.real(points)))
    points = np.asarray(points)[order]
    mults = np.asarray(mults)[order]
    tol = policy.cluster_tol * max(scale, 1.0)
    out_p, out_m = [], []
    for pt, m in zip(points, mults):
        if out_p and abs(pt - out_p[-1]) <= tol:
            out_m[-1] += int(m)
        else:
            out_p.append(complex(pt))
            out_m.append(int(m))
    return out_p, out_m


def preimage_tree(p: ComplexPoly, a: complex, n: int, budget: int = 1 << 20,
                  policy: NumericPolicy = DEFAULT):
    """All d^n depth-n preimages of a, counted with multiplicity.

    Degree-2 polynomials use a vectorized per-level quadratic solve; higher
    degrees fall back to per-target Aberth solves.
    """
    d = p.degree
    if d ** n > budget:
        raise BudgetExceeded(f"d^n = {d ** n} exceeds budget {budget}")
    points = [complex(a)]
    mults = [1]
    for depth in range(n):
        if d == 2:
            c0, c1, c2 = p.coeffs[0], p.coeffs[1], p.coeffs[2]
            targets = np.asarray(points)
            rts = quadratic_roots_many(c0 - targets, c1, c2)
            new_points = rts.reshape(-1)
            new_mults = np.repeat(mults, 2)
        else:
            new_points, new_mults = [], []
            for pt, m in zip(points, mults):
                for r, k in solve_fiber(p, pt, policy):
                    new_points.append(r)
                    new_mults.append(m * k)
            new_points = np.asarray(new_points)
            new_mults = np.asarray(new_mults)
        scale = 1.0 + float(np.max(np.abs(new_points)))
        points, mults = _merge_level(new_points, new_mults, scale, policy)
    assert sum(mults) == d ** n
    return [PreimageNode(pt, n, m) for pt, m in zip(points, mults)]


def filled_julia_mask(p: ComplexPoly, grid: SliceGrid,
                      esc: EscapeParams) -> np.ndarray:
    """Boolean raster: node is inside iff its orbit stays <= R for max_iter."""
    z = grid.mesh()
    inside = np.ones(z.shape, dtype=bool)
    for _ in range(esc.max_iter):
        z = np.where(inside, p(np.where(inside, z, 0.0)), z)
        inside &= np.abs(z) <= esc.radius
        if not np.any(inside):
            break
    return inside


def is_exceptional(p: ComplexPoly, a: complex, depth: int | None = None,
                   policy: NumericPolicy = DEFAULT) -> bool:
    """True iff the backward orbit of a stays a set of <= deg p points.

    For complex polynomials of degree >= 2 the exceptional set has at most
    one finite point (a critical fixed point of full multiplicity), so a
    non-exceptional backward orbit exceeds d points within two levels; the
    default depth adds margin.
    """
    if p.degree < 2:
        raise ValueError("exceptional screening needs degree >= 2")
    if depth is None:
        depth = policy.exceptional_depth
    current = [complex(a)]
    for _ in range(depth):
        pts = []
        for pt in current:
            pts.extend(r for r, _ in solve_fiber(p, pt, policy))
        scale = 1.0 + max(abs(pt) for pt in pts)
        merged = cluster_roots(np.asarray(pts), scale, policy)
        current = [c for c, _ in merged]
        if len(current) > p.degree:
            return False
    return True
