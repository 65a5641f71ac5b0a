"""Discrete slice Laplacian on rasters and its fundamental-solution checks.

The operator on each slice is (1/4)(d^2/dalpha^2 + d^2/dbeta^2), realized by
a 5-point stencil scaled by 1/4. Distributional pairings are normalized by
1/pi so that the discrete functional realizes the identities
  lap log|q-a|      = (1/2) delta_a           (real a)
  lap log|(q-a)^s|  = (1/2) delta_a + (1/2) delta_{a conj}   (non-real a)
exactly in the limit h -> 0. (The raw 2-D distributional constant of the
quarter-Laplacian is pi/2 per unit mass; the 1/pi factor is what makes the
half-weight form hold.)
"""

from __future__ import annotations

import math

import numpy as np

from .cdyn import green_field
from .errors import SingularNode
from .grids import GridField, SliceGrid
from .measures import EmpiricalMeasure, TestFunction, measure_from_complex_atoms
from .policy import DEFAULT, NumericPolicy
from .poly import QPolynomial
from .quat import Quaternion, UNIT_I

__all__ = [
    "slice_laplacian",
    "log_distance_field",
    "fundamental_solution_check",
    "sphere_kernel_check",
    "measure_from_green",
    "refinement_order",
    "raster_to_measure",
]


def slice_laplacian(f: GridField, on_masked: str = "raise") -> GridField:
    """5-point stencil scaled by 1/4; the boundary ring is masked out.

    on_masked: 'raise' -> SingularNode if an interior stencil touches a
    masked input node; 'mask' -> mask those outputs instead.
    """
    v = f.values
    h2 = f.grid.h ** 2
    out = np.zeros_like(v)
    out[1:-1, 1:-1] = (v[1:-1, 2:] + v[1:-1, :-2] + v[2:, 1:-1] + v[:-2, 1:-1]
                       - 4.0 * v[1:-1, 1:-1]) / (4.0 * h2)
    mask = np.ones_like(v, dtype=bool)
    mask[1:-1, 1:-1] = False
    touched = np.zeros_like(v, dtype=bool)
    if np.any(f.mask):
        m = f.mask
        touched[1:-1, 1:-1] = (m[1:-1, 1:-1] | m[1:-1, 2:] | m[1:-1, :-2]
                               | m[2:, 1:-1] | m[:-2, 1:-1])
        if on_masked == "raise" and np.any(touched & ~mask):
            raise SingularNode("stencil touches a masked node")
        mask |= touched
    out[mask] = 0.0
    return GridField(f.grid, out, mask)


def log_distance_field(grid: SliceGrid, singularities) -> GridField:
    """sum_k log|z - s_k| with the distance floored at 1e-3 h.

    No masking: the delta mass of the discrete Laplacian lives entirely in
    the stencils touching the singular node, so dropping them loses the
    mass. The floor only matters when a singularity sits exactly on a node,
    and the value there cancels in bump-weighted sums up to O(h^2 log h)
    (a node's value enters neighboring stencils with net coefficient zero).
    """
    z = grid.mesh()
    values = np.zeros(z.shape)
    floor = 1e-3 * grid.h
    for s in singularities:
        values += np.log(np.maximum(np.abs(z - s), floor))
    return GridField(grid, values)


def _pairing(lap: GridField, bump: TestFunction) -> float:
    """(1/pi) sum lap * bump * h^2 over unmasked nodes."""
    z = lap.grid.mesh()
    if bump.axial is not None:
        bump_vals = bump.axial(z.real, np.abs(z.imag))
    else:
        bump_vals = np.vectorize(
            lambda zz: bump(Quaternion(zz.real, zz.imag * UNIT_I.x,
                                       zz.imag * UNIT_I.y, zz.imag * UNIT_I.z))
        )(z)
    h2 = lap.grid.h ** 2
    total = np.sum(np.where(lap.mask, 0.0, lap.values * bump_vals)) * h2
    return float(total / math.pi)


def fundamental_solution_check(a: float, bump: TestFunction,
                               grid: SliceGrid) -> float:
    """Pair lap log|z-a| against a bump; the limit value is bump(a)/2."""
    field = log_distance_field(grid, [complex(a, 0.0)])
    lap = slice_laplacian(field, on_masked="mask")
    return _pairing(lap, bump)


def sphere_kernel_check(a: Quaternion, bump: TestFunction, grid: SliceGrid):
    """Pair lap log|(q-a)^s| against a bump for non-real a.

    Returns (computed, expected) with expected the conjugate-pair half
    weights (1/2) bump(alpha0 + I beta0) + (1/2) bump(alpha0 - I beta0).
    The field depends on a only through (alpha0, beta0): (q-a)^s = (q-a')^s
    for any a' on the sphere of a.
    """
    alpha0 = a.re()
    beta0 = a.im_norm()
    if beta0 <= 0:
        raise ValueError("sphere_kernel_check needs a non-real center")
    s1 = complex(alpha0, beta0)
    s2 = complex(alpha0, -beta0)
    field = log_distance_field(grid, [s1, s2])
    lap = slice_laplacian(field, on_masked="mask")
    computed = _pairing(lap, bump)
    q1 = Quaternion(alpha0, beta0, 0.0, 0.0)
    q2 = Quaternion(alpha0, -beta0, 0.0, 0.0)
    expected = 0.5 * bump(q1) + 0.5 * bump(q2)
    return computed, expected


def measure_from_green(p: QPolynomial, n: int, grid: SliceGrid,
                       policy: NumericPolicy = DEFAULT,
                       clamp_limit: float = 0.05):
    """Density raster of the equilibrium measure: (1/2pi) Delta_2D G_n.

    slice_laplacian carries the 1/4 normalization, so the density is
    (2/pi) * stencil output; with this constant the raster integrates to the
    unit mass of the probability measure. Negative values (the log+ kink of
    G_n makes the stencil overshoot on the outer side of the level curve)
    are clamped to zero; returns (density field, clamp_mass). Clamp mass
    above clamp_limit of the total is a failed run and raises.
    """
    pc = p.restrict_to_slice(UNIT_I, policy)
    g = green_field(pc, grid, n)
    lap = slice_laplacian(g, on_masked="mask")
    density = (2.0 / math.pi) * lap.values
    clamp_mass = float(-np.sum(np.minimum(density, 0.0)) * grid.h ** 2)
    density = np.maximum(density, 0.0)
    total = float(np.sum(density) * grid.h ** 2)
    if total > 0 and clamp_mass > clamp_limit * total:
        raise AssertionError(
            f"clamped negative mass {clamp_mass:.3g} exceeds "
            f"{clamp_limit:.0%} of total {total:.3g}")
    return GridField(grid, density, lap.mask), clamp_mass


def raster_to_measure(density: GridField, policy: NumericPolicy = DEFAULT,
                      normalize: bool = True,
                      threshold: float = 0.0) -> EmpiricalMeasure:
    """Convert a density raster to an atomic measure on grid nodes.

    Node (alpha, beta) with mass density*h^2 becomes a slice atom at
    alpha + i beta; conjugate half-planes fold onto spheres. Normalization to
    unit mass is the default (the comparison targets are probabilities).
    """
    z = density.grid.mesh()
    h2 = density.grid.h ** 2
    w = np.where(density.mask, 0.0, density.values) * h2
    keep = w > threshold
    return measure_from_complex_atoms(z[keep].ravel(), w[keep].ravel(),
                                      meta={"source": "raster"},
                                      policy=policy, normalize=normalize)


def refinement_order(values_by_h, exact):
    """Least-squares slope of log|error| vs log h for an h-refinement study."""
    hs = np.array(sorted(values_by_h))
    errs = np.array([abs(values_by_h[h] - exact) for h in hs])
    if np.any(errs == 0):
        return 2.0
    slope = np.polyfit(np.log(hs), np.log(errs), 1)[0]
    return float(slope)
