"""Atomic measures on H with point-or-sphere atoms.

Normalization: each complex fiber root on the reference slice carries mass
1/d^n, so a real root of multiplicity m becomes a RealPoint atom of weight
m/d^n and a conjugate pair {z, z bar} becomes one Sphere2 atom of weight
2m/d^n. This makes every pullback measure a probability measure and
reproduces the slice-integral form mu = (1/4pi) int mu_I dI exactly through
slice_marginal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .cdyn import is_exceptional, preimage_tree, solve_fiber
from .errors import ExceptionalTarget
from .policy import DEFAULT, NumericPolicy
from .poly import QPolynomial
from .quat import (Quaternion, Sphere2, SphereQuadrature, UNIT_I,
                   slice_decompose, sphere_quadrature)

__all__ = [
    "AtomicMass",
    "EmpiricalMeasure",
    "TestFunction",
    "standard_panel",
    "brolin_pullback",
    "pair",
    "weak_distance",
    "pushforward",
    "pullback",
    "slice_marginal",
    "measure_from_complex_atoms",
]


@dataclass(frozen=True)
class AtomicMass:
    """Weighted atom: a real point (rho = 0) or a 2-sphere S_{alpha+I rho}."""

    alpha: float
    rho: float  # 0 for a real point, > 0 for a sphere
    weight: float

    def __post_init__(self):
        if not (self.weight > 0 and math.isfinite(self.weight)):
            raise ValueError("atom weight must be positive and finite")
        if self.rho < 0:
            raise ValueError("rho must be >= 0")

    @property
    def is_real_point(self):
        return self.rho == 0.0

    def sphere(self) -> Sphere2:
        return Sphere2(self.alpha, self.rho)


class EmpiricalMeasure:
    """Finite list of atoms plus provenance metadata.

    Atoms are kept sorted by (rho>0, alpha, rho) so folds over them are
    deterministic regardless of construction order.
    """

    def __init__(self, atoms, meta=None):
        self.atoms = tuple(sorted(atoms,
                                  key=lambda a: (a.rho > 0, a.alpha, a.rho)))
        self.meta = dict(meta or {})

    def total_mass(self):
        return float(sum(a.weight for a in self.atoms))

    def arrays(self):
        """(alpha, rho, weight) as ndarrays, in the deterministic atom order."""
        if not self.atoms:
            return (np.zeros(0), np.zeros(0), np.zeros(0))
        alpha = np.array([a.alpha for a in self.atoms])
        rho = np.array([a.rho for a in self.atoms])
        weight = np.array([a.weight for a in self.atoms])
        return alpha, rho, weight

    def scaled(self, factor):
        return EmpiricalMeasure(
            [AtomicMass(a.alpha, a.rho, a.weight * factor) for a in self.atoms],
            self.meta)

    def __len__(self):
        return len(self.atoms)

    def to_json(self):
        return {
            "atoms": [{"kind": "point" if a.is_real_point else "sphere",
                       "alpha": a.alpha, "rho": a.rho, "weight": a.weight}
                      for a in self.atoms],
            "meta": self.meta,
        }

    @staticmethod
    def from_json(data):
        atoms = [AtomicMass(d["alpha"], d["rho"], d["weight"])
                 for d in data["atoms"]]
        return EmpiricalMeasure(atoms, data.get("meta"))


@dataclass(frozen=True)
class TestFunction:
    """Named continuous test function H -> R for weak-convergence pairings.

    `axial`, when set, is a vectorized f(alpha, rho) equal to fn on every
    point of the sphere S_{alpha+I rho}; axially symmetric measures pair
    against it without sphere quadrature.
    """

    name: str
    fn: Callable[[Quaternion], float]
    axial: Callable | None = None
    support_radius: float = math.inf

    def __call__(self, q: Quaternion) -> float:
        return self.fn(q)


def axial_test_function(name, fn_ab):
    """Test function of (Re q, |Im q|) only; fn_ab must accept ndarrays."""
    return TestFunction(name, lambda q: float(fn_ab(q.re(), q.im_norm())),
                        axial=fn_ab)


def standard_panel():
    """The fixed 12-function panel used by all acceptance numbers.

    Polynomials in (Re q, |Im q|) up to degree 3, two Gaussian bumps of width
    1 centered at 0 and 1, |q|^2, and cos(Re q).
    """
    return [
        axial_test_function("re", lambda a, b: a),
        axial_test_function("im", lambda a, b: b),
        axial_test_function("re2", lambda a, b: a * a),
        axial_test_function("im2", lambda a, b: b * b),
        axial_test_function("re_im", lambda a, b: a * b),
        axial_test_function("re3", lambda a, b: a ** 3),
        axial_test_function("im3", lambda a, b: b ** 3),
        axial_test_function("re2_im", lambda a, b: a * a * b),
        axial_test_function("gauss0", lambda a, b: np.exp(-(a * a + b * b) / 2.0)),
        axial_test_function("gauss1", lambda a, b: np.exp(-((a - 1.0) ** 2 + b * b) / 2.0)),
        axial_test_function("abs2", lambda a, b: a * a + b * b),
        axial_test_function("cos_re", lambda a, b: np.cos(a)),
    ]


def _classify_roots(nodes, dn, policy: NumericPolicy):
    """Fiber roots on the reference slice -> point/sphere atoms.

    Real roots (|Im| below the cluster scale) become RealPoint atoms of
    weight mult/dn; conjugate pairs merge into one sphere atom of weight
    2*mult/dn (only the Im > 0 representative is consumed; the multiset is
    asserted conjugation-closed by the callers' tests).
    """
    atoms = []
    for node in nodes:
        z, m = node.point, node.multiplicity
        scale = 1.0 + abs(z)
        if abs(z.imag) <= policy.real_axis_tol * scale:
            atoms.append(AtomicMass(z.real, 0.0, m / dn))
        elif z.imag > 0:
            atoms.append(AtomicMass(z.real, z.imag, 2.0 * m / dn))
    return atoms


def brolin_pullback(p: QPolynomial, a: float, n: int, budget: int = 1 << 20,
                    policy: NumericPolicy = DEFAULT,
                    screen: bool = True) -> EmpiricalMeasure:
    """nu_n: the depth-n normalized preimage measure of a real target a.

    p must have real coefficients and degree >= 2; a is screened against the
    exceptional set of the restricted polynomial.
    """
    if not p.has_real_coeffs():
        raise ValueError("brolin_pullback requires real coefficients")
    pc = p.restrict_to_slice(UNIT_I, policy)
    d = pc.degree
    if d < 2:
        raise ValueError("degree must be >= 2")
    if screen and is_exceptional(pc, complex(a), policy=policy):
        raise ExceptionalTarget(f"target {a} is exceptional for this polynomial")
    nodes = preimage_tree(pc, complex(a), n, budget, policy)
    atoms = _classify_roots(nodes, float(d) ** n, policy)
    meta = {"polynomial": p.to_json(), "target": a, "depth": n}
    m = EmpiricalMeasure(atoms, meta)
    if abs(m.total_mass() - 1.0) > 1e-9:
        raise AssertionError(f"pullback mass {m.total_mass()} != 1")
    return m


def pair(m: EmpiricalMeasure, f: TestFunction,
         quad: SphereQuadrature | None = None) -> float:
    """<m, f>: points contribute w*f(r); spheres the quadrature average.

    Axial test functions take a vectorized path (the sphere average of an
    axial function is its value at (alpha, rho), exactly).
    """
    if f.axial is not None:
        alpha, rho, weight = m.arrays()
        return float(np.sum(weight * f.axial(alpha, rho)))
    if quad is None:
        quad = sphere_quadrature(3)
    total = 0.0
    for a in m.atoms:
        if a.is_real_point:
            total += a.weight * f(Quaternion.real(a.alpha))
        else:
            sph = a.sphere()
            total += a.weight * quad.average(lambda u: f(sph.point(u)))
    return total


def weak_distance(m1: EmpiricalMeasure, m2: EmpiricalMeasure,
                  panel=None, quad: SphereQuadrature | None = None) -> float:
    """max over the panel of |<m1,f> - <m2,f>|."""
    if panel is None:
        panel = standard_panel()
    if quad is None:
        quad = sphere_quadrature(3)
    return max(abs(pair(m1, f, quad) - pair(m2, f, quad)) for f in panel)


def pushforward(p: QPolynomial, m: EmpiricalMeasure,
                policy: NumericPolicy = DEFAULT) -> EmpiricalMeasure:
    """p_* m: atoms map forward; spheres map to spheres (or collapse to
    real points) under a real-coefficient polynomial; weights preserved."""
    if not p.has_real_coeffs():
        raise ValueError("pushforward requires real coefficients")
    pc = p.restrict_to_slice(UNIT_I, policy)
    atoms = []
    for a in m.atoms:
        img = pc(complex(a.alpha, a.rho))
        rho = abs(img.imag)
        if rho <= policy.real_axis_tol * (1.0 + abs(img)):
            rho = 0.0
        atoms.append(AtomicMass(img.real, rho, a.weight))
    return _coalesce(atoms, m.meta, policy)


def pullback(p: QPolynomial, m: EmpiricalMeasure,
             policy: NumericPolicy = DEFAULT) -> EmpiricalMeasure:
    """p^* m: each atom replaced by its d fiber atoms on the reference slice;
    total mass multiplies by d."""
    if not p.has_real_coeffs():
        raise ValueError("pullback requires real coefficients")
    pc = p.restrict_to_slice(UNIT_I, policy)
    atoms = []
    for a in m.atoms:
        targets = [complex(a.alpha, a.rho)]
        shares = [a.weight]
        if a.rho > 0:
            # a sphere atom marginalizes to the conjugate pair, half each
            targets = [complex(a.alpha, a.rho), complex(a.alpha, -a.rho)]
            shares = [a.weight / 2.0, a.weight / 2.0]
        for tgt, share in zip(targets, shares):
            for z, mult in solve_fiber(pc, tgt, policy):
                scale = 1.0 + abs(z)
                if abs(z.imag) <= policy.real_axis_tol * scale:
                    atoms.append(AtomicMass(z.real, 0.0, share * mult))
                else:
                    # complex roots appear once per half-plane; weight carries
                    # the full share of that root
                    atoms.append(AtomicMass(z.real, abs(z.imag), share * mult))
    return _coalesce(atoms, m.meta, policy)


def _coalesce(atoms, meta, policy: NumericPolicy):
    """Merge atoms at coincident (alpha, rho) within cluster tolerance."""
    atoms = sorted(atoms, key=lambda a: (a.rho > 0, a.alpha, a.rho))
    merged = []
    for a in atoms:
        if merged:
            b = merged[-1]
            scale = 1.0 + abs(b.alpha) + b.rho
            if ((a.rho > 0) == (b.rho > 0)
                    and abs(a.alpha - b.alpha) <= policy.cluster_tol * scale
                    and abs(a.rho - b.rho) <= policy.cluster_tol * scale):
                merged[-1] = AtomicMass(b.alpha, b.rho, b.weight + a.weight)
                continue
        merged.append(a)
    return EmpiricalMeasure(merged, meta)


def slice_marginal(m: EmpiricalMeasure, unit=UNIT_I):
    """mu_I: list of (complex point, weight) on one slice plane.

    A sphere atom splits into the conjugate pair alpha +- i rho, half the
    weight each; real points keep their weight.
    """
    out = []
    for a in m.atoms:
        if a.is_real_point:
            out.append((complex(a.alpha, 0.0), a.weight))
        else:
            out.append((complex(a.alpha, a.rho), a.weight / 2.0))
            out.append((complex(a.alpha, -a.rho), a.weight / 2.0))
    out.sort(key=lambda t: (t[0].real, t[0].imag))
    return out


def measure_from_complex_atoms(points, weights, meta=None,
                               policy: NumericPolicy = DEFAULT,
                               normalize=False) -> EmpiricalMeasure:
    """Build an axially symmetric measure from complex slice atoms.

    Conjugate mass is folded onto rho = |Im z|; callers supply both halves
    (or a density raster covering both half-planes).
    """
    atoms = []
    for z, w in zip(points, weights):
        if w <= 0:
            continue
        rho = abs(z.imag)
        if rho <= policy.real_axis_tol * (1.0 + abs(z)):
            rho = 0.0
        atoms.append(AtomicMass(z.real, rho, float(w)))
    m = _coalesce(atoms, meta or {}, policy)
    if normalize and m.total_mass() > 0:
        m = m.scaled(1.0 / m.total_mass())
    return m
