import numpy as np
import pytest

from qbrolin.errors import ExceptionalTarget
from qbrolin.measures import (AtomicMass, EmpiricalMeasure, axial_test_function,
                              brolin_pullback, measure_from_complex_atoms, pair,
                              pullback, pushforward, slice_marginal,
                              standard_panel, weak_distance)
from qbrolin.poly import QPolynomial
from qbrolin.quat import sphere_quadrature

CHEB = QPolynomial.from_real([-2.0, 0.0, 1.0])
SQ = QPolynomial.from_real([0.0, 0.0, 1.0])


def test_atom_validation():
    with pytest.raises(ValueError):
        AtomicMass(0.0, 0.0, 0.0)
    with pytest.raises(ValueError):
        AtomicMass(0.0, -1.0, 1.0)


def test_measure_sorted_and_json():
    m = EmpiricalMeasure([AtomicMass(1.0, 0.5, 0.5), AtomicMass(-1.0, 0.0, 0.5)],
                         {"tag": 1})
    assert m.atoms[0].is_real_point
    again = EmpiricalMeasure.from_json(m.to_json())
    assert again.atoms == m.atoms and again.meta == m.meta


def test_pullback_mass_one():
    for n in (1, 4, 8):
        m = brolin_pullback(CHEB, 0.0, n)
        assert m.total_mass() == pytest.approx(1.0, abs=1e-12)


def test_pullback_screens_exceptional():
    with pytest.raises(ExceptionalTarget):
        brolin_pullback(SQ, 0.0, 3)


def test_pullback_requires_real_coeffs():
    from qbrolin.quat import Quaternion
    q = QPolynomial([Quaternion(0, 1, 0, 0), Quaternion(), Quaternion.real(1)])
    with pytest.raises(ValueError):
        brolin_pullback(q, 0.0, 2)


def test_axial_pair_matches_quadrature():
    m = brolin_pullback(CHEB, 1.0, 5)
    quad = sphere_quadrature(3)
    f = axial_test_function("probe", lambda a, b: a * a + 0.3 * b)
    fast = pair(m, f)
    slow = pair(m, type(f)(f.name, f.fn, None, f.support_radius), quad)
    assert fast == pytest.approx(slow, abs=1e-10)


def test_weak_distance_zero_on_self():
    m = brolin_pullback(CHEB, 0.0, 6)
    assert weak_distance(m, m) == 0.0


def test_pushforward_tower_identity():
    # p_* nu_n = nu_{n-1}: exact up to solver tolerance
    nu6 = brolin_pullback(CHEB, 0.5, 6)
    nu5 = brolin_pullback(CHEB, 0.5, 5)
    assert weak_distance(pushforward(CHEB, nu6), nu5) < 1e-9


def test_pullback_operator_mass():
    m = brolin_pullback(CHEB, 0.5, 3)
    up = pullback(CHEB, m)
    assert up.total_mass() == pytest.approx(2.0, abs=1e-9)


def test_slice_marginal_splits_spheres():
    m = EmpiricalMeasure([AtomicMass(0.0, 1.0, 1.0)])
    marg = slice_marginal(m)
    assert marg == [(complex(0.0, -1.0), 0.5), (complex(0.0, 1.0), 0.5)]


def test_slice_marginal_total_weight():
    m = brolin_pullback(CHEB, 1.0, 7)
    assert sum(w for _, w in slice_marginal(m)) == pytest.approx(1.0, abs=1e-12)


def test_measure_from_complex_atoms_folds_conjugates():
    pts = [1.0 + 0.5j, 1.0 - 0.5j, 0.3 + 0j]
    m = measure_from_complex_atoms(pts, [0.25, 0.25, 0.5])
    assert len(m) == 2
    sphere = [a for a in m.atoms if not a.is_real_point][0]
    assert sphere.weight == pytest.approx(0.5)
    assert sphere.rho == pytest.approx(0.5)


def test_standard_panel_shape():
    panel = standard_panel()
    assert len(panel) == 12
    assert len({f.name for f in panel}) == 12
    for f in panel:
        assert f.axial is not None


def test_chebyshev_moments():
    # nu_n for z^2 - 2 approaches the arcsine law on [-2, 2]:
    # odd moments 0, second moment 2, fourth moment 6
    m = brolin_pullback(CHEB, 0.0, 12)
    alpha, rho, w = m.arrays()
    assert rho.max() == 0.0  # supported on the real segment
    assert np.sum(w * alpha) == pytest.approx(0.0, abs=1e-6)
    assert np.sum(w * alpha ** 2) == pytest.approx(2.0, abs=1e-6)
    assert np.sum(w * alpha ** 4) == pytest.approx(6.0, abs=1e-5)


def test_basilica_pullback_has_spheres():
    m = brolin_pullback(QPolynomial.from_real([-1.0, 0.0, 1.0]), 0.5, 8)
    kinds = {a.is_real_point for a in m.atoms}
    assert kinds == {True, False}
    assert m.total_mass() == pytest.approx(1.0, abs=1e-12)
