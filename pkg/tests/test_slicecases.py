import numpy as np
import pytest

from qbrolin.errors import BudgetExceeded, ProbeOnFiber
from qbrolin.measures import weak_distance
from qbrolin.poly import ComplexPoly, QPolynomial
from qbrolin.quat import Quaternion, UNIT_I, sphere_quadrature
from qbrolin.slicecases import (GeneralIterate, OneSlicePolynomial,
                                annulus_probes, brolin3_gap, gn_build,
                                gn_pullback_measure, hn_build,
                                mu_prime_estimate, orbit_finite)

P_I = OneSlicePolynomial(ComplexPoly([1j, 0.0, 1.0]), UNIT_I)   # q^2 + i
P_J = QPolynomial([Quaternion(0, 0, 1, 0), Quaternion(),
                   Quaternion.real(1.0)])                        # q^2 + j


def test_one_slice_flags():
    assert P_I.has_nonreal_coefficient
    real = OneSlicePolynomial(ComplexPoly([-2.0, 0.0, 1.0]), UNIT_I)
    assert not real.has_nonreal_coefficient
    assert np.allclose(P_I.rewritten(conjugate=True).coeffs, [-1j, 0.0, 1.0])


def test_g1_closed_form():
    # (q^2 + i)^s = (q^2 - i) * (q^2 + i) = q^4 + 1
    g1 = gn_build(P_I, 1)
    assert [c.w for c in g1.coeffs] == [1.0, 0.0, 0.0, 0.0, 1.0]
    assert g1.has_real_coeffs()


def test_gn_degree_and_realness():
    for n in (2, 3, 4):
        g = gn_build(P_I, n)
        assert g.degree == 2 * 2 ** n
        assert g.has_real_coeffs()


def test_gn_real_coeff_shortcut():
    real = OneSlicePolynomial(ComplexPoly([-2.0, 0.0, 1.0]), UNIT_I)
    g2 = gn_build(real, 2)
    p2 = ComplexPoly([-2.0, 0.0, 1.0]).iterate_poly(2)
    z = 0.37 + 0.0j
    assert g2.restrict_to_slice(UNIT_I)(z) == pytest.approx(p2(z) ** 2, rel=1e-12)


def test_gn_is_not_an_iteration_semigroup():
    # g_{n+1} != g_1 o g_n: symmetrization does not commute with composition
    g1 = gn_build(P_I, 1).restrict_to_slice(UNIT_I)
    g2 = gn_build(P_I, 2).restrict_to_slice(UNIT_I)
    composed = g1.compose(g1)
    assert composed.degree == g2.degree * 2
    assert abs(composed(0.5) - g2(0.5)) > 0.1


def test_gn_budget():
    with pytest.raises(BudgetExceeded):
        gn_build(P_I, 14)


def test_h1_closed_form():
    # (q^2 + j)^s = q^4 + 1 as well
    h1 = hn_build(P_J, 1)
    assert h1.n == 1
    assert [c.w for c in h1.hn.coeffs] == [1.0, 0.0, 0.0, 0.0, 1.0]


def test_hn_degree_law():
    for n in (2, 3, 5):
        it = hn_build(P_J, n)
        assert isinstance(it, GeneralIterate)
        assert it.hn.degree == 2 * 2 ** n
        assert it.hn.has_real_coeffs()


def test_hn_matches_gn_for_one_slice_input():
    # coefficients in one slice commute, so the bullet iterate restricts to
    # the ordinary slice iterate and h_n = g_n
    p_i = QPolynomial([Quaternion(0, 1, 0, 0), Quaternion(),
                       Quaternion.real(1.0)])
    for n in (1, 2, 3):
        hn = hn_build(p_i, n).hn.restrict_to_slice(UNIT_I)
        gn = gn_build(P_I, n).restrict_to_slice(UNIT_I)
        assert np.allclose(hn.coeffs, gn.coeffs, atol=1e-9)


def test_orbit_finite():
    # constant coefficient orbit of 0 under c -> c^2 + j cycles in {1, 2}
    assert orbit_finite(P_J, Quaternion.real(0.0), horizon=5)
    assert not orbit_finite(P_J, Quaternion.real(5.0), horizon=5)
    with pytest.raises(ValueError):
        orbit_finite(P_J, Quaternion.real(0.0), horizon=1)


def test_annulus_probes():
    probes = annulus_probes()
    assert len(probes) >= 100
    for q in probes:
        assert 1.1 - 1e-12 <= abs(q) <= 1.4 + 1e-12
        assert q.im_norm() > 0


def test_brolin3_gap_basics():
    assert brolin3_gap(P_J, 0.3, 0.3, 4) == 0.0
    g5 = brolin3_gap(P_J, 0.0, 1.0, 5)
    g3 = brolin3_gap(P_J, 0.0, 1.0, 3)
    assert 0.0 <= g5 < g3


def test_brolin3_gap_probe_on_fiber():
    # h_1 = q^4 + 1 sends q = 1 to 2; with a = 2 the only probe is on a fiber
    with pytest.raises(ProbeOnFiber):
        brolin3_gap(P_J, 2.0, 3.0, 1, probe_points=[Quaternion.real(1.0)])


def test_gn_pullback_measure_atoms():
    # g_1 = q^4 + 1 above 0: roots of q^4 = -1, two conjugate sphere pairs
    m = gn_pullback_measure(P_I, 0.0, 1)
    assert m.total_mass() == pytest.approx(1.0, abs=1e-9)
    alpha, rho, w = m.arrays()
    assert np.allclose(np.sort(alpha), [-2 ** -0.5, 2 ** -0.5], atol=1e-12)
    assert np.allclose(rho, 2 ** -0.5, atol=1e-12)
    assert np.allclose(w, 0.5)


def test_mu_prime_mass_and_distance():
    quad = sphere_quadrature(2)
    m = mu_prime_estimate(P_I, quad, 4)
    assert m.total_mass() == pytest.approx(1.0, abs=1e-9)
    mg = gn_pullback_measure(P_I, 0.0, 4)
    assert weak_distance(m, mg) < 0.05


def test_mu_prime_collapses_for_real_coeffs():
    # with real coefficients both conjugate halves coincide with nu_n
    from qbrolin.measures import brolin_pullback
    real = OneSlicePolynomial(ComplexPoly([-2.0, 0.0, 1.0]), UNIT_I)
    m = mu_prime_estimate(real, sphere_quadrature(1), 5)
    nu = brolin_pullback(QPolynomial.from_real([-2.0, 0.0, 1.0]), 0.0, 5)
    assert weak_distance(m, nu) < 0.02


def test_unit_transport_invariance():
    # the pullback cloud is shared across units J, so a rotated quadrature
    # changes nothing
    m1 = mu_prime_estimate(P_I, sphere_quadrature(2), 3)
    m2 = mu_prime_estimate(P_I, sphere_quadrature(2).rotated((1, 1, 0, 0.9)), 3)
    assert weak_distance(m1, m2) < 1e-12
