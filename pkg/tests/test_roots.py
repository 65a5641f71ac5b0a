import numpy as np
import pytest

from qbrolin.poly import ComplexPoly
from qbrolin.roots import all_roots, cluster_roots, quadratic_roots_many


def _poly_from_roots(roots):
    c = np.array([1.0 + 0j])
    for r in roots:
        c = np.convolve(c, [-r, 1.0])
    return c


def test_degree_one_and_two():
    assert np.allclose(all_roots([2.0, 1.0]), [-2.0])
    r = all_roots([-2.0, 0.0, 1.0])
    assert np.allclose(sorted(r.real), [-np.sqrt(2), np.sqrt(2)], atol=1e-14)


def test_random_polynomials_match_numpy():
    rng = np.random.default_rng(0)
    for _ in range(20):
        deg = int(rng.integers(3, 9))
        coeffs = rng.normal(size=deg + 1) + 1j * rng.normal(size=deg + 1)
        mine = all_roots(coeffs)
        ref = np.sort_complex(np.roots(coeffs[::-1]))
        assert np.allclose(np.sort_complex(mine), ref, atol=1e-7)


def test_multiple_root_certified():
    # (z - 1)^4: ill conditioned but must still pass the backward-error check
    coeffs = _poly_from_roots([1.0] * 4)
    r = all_roots(coeffs)
    assert np.allclose(r, 1.0, atol=1e-3)


def test_multiple_root_at_origin():
    r = all_roots([0.0, 0.0, 0.0, 0.0, 1.0])
    assert np.allclose(r, 0.0, atol=1e-7)


def test_huge_coefficients():
    # iterated quadratic: coefficients span many orders of magnitude
    p = ComplexPoly([-1.0, 0.0, 1.0]).iterate_poly(6)
    r = all_roots(p.coeffs)
    assert len(r) == 64
    # backward error against the growth envelope sum |c_k| max(1,|z|)^k
    k = np.arange(len(p.coeffs))
    env = np.sum(np.abs(p.coeffs)[None, :]
                 * np.maximum(np.abs(r), 1.0)[:, None] ** k[None, :], axis=1)
    assert np.max(np.abs(p(r)) / env) < 1e-9


def test_tiny_scale_roots():
    coeffs = _poly_from_roots([1e-8, 2e-8, -1e-8])
    r = all_roots(coeffs)
    assert np.allclose(np.sort(r.real), [-1e-8, 1e-8, 2e-8], atol=1e-12)


def test_quadratic_roots_many_matches_scalar():
    rng = np.random.default_rng(1)
    c0s = rng.normal(size=50) + 1j * rng.normal(size=50)
    c1, c2 = 0.3 - 0.2j, 1.0 + 0.5j
    batch = quadratic_roots_many(c0s, c1, c2)
    for c0, pair in zip(c0s, batch):
        ref = all_roots([c0, c1, c2])
        assert np.allclose(np.sort_complex(pair), ref, atol=1e-10)


def test_quadratic_roots_many_pure_square_root():
    out = quadratic_roots_many(np.array([-4.0 + 0j]), 0.0, 1.0)
    assert np.allclose(np.sort(out[0].real), [-2.0, 2.0])


def test_cluster_roots():
    roots = np.array([1.0, 1.0 + 1e-9, -1.0, 2.0 + 1e-9j])
    clusters = cluster_roots(roots, scale=1.0)
    assert [(round(c.real, 6), m) for c, m in clusters] == [
        (-1.0, 1), (1.0, 2), (2.0, 1)]


def test_cluster_roots_empty():
    assert cluster_roots(np.array([]), 1.0) == []


def test_zero_degree():
    assert len(all_roots([5.0])) == 0
