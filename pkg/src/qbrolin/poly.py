"""Polynomials with quaternionic right coefficients: q |-> sum q^n a_n.

Implements the star product (coefficient convolution), slice conjugate,
symmetrization f^s = f^c * f, slice derivative, bullet composition, and
restriction of one-slice polynomials to their complex plane.

Coefficient convention is right coefficients q^n a_n throughout; the test
suite locks the orientation ((q i)*(q j) has q^2 coefficient ij = k).
"""

from __future__ import annotations

import numpy as np

from .errors import CoefficientOffSlice, ZeroDivisor
from .policy import DEFAULT, NumericPolicy
from .quat import ImaginaryUnit, Quaternion, slice_decompose
from . import roots as _roots

__all__ = ["QPolynomial", "ComplexPoly", "critical_points_slice"]


class QPolynomial:
    """Finite right-coefficient list, ascending degree, trailing zeros trimmed.

    The zero polynomial is the empty list. Trimming removes exact zeros only:
    near-zero leading coefficients are kept because the degree drives d^-n
    normalizations downstream.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        coeffs = [c if isinstance(c, Quaternion) else Quaternion.real(c)
                  for c in coeffs]
        while coeffs and coeffs[-1] == Quaternion():
            coeffs.pop()
        self.coeffs = tuple(coeffs)

    @staticmethod
    def from_real(values):
        return QPolynomial([Quaternion.real(v) for v in values])

    @staticmethod
    def identity():
        """The polynomial q."""
        return QPolynomial([Quaternion(), Quaternion.real(1.0)])

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def __eq__(self, other):
        return isinstance(other, QPolynomial) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"QPolynomial(deg={self.degree})"

    def __add__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [Quaternion()] * (n - len(self.coeffs))
        b = list(other.coeffs) + [Quaternion()] * (n - len(other.coeffs))
        return QPolynomial([x + y for x, y in zip(a, b)])

    def __sub__(self, other):
        return self + QPolynomial([-c for c in other.coeffs])

    def eval(self, q: Quaternion) -> Quaternion:
        """sum q^n a_n: powers of q multiply coefficients from the left."""
        acc = Quaternion()
        power = Quaternion.real(1.0)
        for a in self.coeffs:
            acc = acc + power * a
            power = power * q
        return acc

    def star_mul(self, other: "QPolynomial") -> "QPolynomial":
        """(f*g) by coefficient convolution with order a_j b_k."""
        if self.is_zero() or other.is_zero():
            return QPolynomial([])
        out = [Quaternion()] * (len(self.coeffs) + len(other.coeffs) - 1)
        for j, a in enumerate(self.coeffs):
            for k, b in enumerate(other.coeffs):
                out[j + k] = out[j + k] + a * b
        return QPolynomial(out)

    def conj(self) -> "QPolynomial":
        """Coefficient-wise quaternionic conjugation (the slice conjugate)."""
        return QPolynomial([c.conj() for c in self.coeffs])

    def symmetrize(self) -> "QPolynomial":
        """f^s = f^c * f: slice preserving, all coefficients real."""
        return self.conj().star_mul(self)

    def star_power(self, n: int) -> "QPolynomial":
        """n-fold star power by repeated convolution (w^{*0} = 1)."""
        acc = QPolynomial([Quaternion.real(1.0)])
        for _ in range(n):
            acc = acc.star_mul(self)
        return acc

    def star_conjugation_point(self, q: Quaternion) -> Quaternion:
        """T_f(q) = f(q)^-1 q f(q); requires f(q) != 0."""
        fq = self.eval(q)
        if fq.norm_sq() == 0.0:
            raise ZeroDivisor("T_f undefined where f(q) = 0")
        return fq.inverse() * q * fq

    def bullet_compose(self, w: "QPolynomial") -> "QPolynomial":
        """(self . w) = sum_n w^{*n} * a_n with a_n the coefficients of self."""
        acc = QPolynomial([])
        power = QPolynomial([Quaternion.real(1.0)])
        for a in self.coeffs:
            acc = acc + power.star_mul(QPolynomial([a]))
            power = power.star_mul(w)
        return acc

    def slice_derivative(self) -> "QPolynomial":
        """sum n q^{n-1} a_n (formal derivative, right coefficients)."""
        return QPolynomial([c * float(n) for n, c in enumerate(self.coeffs)][1:])

    def has_real_coeffs(self, tol=1e-12):
        return all(c.im_norm() <= tol for c in self.coeffs)

    def max_imag_coeff(self):
        return max((c.im_norm() for c in self.coeffs), default=0.0)

    def restrict_to_slice(self, unit: ImaginaryUnit,
                          policy: NumericPolicy = DEFAULT) -> "ComplexPoly":
        """Identify C_I with C and return the restricted complex polynomial.

        Every coefficient must lie in C_I (off-plane component below
        policy.off_slice_tol), else CoefficientOffSlice with the first
        offending index.
        """
        out = []
        for idx, c in enumerate(self.coeffs):
            proj = c.x * unit.x + c.y * unit.y + c.z * unit.z
            off2 = (c.x - proj * unit.x) ** 2 + (c.y - proj * unit.y) ** 2 \
                + (c.z - proj * unit.z) ** 2
            off = off2 ** 0.5
            if off > policy.off_slice_tol * max(1.0, abs(c)):
                raise CoefficientOffSlice(idx, off)
            out.append(complex(c.w, proj))
        return ComplexPoly(out)

    def to_json(self):
        return {"coeffs": [c.to_json() for c in self.coeffs]}

    @staticmethod
    def from_json(data):
        return QPolynomial([Quaternion.from_json(c) for c in data["coeffs"]])


class ComplexPoly:
    """Complex polynomial, ascending coefficients, for one-slice work."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        coeffs = np.asarray(coeffs, dtype=complex)
        n = len(coeffs)
        while n > 0 and coeffs[n - 1] == 0:
            n -= 1
        self.coeffs = coeffs[:n].copy()
        self.coeffs.setflags(write=False)

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def __repr__(self):
        return f"ComplexPoly(deg={self.degree})"

    def __call__(self, z):
        acc = np.zeros_like(np.asarray(z, dtype=complex))
        for c in self.coeffs[::-1]:
            acc = acc * z + c
        if np.ndim(z) == 0:
            return complex(acc)
        return acc

    def derivative(self) -> "ComplexPoly":
        if self.degree < 1:
            return ComplexPoly([])
        return ComplexPoly(self.coeffs[1:] * np.arange(1, len(self.coeffs)))

    def compose(self, inner: "ComplexPoly") -> "ComplexPoly":
        """self(inner(z)) by Horner over polynomial arithmetic."""
        polymul = np.polynomial.polynomial.polymul
        acc = np.zeros(1, dtype=complex)
        for c in self.coeffs[::-1]:
            acc = np.asarray(polymul(acc, inner.coeffs), dtype=complex)
            acc = np.atleast_1d(acc).copy()
            acc[0] += c
        return ComplexPoly(acc)

    def iterate_poly(self, n: int) -> "ComplexPoly":
        """Coefficients of the n-fold composition self^n."""
        acc = ComplexPoly([0.0, 1.0])
        for _ in range(n):
            acc = self.compose(acc)
        return acc

    def shifted(self, w) -> "ComplexPoly":
        """self - w, for fiber solves."""
        c = self.coeffs.copy()
        c[0] -= w
        return ComplexPoly(c)

    def conj_coeffs(self) -> "ComplexPoly":
        return ComplexPoly(np.conj(self.coeffs))

    def is_real(self, tol=1e-12):
        return bool(np.all(np.abs(self.coeffs.imag) <= tol))

    def lift(self, unit: ImaginaryUnit) -> QPolynomial:
        """Lift back to a QPolynomial with coefficients in C_I."""
        return QPolynomial([
            Quaternion(c.real, c.imag * unit.x, c.imag * unit.y, c.imag * unit.z)
            for c in self.coeffs
        ])

    def roots(self, policy: NumericPolicy = DEFAULT):
        return _roots.all_roots(self.coeffs, policy)

    def to_json(self):
        return {"coeffs": [[c.real, c.imag] for c in self.coeffs]}

    @staticmethod
    def from_json(data):
        return ComplexPoly([complex(re, im) for re, im in data["coeffs"]])


def critical_points_slice(f: QPolynomial, unit: ImaginaryUnit,
                          policy: NumericPolicy = DEFAULT):
    """Roots (with multiplicity, as a flat array) of d_c f restricted to C_I."""
    df = f.slice_derivative().restrict_to_slice(unit, policy)
    return df.roots(policy)
