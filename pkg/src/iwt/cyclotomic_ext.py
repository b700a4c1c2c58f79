"""Exact arithmetic in Z_p[zeta_{p^j}], presented in pi = zeta - 1.

The ring is Z_p[X]/(E(X), p^M) with E(X) = Phi_{p^j}(1+X), an Eisenstein
polynomial of degree d = p^(j-1)(p-1); ord_p(pi) = 1/d.  Because the d
exponents t/d (t = 0..d-1) have pairwise distinct fractional parts, the
valuation of an element is read off its coefficient vector exactly:

    ord(sum c_t pi^t) = min_t (val_p(c_t) + t/d),

with no cancellation between distinct t.  An element whose residues all
vanish mod p^M has valuation at least M; we track constructed zeros with
a flag so that structural zeros report infinity while precision-level
zeros raise PrecisionExhausted.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .errors import (InvalidK, OutOfRange, PrecisionExhausted, RingMismatch,
                     ZeroInput)
from .iwasawa_algebra import LambdaElement, cyclotomic_phi
from .padic_core import ExtRational, PadicInt, ValMatrix
from .polyops import poly_mul, poly_trim


@lru_cache(maxsize=None)
def _eisenstein_modulus(p, j, modulus):
    """Coefficients of E(X) = Phi_{p^j}(1+X) mod p^M (monic, degree d)."""
    import math
    step = p ** (j - 1)
    deg = step * (p - 1)
    out = [0] * (deg + 1)
    for k in range(p):
        e = k * step
        c = 1
        for t in range(e + 1):
            out[t] = (out[t] + c) % modulus
            c = c * (e - t) // (t + 1)
    assert out[deg] % modulus == 1
    return tuple(out)


class EisensteinElement:
    """Element of Z_p[zeta_{p^j}] as a length-d vector of residues mod p^M."""

    __slots__ = ("p", "j", "precision", "coeffs", "exact_zero")

    def __init__(self, p, j, precision, coeffs, exact_zero=False):
        modulus = p ** precision
        d = p ** (j - 1) * (p - 1)
        coeffs = [c % modulus for c in coeffs]
        if len(coeffs) > d:
            coeffs = _reduce_mod_eisenstein(coeffs, p, j, modulus)
        coeffs.extend([0] * (d - len(coeffs)))
        self.p = p
        self.j = j
        self.precision = precision
        self.coeffs = tuple(coeffs)
        self.exact_zero = bool(exact_zero) and all(c == 0 for c in coeffs)

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, p, j, precision):
        return cls(p, j, precision, [], exact_zero=True)

    @classmethod
    def from_padic(cls, c, j):
        return cls(c.p, j, c.precision, [c.residue], exact_zero=c.residue == 0)

    @classmethod
    def constant(cls, p, j, precision, c):
        return cls(p, j, precision, [c])

    @classmethod
    def uniformizer(cls, p, j, precision, power=1):
        return cls(p, j, precision, [0] * power + [1])

    @classmethod
    def zeta(cls, p, j, precision):
        return cls(p, j, precision, [1, 1])

    # -- structure ---------------------------------------------------------

    @property
    def degree(self):
        return self.p ** (self.j - 1) * (self.p - 1)

    @property
    def modulus(self):
        return self.p ** self.precision

    def is_zero(self):
        return all(c == 0 for c in self.coeffs)

    def _check(self, other):
        if (self.p, self.j, self.precision) != (other.p, other.j, other.precision):
            raise RingMismatch(
                f"rings Z_{self.p}[zeta_{self.p}^{self.j}] at M={self.precision} and "
                f"Z_{other.p}[zeta_{other.p}^{other.j}] at M={other.precision}")

    def _coerce(self, other):
        if isinstance(other, EisensteinElement):
            self._check(other)
            return other
        if isinstance(other, int):
            return EisensteinElement.constant(self.p, self.j, self.precision, other)
        if isinstance(other, PadicInt):
            if other.p != self.p:
                raise RingMismatch("mixed primes")
            return EisensteinElement.constant(self.p, self.j, self.precision, other.residue)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        coeffs = [(a + b) % self.modulus for a, b in zip(self.coeffs, other.coeffs)]
        return EisensteinElement(self.p, self.j, self.precision, coeffs,
                                 exact_zero=self.exact_zero and other.exact_zero)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        coeffs = [(a - b) % self.modulus for a, b in zip(self.coeffs, other.coeffs)]
        return EisensteinElement(self.p, self.j, self.precision, coeffs,
                                 exact_zero=self.exact_zero and other.exact_zero)

    def __neg__(self):
        return EisensteinElement(self.p, self.j, self.precision,
                                 [-c for c in self.coeffs], exact_zero=self.exact_zero)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        prod = poly_mul(self.coeffs, other.coeffs, self.modulus)
        return EisensteinElement(self.p, self.j, self.precision, prod,
                                 exact_zero=self.exact_zero or other.exact_zero)

    __rmul__ = __mul__

    def __pow__(self, e):
        out = EisensteinElement.constant(self.p, self.j, self.precision, 1)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __eq__(self, other):
        if not isinstance(other, EisensteinElement):
            return NotImplemented
        return (self.p, self.j, self.precision, self.coeffs) == \
               (other.p, other.j, other.precision, other.coeffs)

    def __hash__(self):
        return hash((self.p, self.j, self.precision, self.coeffs))

    def __repr__(self):
        return f"EisensteinElement(p={self.p}, j={self.j}, {list(self.coeffs)})"

    def mul_by_pi(self):
        """Multiply by the uniformizer; O(d)."""
        mod = self.modulus
        E = _eisenstein_modulus(self.p, self.j, mod)
        top = self.coeffs[-1]
        shifted = [0] + list(self.coeffs[:-1])
        if top:
            shifted = [(c - top * e) % mod for c, e in zip(shifted, E[:-1])]
        return EisensteinElement(self.p, self.j, self.precision, shifted,
                                 exact_zero=self.exact_zero)

    # -- valuation ---------------------------------------------------------

    def valuation_floor(self):
        """(value, exact): the Newton minimum, or (M, False) if all residues vanish."""
        best = None
        for t, c in enumerate(self.coeffs):
            pc = PadicInt(self.p, c, self.precision)
            if pc.is_zero():
                continue
            v = Fraction(pc.valuation()) + Fraction(t, self.degree)
            if best is None or v < best:
                best = v
        if best is None:
            return Fraction(self.precision), False
        return best, True

    def ord(self):
        """Exact valuation as an ExtRational.

        Structural zeros report infinity; an element that merely vanishes
        mod p^M raises PrecisionExhausted.
        """
        if self.exact_zero:
            return ExtRational.infinity()
        value, exact = self.valuation_floor()
        if not exact:
            raise PrecisionExhausted(
                f"valuation not separable from >= {self.precision}")
        return ExtRational(value)


def _reduce_mod_eisenstein(coeffs, p, j, modulus):
    from .polyops import poly_divmod_monic
    _, rem = poly_divmod_monic(coeffs, list(_eisenstein_modulus(p, j, modulus)), modulus)
    return rem


def eval_lambda_at_zeta(x, j):
    """Ring homomorphism L_n -> Z_p[zeta_{p^j}] sending T to zeta - 1."""
    if j > x.level:
        raise OutOfRange(f"j={j} exceeds the element's level {x.level}")
    if j < 1:
        raise OutOfRange("j must be >= 1 (use at_zero for the trivial point)")
    acc = EisensteinElement.zero(x.p, j, x.precision)
    for c in reversed(x.coeffs):
        acc = acc.mul_by_pi() + int(c)
    return acc


def phi_at_zeta(p, i, j, precision):
    """Phi_{p^i}(zeta_{p^j}) = sum_{k<p} zeta^(k p^(i-1)), computed by powers."""
    zeta = EisensteinElement.zeta(p, j, precision)
    step = zeta ** (p ** (i - 1))
    acc = EisensteinElement.constant(p, j, precision, 1)
    term = EisensteinElement.constant(p, j, precision, 1)
    for _ in range(p - 1):
        term = term * step
        acc = acc + term
    return acc


def eisenstein_h_step(a, i, j, eps_p):
    """The 2x2 factor [[a, 1], [-eps * Phi_{p^i}(zeta_{p^j}), 0]]."""
    p, precision = a.p, a.precision
    one = EisensteinElement.constant(p, j, precision, 1)
    phi = phi_at_zeta(p, i, j, precision)
    return ((a, one), ((-eps_p) * phi, EisensteinElement.zero(p, j, precision)))


def _mat_mul(A, B):
    out = []
    for i in range(2):
        row = []
        for k in range(2):
            row.append(A[i][0] * B[0][k] + A[i][1] * B[1][k])
        out.append(tuple(row))
    return tuple(out)


def h_matrix(a, m, j, eps_p=1):
    """The exact product of the first m step matrices at T = zeta_{p^j} - 1."""
    if m < 1:
        raise OutOfRange("m must be >= 1")
    acc = eisenstein_h_step(a, 1, j, eps_p)
    for i in range(2, m + 1):
        acc = _mat_mul(acc, eisenstein_h_step(a, i, j, eps_p))
    return acc


def h_matrix_valuations(a, m, j, eps_p=1):
    """Entrywise exact valuations of the m-step matrix product at zeta_{p^j}.

    These are honest valuations of the full product, not the min-plus
    lower bound; cancellation in the upper-left entry is visible here.
    """
    mat = h_matrix(a, m, j, eps_p)
    return ValMatrix([[mat[i][k].ord() for k in range(2)] for i in range(2)])


def minimal_k(p, v):
    """Smallest k >= 1 with v >= p^(-k)/2; None for v in {0, infinity}."""
    if isinstance(v, ExtRational):
        if v.is_infinite:
            return None
        v = v.value
    v = Fraction(v)
    if v <= 0:
        return None if v == 0 else _raise_negative(v)
    k = 1
    while v < Fraction(1, 2 * p ** k):
        k += 1
    return k


def _raise_negative(v):
    raise ValueError(f"valuation must be >= 0, got {v}")


def v2_invariant(a, p, k, eps_p=1, precision=None):
    """ord(a^2 - eps * Phi_{p^2}(zeta_{p^(k+2)})), computed exactly.

    a may be an EisensteinElement of Z_p[zeta_{p^(k+2)}] or a PadicInt;
    k must be the minimal index for v = ord(a).
    """
    if isinstance(a, PadicInt):
        if precision is None:
            precision = a.precision
        a = EisensteinElement.from_padic(a, k + 2)
    if a.j != k + 2:
        raise RingMismatch(f"a must live in Z_p[zeta_{{p^{k + 2}}}], got j={a.j}")
    if a.is_zero():
        raise ZeroInput("a must be nonzero")
    v = a.ord()
    if minimal_k(p, v) != k:
        raise InvalidK(f"k={k} is not minimal for v={v}")
    phi = phi_at_zeta(p, 2, k + 2, a.precision)
    return (a * a - eps_p * phi).ord()
