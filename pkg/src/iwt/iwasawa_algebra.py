"""Arithmetic in the finite-level group algebras L_n = Z_p[T]/((1+T)^(p^n) - 1).

An element is stored by its canonical representative: the coefficient
vector of the unique degree < p^n lift to Z_p[T], residues mod p^M.
Products are reduced with the relation (1+T)^(p^n) = 1; because every
non-constant coefficient of the reduction polynomial is divisible by p,
the folding loop terminates after at most M rounds.

The module also provides the two transition maps between levels (the
projection and the fiber-sum lift), cyclotomic polynomials and their
completed variants, exact division by them, vanishing orders at p-power
roots of unity, mu/lambda extraction, and Newton-polygon valuations in
exponent coordinates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import (LevelMismatch, MixedPrime, OutOfRange,
                     PrecisionExhausted, ZeroInput)
from .padic_core import ExtRational, PadicInt
from .polyops import (poly_add, poly_divide_exact, poly_divmod_monic,
                      poly_mul, poly_scale, poly_sub, poly_trim)


@dataclass(frozen=True)
class FormParams:
    """Arithmetic data of a weight-two eigenform with Z_p coefficients.

    eps_p must be a p-adic unit; ap may be anything in Z_p (ap = 0 is the
    half-logarithm degeneration).
    """

    p: int
    ap: int
    eps_p: int
    precision: int

    def __post_init__(self):
        if self.eps_p % self.p == 0:
            raise ValueError("eps_p must be a unit")

    @property
    def modulus(self):
        return self.p ** self.precision

    def ap_valuation(self):
        """ord_p(ap) as an extended rational (infinity when ap = 0)."""
        if self.ap == 0:
            return ExtRational.infinity()
        e, r = 0, abs(self.ap)
        while r % self.p == 0:
            r //= self.p
            e += 1
        return ExtRational(e)


@dataclass(frozen=True)
class IwasawaInvariants:
    mu: Fraction
    lam: int
    stable: bool = False

    def pair(self):
        return (self.mu, self.lam)


@lru_cache(maxsize=None)
def _reduction_poly(p, n, modulus):
    # canonical representative of T^(p^n): -sum_{1<=k<p^n} C(p^n, k) T^k
    size = p ** n
    out = [0] * size
    for k in range(1, size):
        out[k] = (-math.comb(size, k)) % modulus
    return tuple(out)


@lru_cache(maxsize=None)
def _modulus_poly(p, n, modulus):
    # (1+T)^(p^n) - 1, the defining relation at level n
    size = p ** n
    out = [math.comb(size, k) % modulus for k in range(size + 1)]
    out[0] = 0
    return tuple(out)


@lru_cache(maxsize=None)
def _binomial_triangle(size, modulus):
    rows = [[1]]
    for s in range(1, size):
        prev = rows[-1]
        row = [1] * (s + 1)
        for j in range(1, s):
            row[j] = (prev[j - 1] + prev[j]) % modulus
        rows.append(row)
    return tuple(tuple(r) for r in rows)


class LambdaElement:
    """Element of Z_p[T]/((1+T)^(p^n) - 1) at precision M."""

    __slots__ = ("p", "level", "precision", "coeffs")

    def __init__(self, p, level, precision, coeffs):
        size = p ** level
        modulus = p ** precision
        coeffs = [c % modulus for c in coeffs]
        if len(coeffs) > size:
            coeffs = _reduce(coeffs, p, level, modulus)
        coeffs.extend([0] * (size - len(coeffs)))
        self.p = p
        self.level = level
        self.precision = precision
        self.coeffs = tuple(coeffs)

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, p, level, precision):
        return cls(p, level, precision, [])

    @classmethod
    def one(cls, p, level, precision):
        return cls(p, level, precision, [1])

    @classmethod
    def constant(cls, p, level, precision, c):
        if isinstance(c, PadicInt):
            c = c.residue
        return cls(p, level, precision, [c])

    @classmethod
    def monomial(cls, p, level, precision, degree, c=1):
        coeffs = [0] * degree + [c]
        return cls(p, level, precision, coeffs)

    @classmethod
    def unit_power(cls, p, level, precision, s):
        """(1+T)^s in the quotient ring; s may be any integer."""
        s %= p ** level
        modulus = p ** precision
        coeffs, c = [], 1
        for j in range(s + 1):
            coeffs.append(c % modulus)
            c = c * (s - j) // (j + 1)
        return cls(p, level, precision, coeffs)

    @classmethod
    def from_unit_basis(cls, p, level, precision, unit_coeffs):
        """Element sum_s d_s (1+T)^s from the group-basis vector d."""
        modulus = p ** precision
        size = p ** level
        tri = _binomial_triangle(size, modulus)
        out = [0] * size
        for s, d in enumerate(unit_coeffs):
            d %= modulus
            if d == 0:
                continue
            row = tri[s]
            for j in range(s + 1):
                out[j] = (out[j] + d * row[j]) % modulus
        return cls(p, level, precision, out)

    # -- views -------------------------------------------------------------

    @property
    def modulus(self):
        return self.p ** self.precision

    def is_zero(self):
        return all(c == 0 for c in self.coeffs)

    def coefficient(self, i):
        return PadicInt(self.p, self.coeffs[i], self.precision)

    def at_zero(self):
        """Value of the canonical representative at T = 0."""
        return PadicInt(self.p, self.coeffs[0], self.precision)

    def to_unit_basis(self):
        """Coefficients d with self = sum_s d_s (1+T)^s, s < p^n."""
        modulus = self.modulus
        size = self.p ** self.level
        tri = _binomial_triangle(size, modulus)
        out = [0] * size
        for j in range(size - 1, -1, -1):
            c = self.coeffs[j]
            if c == 0:
                continue
            # T^j = sum_s C(j, s) (-1)^(j-s) (1+T)^s
            row = tri[j]
            for s in range(j + 1):
                term = c * row[s]
                if (j - s) % 2:
                    term = -term
                out[s] = (out[s] + term) % modulus
        return out

    # -- ring structure ----------------------------------------------------

    def _check(self, other):
        if self.p != other.p:
            raise MixedPrime(f"primes {self.p} and {other.p}")
        if self.level != other.level:
            raise LevelMismatch(f"levels {self.level} and {other.level}")
        if self.precision != other.precision:
            raise ValueError("operands have different precision")

    def __add__(self, other):
        if not isinstance(other, LambdaElement):
            return NotImplemented
        self._check(other)
        return LambdaElement(self.p, self.level, self.precision,
                             poly_add(list(self.coeffs), list(other.coeffs), self.modulus))

    def __sub__(self, other):
        if not isinstance(other, LambdaElement):
            return NotImplemented
        self._check(other)
        return LambdaElement(self.p, self.level, self.precision,
                             poly_sub(list(self.coeffs), list(other.coeffs), self.modulus))

    def __neg__(self):
        return LambdaElement(self.p, self.level, self.precision,
                             [-c for c in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, (int, PadicInt)):
            c = other.residue if isinstance(other, PadicInt) else other
            return LambdaElement(self.p, self.level, self.precision,
                                 poly_scale(list(self.coeffs), c, self.modulus))
        if not isinstance(other, LambdaElement):
            return NotImplemented
        self._check(other)
        prod = poly_mul(self.coeffs, other.coeffs, self.modulus)
        return LambdaElement(self.p, self.level, self.precision, prod)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, LambdaElement):
            return NotImplemented
        return (self.p, self.level, self.precision, self.coeffs) == \
               (other.p, other.level, other.precision, other.coeffs)

    def __hash__(self):
        return hash((self.p, self.level, self.precision, self.coeffs))

    def __repr__(self):
        return (f"LambdaElement(p={self.p}, n={self.level}, "
                f"M={self.precision}, {list(self.coeffs)})")


def _reduce(coeffs, p, level, modulus):
    """Fold degrees >= p^n with T^(p^n) -> its canonical representative.

    Each round multiplies the overflowing part by coefficients divisible
    by p, so at most M rounds are needed; the guard is a hard error.
    """
    size = p ** level
    rep = list(_reduction_poly(p, level, modulus))
    rounds = 0
    coeffs = poly_trim([c % modulus for c in coeffs])
    while len(coeffs) > size:
        low, high = coeffs[:size], coeffs[size:]
        coeffs = poly_trim(poly_add(low, poly_mul(high, rep, modulus), modulus))
        rounds += 1
        if rounds > 8 * 64:  # precision is bounded well below this
            raise RuntimeError("ring reduction failed to terminate")
    return coeffs


# ---------------------------------------------------------------------------
# Level maps
# ---------------------------------------------------------------------------

def project_pi(x):
    """Natural projection to level n-1 (canonical representative reduced)."""
    if x.level == 0:
        raise LevelMismatch("level 0 has no lower level")
    target = x.level - 1
    _, rem = poly_divmod_monic(list(x.coeffs),
                               list(_modulus_poly(x.p, target, x.modulus)),
                               x.modulus)
    return LambdaElement(x.p, target, x.precision, rem)


def lift_nu(x):
    """Fiber-sum lift to level n+1: multiply any lift by Phi_{p^(n+1)}.

    Well-defined because Phi_{p^(n+1)}(1+T) * ((1+T)^(p^n) - 1) is the
    defining relation above; satisfies project_pi(lift_nu(x)) = p * x.
    """
    target = x.level + 1
    lifted = LambdaElement(x.p, target, x.precision, list(x.coeffs))
    return lifted * cyclotomic_phi(x.p, target, target, x.precision)


# ---------------------------------------------------------------------------
# Cyclotomic polynomials and exact division
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _phi_coeffs(p, i, modulus):
    # Phi_{p^i}(1+T) = sum_{k<p} (1+T)^(k p^(i-1)), degree p^(i-1)(p-1)
    step = p ** (i - 1)
    deg = step * (p - 1)
    out = [0] * (deg + 1)
    for k in range(p):
        e = k * step
        c = 1
        for j in range(e + 1):
            out[j] = (out[j] + c) % modulus
            c = c * (e - j) // (j + 1)
    return tuple(out)


def half_twist_exponent(p, i):
    """The exponent e = p^(i-1)(p-1)/2 used by the completed variant."""
    return p ** (i - 1) * (p - 1) // 2


def cyclotomic_phi(p, i, level, precision, hatted=False):
    """Phi_{p^i}(1+T) in the level-n ring; completed variant on request.

    The completed variant divides by (1+T)^e with e = p^(i-1)(p-1)/2,
    realized as multiplication by (1+T)^(p^n - e); for p = 2, i = 1 the
    two variants coincide.
    """
    if not 1 <= i <= level:
        raise OutOfRange(f"need 1 <= i <= n, got i={i}, n={level}")
    modulus = p ** precision
    phi = LambdaElement(p, level, precision, list(_phi_coeffs(p, i, modulus)))
    if not hatted or (p == 2 and i == 1):
        return phi
    return phi * LambdaElement.unit_power(p, level, precision, -half_twist_exponent(p, i))


def exact_divide_by_phi(x, i, hatted=False):
    """Exact quotient of the canonical representative by Phi_{p^i}.

    Phi is monic, so no precision is lost.  The completed variant
    post-multiplies by (1+T)^e.  Raises NotDivisible when the remainder
    is nonzero mod p^M.
    """
    if not 1 <= i <= x.level:
        raise OutOfRange(f"need 1 <= i <= n, got i={i}, n={x.level}")
    quot = poly_divide_exact(list(x.coeffs), list(_phi_coeffs(x.p, i, x.modulus)),
                             x.modulus, what=f"division by Phi_{{p^{i}}}")
    out = LambdaElement(x.p, x.level, x.precision, quot)
    if hatted and not (x.p == 2 and i == 1):
        out = out * LambdaElement.unit_power(x.p, x.level, x.precision,
                                             half_twist_exponent(x.p, i))
    return out


def vanishing_order(x, m):
    """Multiplicity of Phi_{p^m} in the canonical representative (T for m=0).

    Equals the vanishing multiplicity at every primitive p^m-th root of
    unity, independent of the chosen root.
    """
    if m > x.level:
        raise OutOfRange(f"m={m} exceeds level {x.level}")
    if x.is_zero():
        raise ZeroInput("vanishing order of 0 is undefined at finite precision")
    if m == 0:
        divisor = [0, 1]
    else:
        divisor = list(_phi_coeffs(x.p, m, x.modulus))
    order = 0
    poly = list(x.coeffs)
    while True:
        quot, rem = poly_divmod_monic(poly, divisor, x.modulus)
        if poly_trim(rem):
            return order
        order += 1
        poly = quot
        if not poly_trim(poly):
            # can only happen on zero input, which was excluded
            return order


def iwasawa_invariants(x):
    """mu = least coefficient valuation, lambda = first index attaining it."""
    best_mu, best_idx = None, None
    for idx in range(len(x.coeffs)):
        c = x.coefficient(idx)
        if c.is_zero():
            continue
        v = c.valuation()
        if best_mu is None or v < best_mu:
            best_mu, best_idx = v, idx
    if best_mu is None:
        raise PrecisionExhausted("all coefficients vanish mod p^M")
    return IwasawaInvariants(mu=Fraction(best_mu), lam=best_idx)


def newton_vr(x, s):
    """min_i (val(c_i) + i*s): the polygon value at radius p^(-s), s > 0."""
    s = Fraction(s)
    if s <= 0:
        raise ValueError("s must be positive")
    if x.is_zero():
        raise ZeroInput("Newton valuation of 0 is undefined at finite precision")
    best = None
    for i in range(len(x.coeffs)):
        c = x.coefficient(i)
        if c.is_zero():
            continue
        v = Fraction(c.valuation()) + i * s
        if best is None or v < best:
            best = v
    if best >= x.precision:
        raise PrecisionExhausted("polygon minimum is not certified below p^M")
    return ExtRational(best)


def substitute_inverse(x):
    """The ring automorphism (1+T) -> (1+T)^(-1); an involution."""
    size = x.p ** x.level
    d = x.to_unit_basis()
    flipped = [d[0]] + [d[size - s] for s in range(1, size)]
    return LambdaElement.from_unit_basis(x.p, x.level, x.precision, flipped)
