"""Dense polynomial kernels over Z/p^M used by the group-algebra modules.

Polynomials are plain lists of integer residues, index i holding the
coefficient of T^i.  Products go through Kronecker substitution (pack the
coefficient vector into one big integer, multiply once, unpack), which is
what keeps level-4 arithmetic at p = 5 fast enough for the randomized
round-trip suite.
"""

from __future__ import annotations

from .errors import NotDivisible


def poly_trim(coeffs):
    i = len(coeffs)
    while i > 0 and coeffs[i - 1] == 0:
        i -= 1
    return coeffs[:i]


def poly_add(a, b, modulus):
    n = max(len(a), len(b))
    out = [0] * n
    for i, c in enumerate(a):
        out[i] = c
    for i, c in enumerate(b):
        out[i] = (out[i] + c) % modulus
    return out


def poly_sub(a, b, modulus):
    n = max(len(a), len(b))
    out = [0] * n
    for i, c in enumerate(a):
        out[i] = c
    for i, c in enumerate(b):
        out[i] = (out[i] - c) % modulus
    return out


def poly_scale(a, c, modulus):
    c %= modulus
    return [(x * c) % modulus for x in a]


def _pack(coeffs, width_bytes):
    buf = bytearray(len(coeffs) * width_bytes)
    for i, c in enumerate(coeffs):
        buf[i * width_bytes:(i + 1) * width_bytes] = c.to_bytes(width_bytes, "little")
    return int.from_bytes(buf, "little")


def poly_mul(a, b, modulus):
    """Convolution of residue vectors, reduced mod modulus (no ring relation)."""
    a = poly_trim(list(a))
    b = poly_trim(list(b))
    if not a or not b:
        return []
    # every packed slot must hold min(len) * (modulus-1)^2 without carrying over
    max_slot = min(len(a), len(b)) * (modulus - 1) ** 2
    width_bytes = (max_slot.bit_length() + 8) // 8
    prod = _pack(a, width_bytes) * _pack(b, width_bytes)
    n_out = len(a) + len(b) - 1
    raw = prod.to_bytes(n_out * width_bytes + width_bytes, "little")
    out = []
    for i in range(n_out):
        chunk = raw[i * width_bytes:(i + 1) * width_bytes]
        out.append(int.from_bytes(chunk, "little") % modulus)
    return out


def poly_divmod_monic(num, den, modulus):
    """Quotient and remainder by a monic divisor; exact over Z/p^M."""
    den = poly_trim(list(den))
    if not den:
        raise ZeroDivisionError("division by zero polynomial")
    if den[-1] != 1:
        raise ValueError("divisor must be monic")
    rem = [c % modulus for c in num]
    d = len(den) - 1
    if len(rem) <= d:
        return [], rem
    quot = [0] * (len(rem) - d)
    for i in range(len(rem) - d - 1, -1, -1):
        c = rem[i + d]
        if c == 0:
            continue
        quot[i] = c
        for j in range(d + 1):
            rem[i + j] = (rem[i + j] - c * den[j]) % modulus
    return quot, poly_trim(rem[:d])


def poly_divide_exact(num, den, modulus, what="polynomial"):
    """Division known to be exact; raises NotDivisible otherwise."""
    quot, rem = poly_divmod_monic(num, den, modulus)
    if any(c % modulus for c in rem):
        raise NotDivisible(f"{what}: remainder is nonzero at working precision")
    return quot
