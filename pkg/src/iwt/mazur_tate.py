"""Modular-symbol tables and the group-algebra elements built from them.

A table holds exact rationals [a/p^N]^+- for every residue a coprime to
p and every 1 <= N <= maxN.  From a fixed tame character the level-n
element is the weighted sum of (1+T)^log_gamma(a) over the residues mod
p^N, with N = n+1 for odd p and n+2 for p = 2.  Consecutive elements
satisfy the three-term compatibility

    pi(Theta_m) = ap * Theta_{m-1} - eps_p * nu(Theta_{m-2}),

which validate_queue checks to working precision and synthesize_queue
realizes for pseudorandom data.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .errors import (MissingSymbol, NonIntegralDenominator, OutOfRange,
                     SchemaError)
from .iwasawa_algebra import FormParams, LambdaElement, lift_nu, project_pi
from .padic_core import log_gamma, padic_from_rational, teichmuller


def _is_prime(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _parse_rational(text, where):
    try:
        num, _, den = str(text).partition("/")
        return Fraction(int(num), int(den) if den else 1)
    except (ValueError, ZeroDivisionError) as exc:
        raise SchemaError(f"{where}: bad rational {text!r}") from exc


@dataclass(frozen=True)
class ModularSymbolTable:
    p: int
    conductor: int
    ap: int
    eps_p: int
    maxN: int
    period_convention: str
    values: dict  # (a, N, sign) -> Fraction, sign in {+1, -1}
    lratio: Fraction | None = None
    denominator_scale: int = 1

    def symbol(self, a, big_n, sign):
        a %= self.p ** big_n
        try:
            return self.values[(a, big_n, sign)]
        except KeyError:
            raise MissingSymbol(f"no symbol for a={a}, N={big_n}, sign={sign:+d}")


def ingest_modular_symbols(document, allow_denominator=1):
    """Validate a symbols document and return the exact table.

    Rejects incomplete residue coverage, non p-integral denominators
    (beyond the explicit allow_denominator bound) and violations of the
    sign symmetry [-a/m]^+- = +-[a/m]^+-.
    """
    if not isinstance(document, dict):
        raise SchemaError("document must be a JSON object")
    for key in ("p", "conductor", "ap", "eps_p", "maxN", "symbols"):
        if key not in document:
            raise SchemaError(f"missing key {key!r}")
    p = document["p"]
    if not _is_prime(p):
        raise SchemaError(f"p={p} is not prime")
    conductor = int(document["conductor"])
    if conductor % p == 0:
        raise SchemaError(f"p={p} divides the conductor {conductor}; need a good prime")
    eps_p = int(document["eps_p"])
    if eps_p % p == 0:
        raise SchemaError("eps_p must be a p-adic unit")
    max_n = int(document["maxN"])
    if max_n < 1:
        raise SchemaError("maxN must be >= 1")

    values = {}
    for entry in document["symbols"]:
        if not isinstance(entry, dict) or not {"a", "N", "plus", "minus"} <= entry.keys():
            raise SchemaError(f"malformed symbol entry {entry!r}")
        big_n = int(entry["N"])
        if not 1 <= big_n <= max_n:
            raise SchemaError(f"symbol has N={big_n} outside 1..{max_n}")
        a = int(entry["a"]) % p ** big_n
        if a % p == 0:
            raise SchemaError(f"residue a={entry['a']} at N={big_n} is divisible by {p}")
        for sign, key in ((1, "plus"), (-1, "minus")):
            where = f"(a={a}, N={big_n}, sign={sign:+d})"
            value = _parse_rational(entry[key], where)
            den_p_part = 1
            den = value.denominator
            while den % p == 0:
                den //= p
                den_p_part *= p
            if den_p_part > 1 and allow_denominator % den_p_part != 0:
                raise NonIntegralDenominator(
                    f"{where}: denominator {value.denominator} is not a p-unit")
            if (a, big_n, sign) in values and values[(a, big_n, sign)] != value:
                raise SchemaError(f"{where}: conflicting duplicate entries")
            values[(a, big_n, sign)] = value

    for big_n in range(1, max_n + 1):
        for a in range(1, p ** big_n):
            if a % p == 0:
                continue
            for sign in (1, -1):
                if (a, big_n, sign) not in values:
                    raise MissingSymbol(f"no symbol for a={a}, N={big_n}, sign={sign:+d}")

    # [-a/m]^+ = [a/m]^+ and [-a/m]^- = -[a/m]^- hold for genuine symbols
    for (a, big_n, sign), value in values.items():
        mirrored = values[((-a) % p ** big_n, big_n, sign)]
        if mirrored != sign * value:
            raise SchemaError(
                f"sign symmetry violated at (a={a}, N={big_n}, sign={sign:+d})")

    lratio = document.get("lratio")
    if lratio is not None:
        lratio = _parse_rational(lratio, "lratio")

    return ModularSymbolTable(
        p=p, conductor=conductor, ap=int(document["ap"]), eps_p=eps_p,
        maxN=max_n, period_convention=str(document.get("period_convention", "")),
        values=values, lratio=lratio, denominator_scale=allow_denominator)


def tame_sign(p, tame_index):
    """omega^i(-1): +1 for even i, -1 for odd i."""
    return -1 if tame_index % 2 else 1


def level_exponent(p, n):
    """The modulus exponent N used at level n: n+1 for odd p, n+2 for p=2."""
    return n + 1 if p != 2 else n + 2


def build_theta(table, n, tame_index, precision):
    """The level-n element attached to the tame character omega^i.

    Sum over a in (Z/p^N)^* of [a/p^N]^sign * omega^i(a) * (1+T)^log_gamma(a),
    accumulated in the group basis and converted to the canonical form.
    """
    p = table.p
    big_n = level_exponent(p, n)
    if big_n > table.maxN:
        raise OutOfRange(f"level n={n} needs N={big_n} > maxN={table.maxN}")
    n_tame = 2 if p == 2 else p - 1
    if not 0 <= tame_index < n_tame:
        raise OutOfRange(f"tame index {tame_index} outside 0..{n_tame - 1}")
    sign = tame_sign(p, tame_index)
    modulus = p ** precision
    unit_coeffs = [0] * p ** n
    for a in range(1, p ** big_n):
        if a % p == 0:
            continue
        value = table.symbol(a, big_n, sign) * table.denominator_scale
        c = padic_from_rational(p, value, precision).residue
        if tame_index:
            c = c * pow(teichmuller(a, p, precision).residue, tame_index, modulus)
        t = log_gamma(a, p, big_n)
        unit_coeffs[t] = (unit_coeffs[t] + c) % modulus
    return LambdaElement.from_unit_basis(p, n, precision, unit_coeffs)


@dataclass(frozen=True)
class QueueSequence:
    """Elements Theta_0..Theta_n, index k at level k."""

    params: FormParams
    elements: tuple
    tame_index: int | None = None

    @property
    def top_level(self):
        return len(self.elements) - 1

    def __getitem__(self, level):
        return self.elements[level]


def theta_sequence(table, n, tame_index, precision):
    params = FormParams(table.p, table.ap, table.eps_p, precision)
    elements = tuple(build_theta(table, m, tame_index, precision)
                     for m in range(n + 1))
    return QueueSequence(params=params, elements=elements, tame_index=tame_index)


@dataclass(frozen=True)
class QueueReport:
    valid: bool
    first_failure_level: int | None
    residual_valuation: int | None


def validate_queue(seq):
    """Check the three-term relation at every level >= 2 at working precision."""
    params = seq.params
    for m in range(2, seq.top_level + 1):
        want = params.ap * seq[m - 1] - params.eps_p * lift_nu(seq[m - 2])
        defect = project_pi(seq[m]) - want
        if not defect.is_zero():
            residual = min(defect.coefficient(i).valuation()
                           for i in range(len(defect.coeffs)))
            return QueueReport(valid=False, first_failure_level=m,
                               residual_valuation=residual)
    return QueueReport(valid=True, first_failure_level=None, residual_valuation=None)


def synthesize_queue(seed, params, n, tame_index=None):
    """Deterministic pseudorandom tower satisfying the three-term relation.

    Theta_0, Theta_1 are uniform; each later element is the canonical
    lift of the forced projection plus a random multiple of
    (1+T)^(p^(m-1)) - 1.
    """
    p, M = params.p, params.precision
    modulus = p ** M
    rng = random.Random(seed)

    def random_coeffs(count):
        return [rng.randrange(modulus) for _ in range(count)]

    elements = [LambdaElement(p, 0, M, random_coeffs(1)),
                LambdaElement(p, 1, M, random_coeffs(p))]
    for m in range(2, n + 1):
        target = params.ap * elements[m - 1] - params.eps_p * lift_nu(elements[m - 2])
        lift = LambdaElement(p, m, M, list(target.coeffs))
        kernel_gen = (LambdaElement.unit_power(p, m, M, p ** (m - 1))
                      - LambdaElement.one(p, m, M))
        noise = LambdaElement(p, m, M, random_coeffs(p ** m - p ** (m - 1)))
        elements.append(lift + noise * kernel_gen)
    return QueueSequence(params=params, elements=tuple(elements),
                         tame_index=tame_index)
