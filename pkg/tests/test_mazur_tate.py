import json
from fractions import Fraction

import pytest

from iwt.errors import (MissingSymbol, NonIntegralDenominator, OutOfRange,
                        SchemaError)
from iwt.iwasawa_algebra import (FormParams, LambdaElement, cyclotomic_phi,
                                 exact_divide_by_phi, lift_nu)
from iwt.mazur_tate import (build_theta, ingest_modular_symbols,
                            synthesize_queue, tame_sign, theta_sequence,
                            validate_queue)
from iwt.padic_core import log_gamma

M = 10


def minimal_document(p=3, values=None):
    symbols = []
    for a in range(1, p):
        plus, minus = ("1/1", "0/1") if values is None else values[a]
        symbols.append({"a": a, "N": 1, "plus": plus, "minus": minus})
    return {"p": p, "conductor": 11, "ap": 1, "eps_p": 1, "maxN": 1,
            "period_convention": "test", "symbols": symbols}


def test_minimal_roundtrip():
    table = ingest_modular_symbols(minimal_document())
    assert len(table.values) == 4
    assert table.symbol(1, 1, 1) == Fraction(1)
    assert table.symbol(2, 1, -1) == Fraction(0)


def test_missing_symbol_rejected():
    doc = minimal_document()
    doc["symbols"] = doc["symbols"][:1]
    with pytest.raises(MissingSymbol):
        ingest_modular_symbols(doc)


def test_non_integral_denominator():
    doc = minimal_document(values={1: ("1/3", "0/1"), 2: ("1/3", "0/1")})
    with pytest.raises(NonIntegralDenominator):
        ingest_modular_symbols(doc)
    # explicit override accepts a bounded p-denominator
    table = ingest_modular_symbols(doc, allow_denominator=3)
    assert table.denominator_scale == 3


def test_sign_symmetry_enforced():
    # [-a]^+ must equal [a]^+; break it and ingestion rejects
    doc = minimal_document(values={1: ("1/1", "1/1"), 2: ("2/1", "-1/1")})
    with pytest.raises(SchemaError):
        ingest_modular_symbols(doc)
    # [-a]^- must equal -[a]^-
    doc = minimal_document(values={1: ("1/1", "1/1"), 2: ("1/1", "1/1")})
    with pytest.raises(SchemaError):
        ingest_modular_symbols(doc)
    ok = minimal_document(values={1: ("1/1", "1/1"), 2: ("1/1", "-1/1")})
    ingest_modular_symbols(ok)


def test_bad_prime_and_conductor():
    doc = minimal_document()
    doc["p"] = 4
    with pytest.raises(SchemaError):
        ingest_modular_symbols(doc)
    doc = minimal_document()
    doc["conductor"] = 6
    with pytest.raises(SchemaError):
        ingest_modular_symbols(doc)


def test_level_zero_collapse():
    table = ingest_modular_symbols(minimal_document())
    theta = build_theta(table, 0, 0, M)
    assert theta.level == 0
    assert theta.coeffs[0] == 2  # [1/3]+ + [2/3]+ = 1 + 1


def test_all_ones_theta_counts_fibers():
    # with every plus symbol 1 and trivial tame character the element is
    # (p-1) * sum_t (1+T)^t; verify by exhaustive fiber count of log_gamma
    p, big_n = 3, 2
    doc = {"p": p, "conductor": 11, "ap": 1, "eps_p": 1, "maxN": big_n,
           "period_convention": "test", "symbols": []}
    for n_exp in (1, 2):
        for a in range(1, p ** n_exp):
            if a % p == 0:
                continue
            doc["symbols"].append({"a": a, "N": n_exp, "plus": "1/1", "minus": "0/1"})
    table = ingest_modular_symbols(doc)
    theta = build_theta(table, 1, 0, M)
    fibers = [0] * p
    for a in range(1, p ** big_n):
        if a % p == 0:
            continue
        fibers[log_gamma(a, p, big_n)] += 1
    assert fibers == [p - 1] * p
    want = LambdaElement.zero(p, 1, M)
    for t in range(p):
        want = want + fibers[t] * LambdaElement.unit_power(p, 1, M, t)
    assert theta == want


def test_build_theta_out_of_range_and_tame_sign():
    table = ingest_modular_symbols(minimal_document())
    with pytest.raises(OutOfRange):
        build_theta(table, 1, 0, M)     # needs N = 2 > maxN
    with pytest.raises(OutOfRange):
        build_theta(table, 0, 5, M)
    assert tame_sign(3, 0) == 1 and tame_sign(3, 1) == -1


def test_synthesized_queue_is_valid_and_deterministic():
    params = FormParams(3, -3, 1, M)
    a = synthesize_queue(42, params, 3)
    b = synthesize_queue(42, params, 3)
    c = synthesize_queue(43, params, 3)
    assert validate_queue(a).valid
    assert a.elements == b.elements
    assert a.elements[1] != c.elements[1]   # seed sensitivity at level 1


def test_queue_validation_localizes_faults():
    params = FormParams(3, -3, 1, M)
    seq = synthesize_queue(7, params, 3)
    broken = list(seq.elements)
    bumped = list(broken[2].coeffs)
    bumped[0] += 1
    broken[2] = LambdaElement(3, 2, M, bumped)
    from iwt.mazur_tate import QueueSequence
    report = validate_queue(QueueSequence(params=params, elements=tuple(broken)))
    assert not report.valid
    assert report.first_failure_level == 2
    assert report.residual_valuation == 0


def test_nu_image_is_divisible_by_top_cyclotomic():
    params = FormParams(5, 5, 1, M)
    seq = synthesize_queue(3, params, 2)
    nu = lift_nu(seq[1])
    q = exact_divide_by_phi(nu, 2)
    assert q * cyclotomic_phi(5, 2, 2, M) == nu


def test_e37a_table_and_queues(e37a_table):
    assert (e37a_table.p, e37a_table.ap, e37a_table.eps_p) == (3, -3, 1)
    assert e37a_table.lratio == Fraction(0)
    for tame in (0, 1):
        seq = theta_sequence(e37a_table, 4, tame, 12)
        assert validate_queue(seq).valid
