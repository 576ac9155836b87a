from fractions import Fraction

import pytest

from vhss.errors import ParameterError
from vhss.params import (REFERENCE_ROWS, ParamRequest, correctness_bound, ddec_success_bound,
                         derive_params, format_table, parse_int_expr, profile,
                         reference_profiles, tiny_pke_params, toy_params)

ROWS = [(2, 4096, 66, 153), (2**16, 4096, 81, 183), (2**32, 8192, 99, 220),
        (2**64, 8192, 131, 284), (2**128, 16384, 197, 417), (2**256, 16384, 325, 673)]


@pytest.mark.parametrize("b_max,n,lg_p,lg_q", ROWS)
def test_rows_reproduce(b_max, n, lg_p, lg_q):
    prm = derive_params(ParamRequest(b_max=b_max))
    assert prm.n == n
    assert prm.p == 2**lg_p
    assert prm.q == 2**lg_q
    assert prm.q % prm.p == 0
    assert prm.h_sk == n // 2 and prm.b_err == 64 and prm.b_sk == 1
    assert prm.b_ct == 64 * (n + 1)
    assert prm.r == b_max


def test_q_is_minimal():
    for prm in reference_profiles():
        rhs = 2 ** (prm.kappa + 3) * prm.p * prm.n**2 * prm.b_max * prm.b_ct
        assert prm.q >= rhs and prm.q // 2 < rhs


def test_profiles_and_security_levels():
    rows = reference_profiles()
    assert len(rows) == 6
    assert [r.security for r in rows] == [117.1, 86.5, 198.7, 128.9, 214.0, 96.7]
    assert derive_params(ParamRequest(b_max=2**128)).security == 214.0
    assert derive_params(ParamRequest(b_max=2**32, kappa=30)).security is None
    assert "  673" in format_table(rows)


def test_unknown_b_max_needs_n():
    with pytest.raises(ParameterError):
        derive_params(ParamRequest(b_max=12345))
    prm = derive_params(ParamRequest(b_max=12345, n=1024))
    assert prm.p & (prm.p - 1) == 0
    with pytest.raises(ParameterError):
        ParamRequest(b_max=1)


def test_correctness_bound_row_b2():
    prm = derive_params(ParamRequest(b_max=2))
    bound = correctness_bound(prm, 1)
    assert isinstance(bound, Fraction)
    assert bound >= 1 - Fraction(1, 2**35)
    n, p, q = prm.n, prm.p, prm.q
    manual = (1 - Fraction(n * 3, q) - 4 * n * n * 2 * (Fraction(prm.b_ct * p, q) + Fraction(1, p))
              - 4 * n * (Fraction(p, q) + Fraction(1, p)))
    assert bound == manual


def test_correctness_bound_monotone():
    prm = toy_params()
    vals = [correctness_bound(prm, s) for s in range(1, 101)]
    assert all(a > b for a, b in zip(vals, vals[1:]))
    with pytest.raises(ParameterError):
        correctness_bound(prm, 0)


def test_toy_and_tiny_profiles():
    toy = toy_params()
    assert (toy.n, toy.p.bit_length() - 1, toy.q.bit_length() - 1) == (8, 79, 170)
    assert toy.r == 16 and toy.b_add == 4
    tiny = tiny_pke_params()
    assert (tiny.n, tiny.p, tiny.q, tiny.h_sk, tiny.sigma, tiny.r) == (8, 2**10, 2**30, 4, 3, 16)
    assert profile("toy:7").r == 7
    assert profile("table2:2^32").n == 8192
    with pytest.raises(ParameterError):
        profile("huge")


def test_ddec_bound_formula():
    tiny = tiny_pke_params()
    b = ddec_success_bound(tiny, 3, 72)
    n, p, q = 8, 2**10, 2**30
    assert b == 1 - n * (Fraction(n * 3 * tiny.b_ct * p, q) + Fraction(72, p) + Fraction(p, q)
                         + Fraction(1, p))


def test_parse_int_expr():
    assert parse_int_expr("2^16") == parse_int_expr("2**16") == parse_int_expr("65536") == 65536
    assert parse_int_expr("0x10") == 16


def test_reference_rows_keys():
    assert sorted(REFERENCE_ROWS) == [r[0] for r in ROWS]
