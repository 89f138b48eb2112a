import cmath
import math

import pytest
from hypothesis import given, strategies as st

from symsieve.arith import DomainError, moebius, num_divisors
from symsieve.characters import enumerate_characters, legendre_character
from symsieve.expsums import (gauss_sum, jacobi_sum, kloosterman, kloosterman_many,
                              kloosterman_p2_closed, kloosterman_p2_literal,
                              prime_power_vanishing_check, ramanujan_sum, ramanujan_sum_direct,
                              selberg_identity_check, shifted_jacobi_sum, weil_bound)


def brute_kloosterman(a, b, c):
    total = 0j
    for x in range(c):
        if math.gcd(x, c) == 1:
            xbar = pow(x, -1, c) if c > 1 else 0
            total += cmath.exp(2j * math.pi * ((a * x + b * xbar) % c) / c)
    return total


def test_kloosterman_examples():
    assert kloosterman(1, 1, 1) == 1
    assert abs(kloosterman(1, 1, 3) - (-1)) < 1e-12
    assert abs(kloosterman(1, 1, 2) - 1) < 1e-12
    with pytest.raises(DomainError):
        kloosterman(1, 1, 0)


@given(st.integers(-10**6, 10**6), st.integers(-10**6, 10**6), st.integers(1, 300))
def test_kloosterman_matches_brute_force(a, b, c):
    s = kloosterman(a, b, c)
    assert abs(s - brute_kloosterman(a, b, c)) < 1e-9
    assert abs(s.imag) < 1e-9


@given(st.integers(0, 500), st.integers(0, 500), st.integers(1, 500))
def test_kloosterman_symmetries(a, b, c):
    s = kloosterman(a, b, c)
    assert abs(s - kloosterman(b, a, c)) < 1e-9
    if math.gcd(b, c) == 1:
        # S(a, b; c) = S(ab, 1; c) for b invertible
        assert abs(s - kloosterman(a * b, 1, c)) < 1e-9


def test_kloosterman_many_matches_scalar():
    for c in (1, 2, 7, 12, 97, 360):
        avals = list(range(-3, 2 * c))
        many = kloosterman_many(avals, c)
        assert max(abs(many[i] - kloosterman(a, 1, c).real) for i, a in enumerate(avals)) < 1e-10


@given(st.integers(1, 10**4), st.integers(1, 10**4), st.sampled_from([5, 7, 11, 13, 97, 101]))
def test_weil_bound_at_primes(a, b, p):
    assert abs(kloosterman(a, b, p)) <= weil_bound(a, b, p) + 1e-9


def test_weil_bound_composite():
    for c in range(1, 200):
        for a in (1, 2, 6, 30):
            assert abs(kloosterman(a, 1, c)) <= weil_bound(a, 1, c) + 1e-9
    assert weil_bound(1, 1, 12) == num_divisors(12) * math.sqrt(12)


def test_p2_closed_form_matches_direct():
    for p in (3, 5, 7, 11, 13):
        for m in range(1, 8):
            for n in range(1, 8):
                if (m * n) % p:
                    assert abs(kloosterman(m * m, n * n, p * p) - kloosterman_p2_closed(m, n, p)) < 1e-9


def test_p2_closed_form_values():
    assert abs(kloosterman_p2_closed(1, 1, 3) - 6 * math.cos(4 * math.pi / 9)) < 1e-12
    assert abs(kloosterman(1, 1, 9) - 6 * math.cos(4 * math.pi / 9)) < 1e-12
    with pytest.raises(DomainError):
        kloosterman_p2_closed(3, 1, 3)
    with pytest.raises(DomainError):
        kloosterman_p2_closed(1, 1, 2)


def test_p2_with_phases_mod_p_disagrees():
    assert abs(kloosterman_p2_literal(1, 1, 3) - (-3.0)) < 1e-12
    assert abs(kloosterman(1, 1, 9) - kloosterman_p2_literal(1, 1, 3)) > 1


def test_selberg_examples():
    for c in range(1, 61):
        assert selberg_identity_check(1, 1, c).agree
    chk = selberg_identity_check(2, 2, 4)
    rhs = kloosterman(16, 1, 4) + 2 * kloosterman(4, 1, 2) + 4 * kloosterman(1, 1, 1)
    assert chk.agree and abs(chk.rhs - rhs) < 1e-12
    assert selberg_identity_check(6, 10, 12).agree


@given(st.integers(1, 30), st.integers(1, 30), st.integers(1, 200))
def test_selberg_identity_property(m, n, c):
    chk = selberg_identity_check(m, n, c)
    assert chk.deviation < 1e-8


def test_prime_power_vanishing():
    assert prime_power_vanishing_check(3, 1, 2)
    assert prime_power_vanishing_check(2, 2, 3)
    # outside the claim: e = 1
    assert abs(kloosterman(5, 1, 5)) > 0.5


@given(st.integers(1, 400), st.integers(-1000, 1000))
def test_ramanujan_sum(q, n):
    assert abs(ramanujan_sum(q, n) - ramanujan_sum_direct(q, n)) < 1e-9


def test_ramanujan_examples():
    assert ramanujan_sum(12, 0) == 4
    assert ramanujan_sum(3, 1) == moebius(3) == -1
    assert ramanujan_sum(4, 2) == -2


def test_gauss_sum():
    assert gauss_sum(enumerate_characters(1)[0]) == 1
    assert abs(gauss_sum(legendre_character(3)) - 1j * math.sqrt(3)) < 1e-12
    for chi in enumerate_characters(7)[1:]:
        assert abs(abs(gauss_sum(chi)) - math.sqrt(7)) < 1e-12
    for c in (8, 9, 15, 16, 45):
        for chi in enumerate_characters(c):
            if chi.conductor() == c:
                assert abs(abs(gauss_sum(chi)) - math.sqrt(c)) < 1e-10


def test_jacobi_sums():
    for p in (3, 5, 7, 11):
        triv = enumerate_characters(p)[0]
        assert abs(jacobi_sum(triv, triv) - (p - 2)) < 1e-12
    chi = next(x for x in enumerate_characters(5) if x.order == 4)
    assert abs(abs(jacobi_sum(chi.conj(), chi**2)) - math.sqrt(5)) < 1e-12
    leg = legendre_character(3)
    assert abs(shifted_jacobi_sum(leg) - (-leg(-1))) < 1e-12
    with pytest.raises(DomainError):
        jacobi_sum(leg, enumerate_characters(5)[0])


def test_shifted_jacobi_translation():
    for c in (5, 7, 9, 13, 25, 27):
        for chi in enumerate_characters(c):
            direct = shifted_jacobi_sum(chi)
            assert abs(direct - chi(-1) * jacobi_sum(chi.conj(), chi**2)) < 1e-10


def test_vanishing_when_modulus_shares_a_factor_of_w():
    # S(w^2, 1; g c) = 0 whenever 1 < g | w and (c, g) > 1
    from symsieve.arith import divisors
    for w in range(2, 61):
        for g in divisors(w)[1:]:
            for c in range(1, 61):
                if math.gcd(c, g) > 1:
                    assert abs(kloosterman(w * w, 1, g * c)) < 1e-8
