import cmath
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from symsieve.arith import DomainError, euler_phi
from symsieve.characters import (DirichletCharacter, character_group, classify, conductor_scan,
                                 enumerate_characters, factorize_character, induce, is_real,
                                 legendre_character, local_group, primitive_characters, square)

moduli = st.integers(1, 400)


def character_of_order(c, order):
    return next(chi for chi in enumerate_characters(c) if chi.order == order)


def test_modulus_one():
    chars = enumerate_characters(1)
    assert len(chars) == 1
    assert chars[0](0) == 1 and chars[0](7) == 1


def test_modulus_five():
    chars = enumerate_characters(5)
    assert len(chars) == 4
    gen = character_of_order(5, 4)
    vals = {complex(round(gen(2).real), round(gen(2).imag)) ** k for k in range(4)}
    assert vals == {1, 1j, -1, -1j}


def test_modulus_eight_is_real():
    chars = enumerate_characters(8)
    assert len(chars) == 4
    assert all(is_real(chi) for chi in chars)
    assert all(abs(chi(n).imag) < 1e-15 for chi in chars for n in range(8))


def test_rejects_zero_modulus():
    with pytest.raises(DomainError):
        enumerate_characters(0)


def test_evaluation_examples():
    assert DirichletCharacter.trivial(12)(5) == 1
    assert all(chi(4) == 0 for chi in enumerate_characters(12))
    assert legendre_character(3)(2) == -1


@given(moduli)
def test_group_size_and_trivial_first(c):
    chars = enumerate_characters(c)
    assert len(chars) == euler_phi(c)
    assert chars[0].is_trivial()
    assert [chi.index for chi in chars] == list(range(len(chars)))


@given(moduli)
def test_orthogonality(c):
    # rows of the value matrix over the units are orthogonal with norm phi(c)
    n = np.array([u for u in range(c) if math.gcd(u, c) == 1] or [0])
    V = character_group(c).value_matrix(n)
    assert np.allclose(V @ V.conj().T, euler_phi(c) * np.eye(V.shape[0]), atol=1e-9)


@given(moduli, st.integers(0, 10**6), st.integers(0, 10**6), st.data())
def test_completely_multiplicative_and_periodic(c, a, b, data):
    chi = DirichletCharacter.from_index(c, data.draw(st.integers(0, euler_phi(c) - 1)))
    assert abs(chi(a * b) - chi(a) * chi(b)) < 1e-12
    assert abs(chi(a + c) - chi(a)) < 1e-12
    assert (chi(a) == 0) == (math.gcd(a, c) > 1)


@given(moduli, st.data())
def test_value_matrix_matches_pointwise(c, data):
    idx = data.draw(st.integers(0, euler_phi(c) - 1))
    chi = DirichletCharacter.from_index(c, idx)
    V = character_group(c).value_matrix(np.arange(c))
    assert np.allclose(V[idx], [chi(n) for n in range(c)], atol=1e-12)
    assert np.allclose(chi.values(), V[idx], atol=1e-12)


def test_conductor_examples():
    assert DirichletCharacter.trivial(12).conductor() == 1
    assert induce(legendre_character(3), 9).conductor() == 3
    assert all(chi.conductor() == 5 for chi in enumerate_characters(5)[1:])


@pytest.mark.parametrize("c", list(range(1, 121)) + [128, 243, 625, 720, 1000])
def test_conductor_matches_definition_scan(c):
    for chi in enumerate_characters(c):
        assert chi.conductor() == conductor_scan(chi)


def test_local_conductor_exponents_match_per_character():
    for p, k in [(2, 1), (2, 2), (2, 3), (2, 6), (3, 1), (3, 4), (5, 3), (7, 2)]:
        g = local_group(p, k)
        fast = g.conductor_exponents()
        real = g.real_mask()
        for chi in enumerate_characters(p**k):
            lc = chi.components[0]
            assert fast[chi.index] == lc.conductor_exponent()
            assert real[chi.index] == is_real(chi)


def test_number_of_primitive_characters():
    # the count is multiplicative with value p^k - 2p^(k-1) + p^(k-2) at p^k, k >= 2
    def count(c):
        total = 1
        for p in (q for q in range(2, c + 1) if c % q == 0 and all(q % r for r in range(2, q))):
            k = 0
            while c % p == 0:
                c //= p
                k += 1
            total *= p - 2 if k == 1 else p**k - 2 * p ** (k - 1) + p ** (k - 2)
        return total
    for c in range(1, 200):
        assert len(primitive_characters(c)) == count(c)


def test_classify_examples():
    assert classify(DirichletCharacter.trivial(40)).kind == "trivial"
    cls = classify(induce(legendre_character(3), 27))
    assert cls.kind == "semi-primitive" and cls.conductor == 3
    mixed = induce(legendre_character(3), 15)
    assert classify(mixed).kind == "mixed"
    assert classify(character_of_order(7, 6)).kind == "primitive"


def test_factorize_character_examples():
    assert factorize_character(DirichletCharacter.trivial(12)).moduli == (12, 1, 1)
    assert factorize_character(character_of_order(7, 6)).moduli == (1, 7, 1)
    chi = induce(legendre_character(3), 9) * induce(character_of_order(5, 4), 45)
    f = factorize_character(chi)
    assert f.moduli == (1, 5, 9)


@given(moduli, st.data())
def test_factorization_recombines(c, data):
    chi = DirichletCharacter.from_index(c, data.draw(st.integers(0, euler_phi(c) - 1)))
    f = factorize_character(chi)
    assert f.recombine() == chi
    assert math.prod(f.moduli) == c
    assert math.gcd(f.moduli[0], f.moduli[1] * f.moduli[2]) == 1


def test_square_and_induce():
    assert square(legendre_character(3)).is_trivial()
    assert square(character_of_order(5, 4)) == legendre_character(5)
    assert induce(DirichletCharacter.trivial(1), 6) == DirichletCharacter.trivial(6)
    with pytest.raises(DomainError):
        induce(legendre_character(3), 10)


@given(st.integers(1, 60), st.integers(1, 6), st.data())
def test_induce_preserves_values_on_units(c, m, data):
    chi = DirichletCharacter.from_index(c, data.draw(st.integers(0, euler_phi(c) - 1)))
    big = induce(chi, c * m)
    for n in range(c * m):
        if math.gcd(n, c * m) == 1:
            assert abs(big(n) - chi(n)) < 1e-12
        else:
            assert big(n) == 0
    assert big.conductor() == chi.conductor()


def test_legendre_matches_euler_criterion():
    for p in (3, 5, 7, 11, 13, 31):
        chi = legendre_character(p)
        for n in range(1, p):
            r = pow(n, (p - 1) // 2, p)
            assert chi(n) == (1 if r == 1 else -1)
    with pytest.raises(DomainError):
        legendre_character(2)


def test_root_values_are_exact_on_quarter_turns():
    chi = character_of_order(5, 4)
    assert {chi(n) for n in range(1, 5)} == {1, 1j, -1, -1j}
    assert cmath.isclose(character_of_order(7, 6)(3) ** 6, 1)
