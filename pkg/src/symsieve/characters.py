"""Dirichlet characters with exact values.

A character modulo ``c`` is stored as one :class:`LocalCharacter` per prime
power ``p**k || c``.  A local character is a vector of exponents, one per
cyclic factor of ``(Z/p^k)^*``: a single primitive root for odd ``p``, the
pair ``(-1, 5)`` for ``2**k`` with ``k >= 3``, ``-1`` alone for ``k = 2`` and
nothing for ``k = 1``.  If ``gamma_j`` generates a factor of order ``o_j``,
the character with exponents ``a`` sends ``gamma_j`` to ``e(a_j / o_j)``.

Values are exact angles (fractions of a full turn); complex numbers are
produced only at the boundary.  Character indices are the mixed-radix
reading of the concatenated exponent vector, which is also the index order
of ``numpy.fft.fftn`` over the unit group laid out by discrete logarithms.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterator, Literal

import numpy as np

from .arith import DomainError, divisors, factorize

Kind = Literal["trivial", "primitive", "semi-primitive", "mixed"]


@dataclass(frozen=True, eq=False)
class LocalGroup:
    """The unit group of ``Z/p^k`` with a discrete-log table."""
    p: int
    k: int
    gens: tuple[int, ...]
    orders: tuple[int, ...]
    logs: np.ndarray        # shape (p**k, len(orders)); rows of non-units are junk
    unit_mask: np.ndarray   # shape (p**k,)

    @property
    def modulus(self) -> int:
        return self.p**self.k

    @property
    def order(self) -> int:
        return math.prod(self.orders)

    @property
    def rank(self) -> int:
        return len(self.orders)

    def kernel_generators(self, j: int) -> list[int]:
        """Generators of the units congruent to 1 modulo ``p**j``."""
        if j <= 0:
            return list(self.gens)
        if j >= self.k:
            return []
        q = self.modulus
        if self.p == 2 and j == 1:
            # every unit is odd, so the kernel is the whole group
            return list(self.gens)
        return [(1 + self.p**j) % q]

    def exponent_grid(self) -> np.ndarray:
        """Exponent vectors of all characters in index order, shape ``(order, rank)``."""
        if not self.orders:
            return np.zeros((1, 0), dtype=np.int64)
        return np.indices(self.orders).reshape(self.rank, -1).T.astype(np.int64)

    def _trivial_at(self, E: np.ndarray, h: int) -> np.ndarray:
        L = math.lcm(1, *self.orders)
        scale = np.array([L // o for o in self.orders], dtype=np.int64)
        return (E * scale) @ self.logs[h] % L == 0

    def conductor_exponents(self) -> np.ndarray:
        """Conductor exponent of every character, in index order.

        The same kernel scan as :meth:`LocalCharacter.conductor_exponent`,
        run over all exponent vectors at once.
        """
        E = self.exponent_grid()
        out = np.full(E.shape[0], -1, dtype=np.int64)
        out[~E.any(axis=1)] = 0
        for j in range(1, self.k + 1):
            ok = np.ones(E.shape[0], dtype=bool)
            for h in self.kernel_generators(j):
                ok &= self._trivial_at(E, h)
            out[(out < 0) & ok] = j
        assert np.all(out >= 0)
        return out

    def real_mask(self) -> np.ndarray:
        """Whether each character (index order) satisfies ``chi^2 = 1``."""
        E = self.exponent_grid()
        return np.all((2 * E) % np.array(self.orders, dtype=np.int64) == 0, axis=1) if self.orders \
            else np.ones(1, dtype=bool)


def _primitive_root(p: int, k: int) -> int:
    q = p**k
    phi = (p - 1) * p ** (k - 1)
    test_primes = factorize(phi).primes
    for g in range(2, q):
        if g % p and all(pow(g, phi // ell, q) != 1 for ell in test_primes):
            return g
    raise AssertionError(f"no primitive root modulo {q}")  # pragma: no cover


@lru_cache(maxsize=None)
def local_group(p: int, k: int) -> LocalGroup:
    if k < 1:
        raise DomainError("local groups need k >= 1")
    q = p**k
    mask = np.zeros(q, dtype=bool)
    if p == 2 and k == 1:
        mask[1] = True
        return LocalGroup(2, 1, (), (), np.zeros((2, 0), dtype=np.int64), mask)
    if p == 2 and k == 2:
        logs = np.zeros((4, 1), dtype=np.int64)
        logs[3, 0] = 1
        mask[[1, 3]] = True
        return LocalGroup(2, 2, (3,), (2,), logs, mask)
    if p == 2:
        ord5 = 2 ** (k - 2)
        logs = np.zeros((q, 2), dtype=np.int64)
        x = 1
        for b in range(ord5):
            logs[x] = (0, b)
            logs[q - x] = (1, b)
            x = x * 5 % q
        mask[1::2] = True
        return LocalGroup(2, k, (q - 1, 5), (2, ord5), logs, mask)
    g = _primitive_root(p, k)
    phi = (p - 1) * p ** (k - 1)
    logs = np.zeros((q, 1), dtype=np.int64)
    x = 1
    for i in range(phi):
        logs[x, 0] = i
        x = x * g % q
    mask[:] = True
    mask[::p] = False
    return LocalGroup(p, k, (g,), (phi,), logs, mask)


@dataclass(frozen=True)
class LocalCharacter:
    """A character of ``(Z/p^k)^*`` given by generator exponents."""
    p: int
    k: int
    exponents: tuple[int, ...]

    @property
    def group(self) -> LocalGroup:
        return local_group(self.p, self.k)

    @property
    def modulus(self) -> int:
        return self.p**self.k

    def angle(self, n: int) -> Fraction | None:
        g = self.group
        r = n % g.modulus
        if not g.unit_mask[r]:
            return None
        return sum((Fraction(int(a) * int(l), o) for a, l, o in zip(self.exponents, g.logs[r], g.orders)),
                   Fraction(0)) % 1

    def is_trivial(self) -> bool:
        return not any(self.exponents)

    def conductor_exponent(self) -> int:
        """Smallest ``j`` such that the character is 1 on units ``= 1 (mod p^j)``.

        Checked on generators of each reduction kernel in turn.
        """
        if self.is_trivial():
            return 0
        for j in range(1, self.k + 1):
            if all(self.angle(h) == 0 for h in self.group.kernel_generators(j)):
                return j
        raise AssertionError("unreachable: the kernel mod p^k is trivial")  # pragma: no cover

    @classmethod
    def from_angles(cls, p: int, k: int, angle_at) -> "LocalCharacter":
        """Build the local character mod ``p**k`` whose value at each generator is ``angle_at(gen)``."""
        g = local_group(p, k)
        exps = []
        for gamma, o in zip(g.gens, g.orders):
            a = angle_at(gamma) * o
            if a.denominator != 1:
                raise DomainError(f"angle {angle_at(gamma)} is not of order dividing {o}")
            exps.append(int(a) % o)
        return cls(p, k, tuple(exps))

    def lift(self, k_new: int) -> "LocalCharacter":
        if k_new < self.k:
            raise DomainError("cannot lift to a smaller exponent")
        q = self.modulus
        return LocalCharacter.from_angles(self.p, k_new, lambda x: self.angle(x % q))

    def primitive(self) -> "LocalCharacter | None":
        """The primitive character inducing this one (None when trivial)."""
        j = self.conductor_exponent()
        if j == 0:
            return None
        return LocalCharacter.from_angles(self.p, j, self.angle)


@dataclass(frozen=True)
class CharacterClass:
    kind: Kind
    conductor: int


@dataclass(frozen=True)
class DirichletCharacter:
    modulus: int
    components: tuple[LocalCharacter, ...]

    def __post_init__(self):
        f = factorize(self.modulus)
        if tuple((lc.p, lc.k) for lc in self.components) != f.factors:
            raise DomainError(f"components do not match the factorization of {self.modulus}")

    # -- construction ---------------------------------------------------
    @classmethod
    def trivial(cls, c: int) -> "DirichletCharacter":
        return cls(c, tuple(LocalCharacter(p, k, (0,) * local_group(p, k).rank) for p, k in factorize(c)))

    @classmethod
    def from_exponents(cls, c: int, exponents) -> "DirichletCharacter":
        comps = []
        it = iter(exponents)
        for p, k in factorize(c):
            r = local_group(p, k).rank
            comps.append(LocalCharacter(p, k, tuple(int(next(it)) for _ in range(r))))
        return cls(c, tuple(comps))

    @classmethod
    def from_index(cls, c: int, index: int) -> "DirichletCharacter":
        shape = character_group(c).shape
        if not 0 <= index < math.prod(shape):
            raise DomainError(f"character index {index} out of range for modulus {c}")
        return cls.from_exponents(c, np.unravel_index(index, shape) if shape else ())

    @classmethod
    def from_locals(cls, locals_: list[LocalCharacter]) -> "DirichletCharacter":
        comps = tuple(sorted(locals_, key=lambda lc: lc.p))
        return cls(math.prod(lc.modulus for lc in comps), comps)

    # -- evaluation ------------------------------------------------------
    def angle(self, n: int) -> Fraction | None:
        """Exact value as a fraction of a turn, or None when ``gcd(n, c) > 1``."""
        total = Fraction(0)
        for lc in self.components:
            a = lc.angle(n)
            if a is None:
                return None
            total += a
        return total % 1

    def __call__(self, n: int) -> complex:
        a = self.angle(n)
        if a is None:
            return 0j
        return root_of_unity(a)

    @property
    def exponents(self) -> tuple[int, ...]:
        return tuple(e for lc in self.components for e in lc.exponents)

    @property
    def index(self) -> int:
        shape = character_group(self.modulus).shape
        return int(np.ravel_multi_index(self.exponents, shape)) if shape else 0

    @property
    def order(self) -> int:
        """Multiplicative order of the character."""
        o = 1
        for lc in self.components:
            for a, m in zip(lc.exponents, lc.group.orders):
                o = math.lcm(o, m // math.gcd(a, m))
        return o

    def angle_table(self) -> tuple[np.ndarray, int]:
        """Numerators of the angles of ``chi(0..c-1)`` over a common denominator.

        Returns ``(num, den)``; ``num`` is -1 at non-units.
        """
        c = self.modulus
        den = character_group(c).exponent
        n = np.arange(c, dtype=np.int64)
        num = np.zeros(c, dtype=np.int64)
        unit = np.ones(c, dtype=bool)
        for lc in self.components:
            g = lc.group
            r = n % g.modulus
            unit &= g.unit_mask[r]
            for j, (a, o) in enumerate(zip(lc.exponents, g.orders)):
                if a:
                    num = (num + (a * (den // o) % den) * g.logs[r, j]) % den
        num[~unit] = -1
        return num, den

    def values(self) -> np.ndarray:
        num, den = self.angle_table()
        out = np.exp(2j * np.pi * num / den)
        out[num < 0] = 0
        return out

    # -- structure -------------------------------------------------------
    def is_trivial(self) -> bool:
        return all(lc.is_trivial() for lc in self.components)

    def conductor(self) -> int:
        return math.prod(lc.p ** lc.conductor_exponent() for lc in self.components)

    def classify(self) -> CharacterClass:
        return classify(self)

    def conj(self) -> "DirichletCharacter":
        return DirichletCharacter(self.modulus, tuple(
            LocalCharacter(lc.p, lc.k, tuple(-a % o for a, o in zip(lc.exponents, lc.group.orders)))
            for lc in self.components))

    def __mul__(self, other: "DirichletCharacter") -> "DirichletCharacter":
        if not isinstance(other, DirichletCharacter):
            return NotImplemented
        if self.modulus != other.modulus:
            m = math.lcm(self.modulus, other.modulus)
            return induce(self, m) * induce(other, m)
        return DirichletCharacter(self.modulus, tuple(
            LocalCharacter(x.p, x.k, tuple((a + b) % o for a, b, o in zip(x.exponents, y.exponents, x.group.orders)))
            for x, y in zip(self.components, other.components)))

    def __pow__(self, e: int) -> "DirichletCharacter":
        return DirichletCharacter(self.modulus, tuple(
            LocalCharacter(lc.p, lc.k, tuple(a * e % o for a, o in zip(lc.exponents, lc.group.orders)))
            for lc in self.components))

    def local(self, p: int) -> "DirichletCharacter":
        """The component at ``p`` as a character modulo ``p**k``."""
        for lc in self.components:
            if lc.p == p:
                return DirichletCharacter(lc.modulus, (lc,))
        return DirichletCharacter.trivial(1)

    def local_characters(self) -> list["DirichletCharacter"]:
        return [DirichletCharacter(lc.modulus, (lc,)) for lc in self.components]

    def primitive(self) -> "DirichletCharacter":
        """The primitive character modulo the conductor that induces this one."""
        return DirichletCharacter.from_locals([x for x in (lc.primitive() for lc in self.components) if x])

    def __repr__(self):
        return f"DirichletCharacter(modulus={self.modulus}, exponents={self.exponents})"


def root_of_unity(a: Fraction) -> complex:
    """``exp(2 pi i a)``, exact on multiples of 1/4."""
    a = a % 1
    if (4 * a).denominator == 1:
        return (1, 1j, -1, -1j)[int(4 * a)]
    theta = 2 * math.pi * float(a)
    return complex(math.cos(theta), math.sin(theta))


@dataclass(frozen=True, eq=False)
class CharacterGroup:
    modulus: int
    locals: tuple[LocalGroup, ...]

    @cached_property
    def shape(self) -> tuple[int, ...]:
        return tuple(o for g in self.locals for o in g.orders)

    @cached_property
    def exponent(self) -> int:
        return math.lcm(1, *self.shape)

    @property
    def size(self) -> int:
        return math.prod(self.shape)

    def log_vectors(self, n: np.ndarray) -> np.ndarray:
        """Concatenated discrete logs of the units ``n``, shape ``(len(n), rank)``."""
        n = np.asarray(n, dtype=np.int64)
        cols = [g.logs[n % g.modulus] for g in self.locals]
        if not cols:
            return np.zeros((len(n), 0), dtype=np.int64)
        return np.concatenate(cols, axis=1)

    @cached_property
    def exponent_matrix(self) -> np.ndarray:
        """Exponent vectors of all characters in index order, shape ``(size, rank)``."""
        if not self.shape:
            return np.zeros((1, 0), dtype=np.int64)
        return np.indices(self.shape).reshape(len(self.shape), -1).T.astype(np.int64)

    def value_matrix(self, n) -> np.ndarray:
        """``chi(n_j)`` for every character (rows, index order) and every ``n_j`` (columns)."""
        n = np.atleast_1d(np.asarray(n, dtype=np.int64)) % self.modulus
        L = self.exponent
        scale = np.array([L // o for o in self.shape], dtype=np.int64)
        num = (self.exponent_matrix * scale) @ self.log_vectors(n).T % L
        out = np.exp(2j * np.pi * num / L)
        out[:, np.gcd(n, self.modulus) != 1] = 0
        return out


@lru_cache(maxsize=4096)
def character_group(c: int) -> CharacterGroup:
    if c < 1:
        raise DomainError(f"modulus must be positive, got {c}")
    return CharacterGroup(c, tuple(local_group(p, k) for p, k in factorize(c)))


def enumerate_characters(c: int) -> list[DirichletCharacter]:
    """All ``phi(c)`` characters modulo ``c`` in index order; the trivial one first."""
    return list(iter_characters(c))


def iter_characters(c: int) -> Iterator[DirichletCharacter]:
    shape = character_group(c).shape
    for exps in itertools.product(*(range(o) for o in shape)):
        yield DirichletCharacter.from_exponents(c, exps)


def evaluate(chi: DirichletCharacter, n: int) -> complex:
    return chi(n)


def conductor(chi: DirichletCharacter) -> int:
    return chi.conductor()


def conductor_scan(chi: DirichletCharacter) -> int:
    """Conductor by the definition: the least ``d | c`` with ``chi = 1`` on units ``= 1 (mod d)``."""
    c = chi.modulus
    num, _ = chi.angle_table()
    n = np.arange(c)
    for d in divisors(c):
        sel = (n % d == 1 % d) & (num >= 0)
        if np.all(num[sel] == 0):
            return d
    raise AssertionError("unreachable")  # pragma: no cover


def classify(chi: DirichletCharacter) -> CharacterClass:
    c = chi.modulus
    cstar = chi.conductor()
    if cstar == 1:
        kind = "trivial"
    elif cstar == c:
        kind = "primitive"
    elif all(1 <= lc.conductor_exponent() < lc.k for lc in chi.components):
        kind = "semi-primitive"
    else:
        kind = "mixed"
    return CharacterClass(kind, cstar)


def local_kind(lc: LocalCharacter) -> Kind:
    j = lc.conductor_exponent()
    if j == 0:
        return "trivial"
    return "primitive" if j == lc.k else "semi-primitive"


@dataclass(frozen=True)
class CharacterFactorization:
    """``chi = chi0 * chi1 * chi2`` with trivial, primitive and semi-primitive parts."""
    chi0: DirichletCharacter
    chi1: DirichletCharacter
    chi2: DirichletCharacter

    @property
    def moduli(self) -> tuple[int, int, int]:
        return self.chi0.modulus, self.chi1.modulus, self.chi2.modulus

    def recombine(self) -> DirichletCharacter:
        return DirichletCharacter.from_locals(
            [*self.chi0.components, *self.chi1.components, *self.chi2.components])


def factorize_character(chi: DirichletCharacter) -> CharacterFactorization:
    parts: dict[str, list[LocalCharacter]] = {"trivial": [], "primitive": [], "semi-primitive": []}
    for lc in chi.components:
        parts[local_kind(lc)].append(lc)
    return CharacterFactorization(*(DirichletCharacter.from_locals(parts[k])
                                    for k in ("trivial", "primitive", "semi-primitive")))


def square(chi: DirichletCharacter) -> DirichletCharacter:
    return chi**2


def induce(chi: DirichletCharacter, c_multiple: int) -> DirichletCharacter:
    """The character modulo ``c_multiple`` induced by ``chi``."""
    if c_multiple < 1 or c_multiple % chi.modulus:
        raise DomainError(f"{c_multiple} is not a multiple of {chi.modulus}")
    old = {lc.p: lc for lc in chi.components}
    comps = []
    for p, k in factorize(c_multiple):
        if p in old:
            comps.append(old[p].lift(k))
        else:
            comps.append(LocalCharacter(p, k, (0,) * local_group(p, k).rank))
    return DirichletCharacter(c_multiple, tuple(comps))


def is_real(chi: DirichletCharacter) -> bool:
    return square(chi).is_trivial()


def legendre_character(p: int, k: int = 1) -> DirichletCharacter:
    """The Legendre symbol modulo the odd prime ``p``, induced to ``p**k``."""
    if p == 2 or factorize(p).factors != ((p, 1),):
        raise DomainError(f"{p} is not an odd prime")
    phi = p - 1
    return induce(DirichletCharacter(p, (LocalCharacter(p, 1, (phi // 2,)),)), p**k)


def primitive_characters(q: int) -> list[DirichletCharacter]:
    return [chi for chi in iter_characters(q) if chi.conductor() == q]


def count_characters(c: int) -> int:
    return character_group(c).size
