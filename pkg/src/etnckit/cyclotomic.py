"""Exact arithmetic in Q[x]/Phi_n(x).

Character values, Bernoulli sums and Fourier assembly all live in the field
Q(zeta_n) represented as polynomials modulo the n-th cyclotomic polynomial,
with Fraction coefficients. No floating point.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache


def divisors(n: int) -> list[int]:
    """Positive divisors of n in ascending order."""
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def _polydiv_exact(num: list[int], den: list[int]) -> list[int]:
    # Exact division of integer polynomials (coefficients low to high),
    # denominator monic up to sign. Remainder must vanish.
    num = list(num)
    dn = len(den) - 1
    lead = den[-1]
    quot = [0] * (len(num) - dn)
    for i in range(len(num) - 1, dn - 1, -1):
        c = num[i]
        if c == 0:
            continue
        assert c % lead == 0
        q = c // lead
        quot[i - dn] = q
        for j, dj in enumerate(den):
            num[i - dn + j] -= q * dj
    assert all(c == 0 for c in num), "non-exact polynomial division"
    return quot


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_n, low degree first, monic."""
    if n < 1:
        raise ValueError("n must be positive")
    if n == 1:
        return (-1, 1)
    num = [0] * (n + 1)
    num[0], num[n] = -1, 1  # x^n - 1
    den = [1]
    for d in divisors(n):
        if d < n:
            den = _polymul_int(den, cyclotomic_poly(d))
    return tuple(_polydiv_exact(num, den))


def _polymul_int(a, b) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return out


def cyclotomic_value_at_one(n: int) -> int:
    """Phi_n(1): 0 for n=1, p for prime powers p^j, 1 otherwise."""
    return sum(cyclotomic_poly(n))


_ZERO = Fraction(0)
_ONE = Fraction(1)


class CycloField:
    """Q(zeta_n) as Q[x]/Phi_n; elements are tuples of Fractions of length deg."""

    _instances: dict[int, "CycloField"] = {}

    def __new__(cls, n: int):
        inst = cls._instances.get(n)
        if inst is None:
            inst = super().__new__(cls)
            inst._init(n)
            cls._instances[n] = inst
        return inst

    def _init(self, n: int) -> None:
        self.n = n
        poly = cyclotomic_poly(n)
        self.deg = len(poly) - 1
        self.poly = poly
        # x^deg == head, since Phi_n is monic
        self._head = tuple(Fraction(-c) for c in poly[: self.deg])
        self.zero = (_ZERO,) * self.deg
        self.one = self.from_rational(_ONE)

    def from_rational(self, q) -> tuple[Fraction, ...]:
        return (Fraction(q),) + (_ZERO,) * (self.deg - 1)

    def zeta_pow(self, j: int) -> tuple[Fraction, ...]:
        """zeta_n^j as a field element."""
        j %= self.n
        if j < self.deg:
            vec = [_ZERO] * self.deg
            vec[j] = _ONE
            return tuple(vec)
        return self._reduce_power(j)

    @lru_cache(maxsize=None)
    def _reduce_power(self, j: int) -> tuple[Fraction, ...]:
        # x^j mod Phi_n for deg <= j < n
        vec = [_ZERO] * (j + 1)
        vec[j] = _ONE
        return self._reduce(vec)

    def _reduce(self, vec: list[Fraction]) -> tuple[Fraction, ...]:
        deg = self.deg
        head = self._head
        for i in range(len(vec) - 1, deg - 1, -1):
            c = vec[i]
            if c:
                vec[i] = _ZERO
                base = i - deg
                for t in range(deg):
                    if head[t]:
                        vec[base + t] += c * head[t]
        return tuple(vec[:deg])

    def add(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def sub(self, a, b):
        return tuple(x - y for x, y in zip(a, b))

    def neg(self, a):
        return tuple(-x for x in a)

    def scalar(self, q, a):
        q = Fraction(q)
        return tuple(q * x for x in a)

    def mul(self, a, b):
        out = [_ZERO] * (2 * self.deg - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        out[i + j] += ai * bj
        return self._reduce(out)

    def mul_zeta(self, a, j: int):
        """a * zeta_n^j, cheap monomial multiplication."""
        return self.mul(a, self.zeta_pow(j)) if j % self.n else a

    def from_zeta_sum(self, terms) -> tuple[Fraction, ...]:
        """Sum of q * zeta_n^j over (q, j) pairs, accumulated before reduction."""
        acc = [_ZERO] * self.n if self.n > self.deg else [_ZERO] * self.deg
        for q, j in terms:
            acc[j % self.n] += Fraction(q)
        return self._reduce(acc) if len(acc) > self.deg else tuple(acc)

    def is_rational(self, a) -> bool:
        return all(x == 0 for x in a[1:])

    def rational_value(self, a) -> Fraction:
        if not self.is_rational(a):
            raise ValueError("element is not rational")
        return a[0]
