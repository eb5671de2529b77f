"""Exact group-ring arithmetic for finite abelian groups.

Z[G], Q[G] and Z/p^k[G] with dense coefficient vectors, the minus quotient
Z[G]/(1+c) on a fixed transversal, reduction maps along group surjections,
and characters valued in Q[x]/Phi_n. Everything is immutable after
construction and exact; no floating point.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from math import gcd, lcm, prod

from .cyclotomic import CycloField


class StructuralError(ValueError):
    """Mismatched groups/rings or malformed structural data."""


class UnsupportedError(TypeError):
    """Operation not defined for the given coefficient ring."""


# ---------------------------------------------------------------------------
# coefficient rings

class IntegerRing:
    name = "Z"

    def normalize(self, x):
        if isinstance(x, Fraction):
            if x.denominator != 1:
                raise StructuralError("non-integer coefficient in Z")
            return int(x)
        return int(x)

    def parse(self, s: str):
        return int(s)

    def format(self, x) -> str:
        return str(x)

    def __eq__(self, other):
        return isinstance(other, IntegerRing)

    def __hash__(self):
        return hash("Z")

    def __repr__(self):
        return "Z"


class RationalField:
    name = "Q"

    def normalize(self, x):
        return Fraction(x)

    def parse(self, s: str):
        return Fraction(s)

    def format(self, x) -> str:
        return str(x)

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("Q")

    def __repr__(self):
        return "Q"


class ResidueRing:
    """Z/p^k with residues stored in [0, p^k)."""

    def __init__(self, p: int, k: int):
        if p < 2 or any(p % d == 0 for d in range(2, int(p**0.5) + 1)):
            raise StructuralError(f"p = {p} is not prime")
        if k < 1:
            raise StructuralError("k must be >= 1")
        self.p = p
        self.k = k
        self.modulus = p**k
        self.name = f"Z/{p}^{k}"

    def normalize(self, x):
        if isinstance(x, Fraction):
            den = x.denominator
            if den % self.p == 0:
                raise StructuralError(f"denominator divisible by {self.p}")
            return x.numerator * pow(den, -1, self.modulus) % self.modulus
        return int(x) % self.modulus

    def parse(self, s: str):
        return self.normalize(Fraction(s) if "/" in s else int(s))

    def format(self, x) -> str:
        return str(x)

    def __eq__(self, other):
        return isinstance(other, ResidueRing) and (self.p, self.k) == (other.p, other.k)

    def __hash__(self):
        return hash(("Zmod", self.p, self.k))

    def __repr__(self):
        return self.name


Z = IntegerRing()
Q = RationalField()


def ring_from_name(name: str):
    if name == "Z":
        return Z
    if name == "Q":
        return Q
    if name.startswith("Z/") and "^" in name:
        p_s, k_s = name[2:].split("^")
        return ResidueRing(int(p_s), int(k_s))
    raise StructuralError(f"unknown ring name {name!r}")


# ---------------------------------------------------------------------------
# groups

class FiniteAbelianGroup:
    """Product of cyclic groups Z/d_1 x ... x Z/d_r; elements are coordinate
    tuples reduced componentwise, enumerated lexicographically. An optional
    label map sends residues a (mod f) to elements, giving the sigma_a."""

    def __init__(self, cyclic_orders, labels: dict[int, tuple[int, ...]] | None = None):
        orders = tuple(int(d) for d in cyclic_orders)
        if any(d < 1 for d in orders):
            raise StructuralError("cyclic orders must be positive")
        self.cyclic_orders = orders
        self.order = prod(orders) if orders else 1
        self.exponent = lcm(*orders) if orders else 1
        self.elements = tuple(itertools.product(*(range(d) for d in orders)))
        self.index = {g: i for i, g in enumerate(self.elements)}
        self.identity = self.elements[0]
        self.labels = dict(labels) if labels else None
        self._mul_table: list[list[int]] | None = None

    def element(self, coords) -> tuple[int, ...]:
        return tuple(c % d for c, d in zip(coords, self.cyclic_orders))

    def mul(self, g, h) -> tuple[int, ...]:
        return tuple((a + b) % d for a, b, d in zip(g, h, self.cyclic_orders))

    def inv(self, g) -> tuple[int, ...]:
        return tuple((-a) % d for a, d in zip(g, self.cyclic_orders))

    def pow(self, g, e: int) -> tuple[int, ...]:
        return tuple((a * e) % d for a, d in zip(g, self.cyclic_orders))

    def element_order(self, g) -> int:
        return lcm(*(d // gcd(a, d) for a, d in zip(g, self.cyclic_orders))) if g else 1

    def sigma(self, a: int, modulus: int | None = None) -> tuple[int, ...]:
        """Label lookup: the element sigma_a."""
        if self.labels is None:
            raise StructuralError("group carries no labels")
        if modulus is not None:
            a %= modulus
        if a not in self.labels:
            raise StructuralError(f"no label for residue {a}")
        return self.labels[a]

    def mul_table(self) -> list[list[int]]:
        if self._mul_table is None:
            idx = self.index
            els = self.elements
            self._mul_table = [
                [idx[self.mul(g, h)] for h in els] for g in els
            ]
        return self._mul_table

    def subgroup_generated(self, gens) -> frozenset:
        seen = {self.identity}
        frontier = [self.identity]
        gens = [self.element(g) for g in gens]
        while frontier:
            g = frontier.pop()
            for h in gens:
                nxt = self.mul(g, h)
                if nxt not in seen:
                    seen.add(nxt)
                    frontier.append(nxt)
        return frozenset(seen)

    def subgroups(self) -> list[frozenset]:
        """All subgroups, deterministically ordered by (size, sorted elements)."""
        triv = frozenset({self.identity})
        found = {triv}
        frontier = [triv]
        while frontier:
            S = frontier.pop()
            for g in self.elements:
                if g not in S:
                    T = self.subgroup_generated(list(S) + [g])
                    if T not in found:
                        found.add(T)
                        frontier.append(T)
        return sorted(found, key=lambda s: (len(s), sorted(s)))

    def __eq__(self, other):
        return (
            isinstance(other, FiniteAbelianGroup)
            and self.cyclic_orders == other.cyclic_orders
        )

    def __hash__(self):
        return hash(self.cyclic_orders)

    def __repr__(self):
        return f"FiniteAbelianGroup{self.cyclic_orders}"


# ---------------------------------------------------------------------------
# group-ring elements

class GroupRingElement:
    __slots__ = ("group", "ring", "coeffs")

    def __init__(self, group: FiniteAbelianGroup, ring, coeffs):
        coeffs = tuple(ring.normalize(c) for c in coeffs)
        if len(coeffs) != group.order:
            raise StructuralError("coefficient vector length != |G|")
        self.group = group
        self.ring = ring
        self.coeffs = coeffs

    @classmethod
    def zero(cls, group, ring):
        return cls(group, ring, (0,) * group.order)

    @classmethod
    def one(cls, group, ring):
        coeffs = [0] * group.order
        coeffs[0] = 1
        return cls(group, ring, coeffs)

    @classmethod
    def monomial(cls, group, ring, g, c=1):
        coeffs = [0] * group.order
        coeffs[group.index[group.element(g)]] = c
        return cls(group, ring, coeffs)

    def _check(self, other):
        if self.group != other.group:
            raise StructuralError("group mismatch")
        if self.ring != other.ring:
            raise StructuralError("ring mismatch")

    def add(self, other) -> "GroupRingElement":
        self._check(other)
        return GroupRingElement(
            self.group, self.ring, (a + b for a, b in zip(self.coeffs, other.coeffs))
        )

    def sub(self, other) -> "GroupRingElement":
        self._check(other)
        return GroupRingElement(
            self.group, self.ring, (a - b for a, b in zip(self.coeffs, other.coeffs))
        )

    def neg(self) -> "GroupRingElement":
        return GroupRingElement(self.group, self.ring, (-a for a in self.coeffs))

    def scalar(self, q) -> "GroupRingElement":
        q = self.ring.normalize(q)
        return GroupRingElement(self.group, self.ring, (q * a for a in self.coeffs))

    def mul(self, other) -> "GroupRingElement":
        self._check(other)
        table = self.group.mul_table()
        out = [0] * self.group.order
        for i, a in enumerate(self.coeffs):
            if a:
                row = table[i]
                for j, b in enumerate(other.coeffs):
                    if b:
                        out[row[j]] += a * b
        return GroupRingElement(self.group, self.ring, out)

    __add__ = add
    __sub__ = sub
    __neg__ = neg
    __mul__ = mul

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def augmentation(self):
        return self.ring.normalize(sum(self.coeffs))

    def is_integral(self) -> bool:
        if self.ring == Q:
            return all(Fraction(c).denominator == 1 for c in self.coeffs)
        return True

    def map_ring(self, new_ring) -> "GroupRingElement":
        return GroupRingElement(self.group, new_ring, self.coeffs)

    def coefficient(self, g):
        return self.coeffs[self.group.index[self.group.element(g)]]

    def to_json_dict(self) -> dict:
        return {
            "orders": list(self.group.cyclic_orders),
            "ring": self.ring.name,
            "coeffs": [self.ring.format(c) for c in self.coeffs],
        }

    @classmethod
    def from_json_dict(cls, d: dict, group: FiniteAbelianGroup | None = None):
        ring = ring_from_name(d["ring"])
        if group is None:
            group = FiniteAbelianGroup(d["orders"])
        elif tuple(group.cyclic_orders) != tuple(d["orders"]):
            raise StructuralError("orders mismatch against supplied group")
        return cls(group, ring, [ring.parse(s) for s in d["coeffs"]])

    def __eq__(self, other):
        return (
            isinstance(other, GroupRingElement)
            and self.group == other.group
            and self.ring == other.ring
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.group.cyclic_orders, self.ring, self.coeffs))

    def __repr__(self):
        terms = []
        for g, c in zip(self.group.elements, self.coeffs):
            if c:
                terms.append(f"{c}*{g}")
        return " + ".join(terms) if terms else "0"


def gr_mul(a: GroupRingElement, b: GroupRingElement) -> GroupRingElement:
    """Convolution product in the group ring."""
    return a.mul(b)


def sum_of_elements(group, ring, elements) -> GroupRingElement:
    """Sum of the given group elements, e.g. a subgroup norm element."""
    coeffs = [0] * group.order
    for g in elements:
        coeffs[group.index[group.element(g)]] += 1
    return GroupRingElement(group, ring, coeffs)


# ---------------------------------------------------------------------------
# reduction maps

class GroupSurjection:
    """Surjective homomorphism between finite abelian groups, stored as an
    index map; verified at construction."""

    def __init__(self, source: FiniteAbelianGroup, target: FiniteAbelianGroup, image_fn):
        self.source = source
        self.target = target
        mapping = []
        for g in source.elements:
            h = target.element(image_fn(g))
            mapping.append(target.index[h])
        self.mapping = tuple(mapping)
        if len(set(self.mapping)) != target.order:
            raise StructuralError("map is not surjective")
        idx = {g: i for i, g in enumerate(source.elements)}
        for g in source.elements[: min(source.order, 64)]:
            for h in source.elements[: min(source.order, 64)]:
                gh = source.mul(g, h)
                if self.mapping[idx[gh]] != target.index[
                    target.mul(
                        target.elements[self.mapping[idx[g]]],
                        target.elements[self.mapping[idx[h]]],
                    )
                ]:
                    raise StructuralError("map is not a homomorphism")

    def __call__(self, g):
        return self.target.elements[self.mapping[self.source.index[self.source.element(g)]]]

    def compose(self, inner: "GroupSurjection") -> "GroupSurjection":
        """self o inner."""
        if inner.target != self.source:
            raise StructuralError("composition mismatch")
        return GroupSurjection(inner.source, self.target, lambda g: self(inner(g)))


def reduce_element(x: GroupRingElement, q: GroupSurjection) -> GroupRingElement:
    """Push coefficients forward along q (sum over fibers); a ring map."""
    if x.group != q.source:
        raise StructuralError("element not over the source group")
    out = [0] * q.target.order
    for i, c in enumerate(x.coeffs):
        if c:
            out[q.mapping[i]] += c
    return GroupRingElement(q.target, x.ring, out)


# ---------------------------------------------------------------------------
# minus quotient

class MinusRing:
    """Z[G]/(1+c) (or over Q, Z/p^k) with coefficients stored on the fixed
    transversal: the lexicographically smaller element of each pair {g, cg}."""

    _cache: dict = {}

    def __new__(cls, group: FiniteAbelianGroup, c, ring):
        key = (id(group), group.element(c), ring)
        inst = cls._cache.get(key)
        if inst is None:
            inst = super().__new__(cls)
            inst._init(group, c, ring)
            cls._cache[key] = inst
        return inst

    def _init(self, group, c, ring):
        c = group.element(c)
        if c == group.identity:
            raise StructuralError("c must be nontrivial")
        if group.mul(c, c) != group.identity:
            raise StructuralError("c must be an involution")
        self.group = group
        self.c = c
        self.ring = ring
        transversal = []
        pos = [0] * group.order
        sign = [0] * group.order
        for i, g in enumerate(group.elements):
            cg = group.mul(c, g)
            rep = min(g, cg)
            if g == rep:
                transversal.append(g)
        t_index = {g: t for t, g in enumerate(transversal)}
        for i, g in enumerate(group.elements):
            cg = group.mul(c, g)
            rep = min(g, cg)
            pos[i] = t_index[rep]
            sign[i] = 1 if g == rep else -1
        self.transversal = tuple(transversal)
        self.pos = tuple(pos)
        self.sign = tuple(sign)
        self.rank = len(transversal)

    def with_ring(self, ring) -> "MinusRing":
        return MinusRing(self.group, self.c, ring)

    def zero(self) -> "MinusElement":
        return MinusElement(self, (0,) * self.rank)

    def one(self) -> "MinusElement":
        # the identity is lexicographically least, hence always a transversal rep
        coeffs = [0] * self.rank
        coeffs[self.transversal.index(self.group.identity)] = 1
        return MinusElement(self, coeffs)

    def __repr__(self):
        return f"MinusRing({self.group}, c={self.c}, {self.ring})"


class MinusElement:
    __slots__ = ("parent", "coeffs")

    def __init__(self, parent: MinusRing, coeffs):
        ring = parent.ring
        coeffs = tuple(ring.normalize(c) for c in coeffs)
        if len(coeffs) != parent.rank:
            raise StructuralError("coefficient vector length != transversal size")
        self.parent = parent
        self.coeffs = coeffs

    def _check(self, other):
        if self.parent is not other.parent:
            raise StructuralError("minus ring mismatch")

    def add(self, other):
        self._check(other)
        return MinusElement(self.parent, (a + b for a, b in zip(self.coeffs, other.coeffs)))

    def sub(self, other):
        self._check(other)
        return MinusElement(self.parent, (a - b for a, b in zip(self.coeffs, other.coeffs)))

    def neg(self):
        return MinusElement(self.parent, (-a for a in self.coeffs))

    def scalar(self, q):
        q = self.parent.ring.normalize(q)
        return MinusElement(self.parent, (q * a for a in self.coeffs))

    def lift(self) -> GroupRingElement:
        """The transversal-supported lift to the full group ring."""
        out = [0] * self.parent.group.order
        for t, g in enumerate(self.parent.transversal):
            out[self.parent.group.index[g]] = self.coeffs[t]
        return GroupRingElement(self.parent.group, self.parent.ring, out)

    def mul(self, other):
        self._check(other)
        return minus_project(gr_mul(self.lift(), other.lift()), self.parent)

    __add__ = add
    __sub__ = sub
    __neg__ = neg
    __mul__ = mul

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def map_ring(self, new_ring) -> "MinusElement":
        return MinusElement(self.parent.with_ring(new_ring), self.coeffs)

    def to_json_dict(self) -> dict:
        return {
            "orders": list(self.parent.group.cyclic_orders),
            "ring": self.parent.ring.name,
            "minus": True,
            "coeffs": [self.parent.ring.format(c) for c in self.coeffs],
        }

    def __eq__(self, other):
        return (
            isinstance(other, MinusElement)
            and self.parent is other.parent
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((id(self.parent), self.coeffs))

    def __repr__(self):
        terms = [f"{c}*{g}" for g, c in zip(self.parent.transversal, self.coeffs) if c]
        return " + ".join(terms) if terms else "0"


def minus_project(x: GroupRingElement, parent: MinusRing) -> MinusElement:
    """Class of x modulo (1+c); a surjective ring homomorphism."""
    if x.group != parent.group or x.ring != parent.ring:
        raise StructuralError("element does not match the minus ring")
    out = [0] * parent.rank
    for i, cf in enumerate(x.coeffs):
        if cf:
            out[parent.pos[i]] += parent.sign[i] * cf
    return MinusElement(parent, out)


def minus_reduce(x: MinusElement, q: GroupSurjection, target_parent: MinusRing) -> MinusElement:
    """Reduction on minus quotients; requires q(c_source) = c_target."""
    if q(x.parent.c) != target_parent.c:
        raise StructuralError("surjection does not preserve the involution")
    return minus_project(reduce_element(x.lift(), q), target_parent)


def in_plus_ideal(x: GroupRingElement, c) -> bool:
    """Solve (1+c) y = x over Z: exact kernel-of-minus_project membership."""
    from .snf import solve_z

    G = x.group
    c = G.element(c)
    n = G.order
    # column j of the matrix is the coefficient vector of (1+c) * g_j
    M = [[0] * n for _ in range(n)]
    for j, g in enumerate(G.elements):
        M[G.index[g]][j] += 1
        M[G.index[G.mul(c, g)]][j] += 1
    b = [int(cf) for cf in x.coeffs]
    return solve_z(M, b) is not None


# ---------------------------------------------------------------------------
# characters

class Character:
    """Character of a finite abelian group, generator images as exact roots of
    unity zeta_{d_i}^{t_i}, values in Q[x]/Phi_N for N the group exponent."""

    __slots__ = ("group", "exps", "field", "order", "_exp_cache")

    def __init__(self, group: FiniteAbelianGroup, exps):
        exps = tuple(int(t) % d for t, d in zip(exps, group.cyclic_orders))
        if len(exps) != len(group.cyclic_orders):
            raise StructuralError("one exponent per cyclic factor required")
        self.group = group
        self.exps = exps
        self.field = CycloField(group.exponent)
        self.order = lcm(*(d // gcd(t, d) for t, d in zip(exps, group.cyclic_orders))) if exps else 1
        self._exp_cache: dict | None = None

    def value_exponent(self, g) -> int:
        """j with chi(g) = zeta_N^j."""
        N = self.group.exponent
        g = self.group.element(g)
        return sum(
            (N // d) * t * a for t, a, d in zip(self.exps, g, self.group.cyclic_orders)
        ) % N

    def exponents(self) -> tuple[int, ...]:
        if self._exp_cache is None:
            self._exp_cache = tuple(
                self.value_exponent(g) for g in self.group.elements
            )
        return self._exp_cache

    def value(self, g):
        return self.field.zeta_pow(self.value_exponent(g))

    def is_odd(self, c) -> bool:
        """chi(c) = -1 for the designated involution c."""
        N = self.group.exponent
        return self.value_exponent(c) == N // 2 and N % 2 == 0

    def __eq__(self, other):
        return (
            isinstance(other, Character)
            and self.group == other.group
            and self.exps == other.exps
        )

    def __hash__(self):
        return hash((self.group.cyclic_orders, self.exps))

    def __repr__(self):
        return f"Character{self.exps}"


def characters(group: FiniteAbelianGroup) -> list[Character]:
    """All characters, enumerated lexicographically by exponent tuples."""
    return [Character(group, exps) for exps in itertools.product(*(range(d) for d in group.cyclic_orders))]


def char_eval(chi: Character, x: GroupRingElement):
    """Ring homomorphism into Q[x]/Phi_N; Z or Q coefficients only."""
    if isinstance(x.ring, ResidueRing):
        raise UnsupportedError("character evaluation needs Z or Q coefficients")
    if x.group != chi.group:
        raise StructuralError("group mismatch")
    exps = chi.exponents()
    return chi.field.from_zeta_sum(
        (c, e) for c, e in zip(x.coeffs, exps) if c
    )


def char_eval_minus(chi: Character, x: MinusElement):
    return char_eval(chi, x.lift())


def fourier_assemble(group: FiniteAbelianGroup, values) -> GroupRingElement:
    """Rebuild the Q[G] element with prescribed character values.

    values: list aligned with characters(group), entries in CycloField(N).
    Every coefficient must come out rational; raises otherwise."""
    chars = characters(group)
    if len(values) != len(chars):
        raise StructuralError("need one value per character")
    field = CycloField(group.exponent)
    n = group.order
    coeffs = []
    inv_n = Fraction(1, n)
    for h in group.elements:
        h_inv = group.inv(h)
        acc = field.zero
        for chi, val in zip(chars, values):
            if val is not None and any(val):
                acc = field.add(acc, field.mul_zeta(val, chi.value_exponent(h_inv)))
        coeffs.append(inv_n * field.rational_value(acc))
    return GroupRingElement(group, Q, coeffs)
