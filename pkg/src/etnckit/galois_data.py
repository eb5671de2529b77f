"""Abelian fields over Q as conductor-subgroup pairs.

A field is (f, H) with H <= (Z/f)^*; its Galois group is the quotient
(Z/f)^*/H computed by integer Smith normal form, with elements labeled
sigma_a for residues a. Per-place data (inertia, Frobenius, residue degree),
ramified/smoothing place sets, the root-of-unity integrality condition, and
CM subfield lattices live here.
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from math import gcd, prod

from .cyclotomic import cyclotomic_value_at_one, divisors
from .group_ring import FiniteAbelianGroup, GroupSurjection, StructuralError
from .snf import snf_z


def factorize(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _primitive_root(q: int) -> int:
    """Primitive root mod q for q an odd prime power."""
    fac = factorize(q)
    [(p, a)] = fac.items()
    phi = q // p * (p - 1)
    prime_divs = list(factorize(phi))
    for g in range(2, q):
        if gcd(g, q) != 1:
            continue
        if all(pow(g, phi // r, q) != 1 for r in prime_divs):
            return g
    raise ArithmeticError(f"no primitive root mod {q}")


class UnitGroup:
    """(Z/f)^* with an explicit direct-sum generating set (via CRT) and a
    discrete-log table built by enumeration."""

    _cache: dict[int, "UnitGroup"] = {}

    def __new__(cls, f: int):
        inst = cls._cache.get(f)
        if inst is None:
            inst = super().__new__(cls)
            inst._init(f)
            cls._cache[f] = inst
        return inst

    def _init(self, f: int):
        self.f = f
        gens: list[int] = []
        orders: list[int] = []
        if f > 1:
            for p, a in sorted(factorize(f).items()):
                q = p**a
                rest = f // q
                # component generators, lifted to 1 mod the complement via CRT
                if p == 2:
                    comp = [] if a == 1 else ([(3, 2)] if a == 2 else [(q - 1, 2), (5, 2 ** (a - 2))])
                else:
                    comp = [(_primitive_root(q), q // p * (p - 1))]
                for g0, order in comp:
                    if rest == 1:
                        gens.append(g0 % f)
                    else:
                        inv = pow(q, -1, rest)
                        gens.append((g0 * rest * pow(rest, -1, q) + 1 * q * inv) % f)
                    orders.append(order)
        self.gens = gens
        self.orders = orders
        self.order = prod(orders) if orders else 1
        # dlog by enumeration; also yields the element list
        dlog: dict[int, tuple[int, ...]] = {}

        def rec(i: int, x: int, vec: list[int]):
            if i == len(gens):
                dlog[x] = tuple(vec)
                return
            y = x
            for e in range(orders[i]):
                rec(i + 1, y, vec + [e])
                y = y * gens[i] % f
        rec(0, 1 % f, [])
        self.dlog = dlog
        self.elements = sorted(dlog)
        assert len(self.elements) == self.order

    def kernel_to(self, d: int) -> list[int]:
        """Residues x with x = 1 (mod d), the kernel of reduction to (Z/d)^*."""
        if self.f % d != 0:
            raise StructuralError(f"{d} does not divide {self.f}")
        return [x for x in self.elements if x % d == 1 % d]

    def subgroup(self, gens) -> frozenset[int]:
        seen = {1 % self.f}
        frontier = list(seen)
        gens = [g % self.f for g in gens]
        for g in gens:
            if gcd(g, self.f) != 1:
                raise StructuralError(f"{g} is not a unit mod {self.f}")
        while frontier:
            x = frontier.pop()
            for g in gens:
                y = x * g % self.f
                if y not in seen:
                    seen.add(y)
                    frontier.append(y)
        return frozenset(seen)


class AbelianFieldQ:
    """Abelian field over Q, canonically the fixed field of H <= (Z/f)^* with
    f the true conductor. Interned per (f, H)."""

    _cache: dict = {}

    def __new__(cls, f: int, h_elements: frozenset[int]):
        key = (f, h_elements)
        inst = cls._cache.get(key)
        if inst is None:
            inst = super().__new__(cls)
            inst._init(f, h_elements)
            cls._cache[key] = inst
        return inst

    def _init(self, f: int, h_elements: frozenset[int]):
        self.f = f
        self.H = h_elements
        self.units = UnitGroup(f)
        if f == 1:
            self.group = FiniteAbelianGroup([], labels={0: ()})
        else:
            self.group = _quotient_group(self.units, h_elements)
        self.c = self.group.sigma(f - 1, f) if f > 1 else self.group.identity
        self.is_cm = self.c != self.group.identity
        self.degree = self.group.order
        self.ram_primes = tuple(sorted(factorize(f))) if f > 1 else ()
        self._places: dict = {}
        self._minus: dict = {}

    def sigma(self, a: int):
        """Artin symbol sigma_a for a coprime to f."""
        return self.group.sigma(a, self.f)

    def minus_ring(self, ring):
        from .group_ring import MinusRing

        if not self.is_cm:
            raise StructuralError("minus quotient needs a CM field")
        mr = self._minus.get(ring)
        if mr is None:
            mr = MinusRing(self.group, self.c, ring)
            self._minus[ring] = mr
        return mr

    def to_json_dict(self) -> dict:
        return {"f": self.f, "H": sorted(self.H)}

    def __repr__(self):
        return f"AbelianFieldQ(f={self.f}, [G:1]={self.degree})"


def _quotient_group(units: UnitGroup, H: frozenset[int]) -> FiniteAbelianGroup:
    """(Z/f)^*/H with labels sigma_a, invariant factors via SNF of the
    relation lattice (generator orders plus discrete logs of H)."""
    r = len(units.gens)
    rel = [[units.orders[i] if j == i else 0 for j in range(r)] for i in range(r)]
    for h in sorted(H):
        rel.append(list(units.dlog[h]))
    D, U, V = snf_z(rel)
    diag = [D[i][i] for i in range(r)]
    keep = [j for j in range(r) if diag[j] > 1]
    orders = [diag[j] for j in keep]

    def project(vec):
        return tuple(
            sum(vec[i] * V[i][j] for i in range(r)) % diag[j] for j in keep
        )

    labels = {a: project(units.dlog[a]) for a in units.elements}
    G = FiniteAbelianGroup(orders, labels=labels)
    if len(set(labels.values())) * len(H) != units.order:
        raise StructuralError("quotient size mismatch")
    return G


def build_field(f: int, h_gens=()) -> AbelianFieldQ:
    """Canonical field for conductor f and subgroup generators h_gens:
    normalizes f = 2 (mod 4), closes the generators, and descends to the
    minimal conductor."""
    if f < 1:
        raise StructuralError("conductor must be positive")
    if f % 4 == 2:
        f //= 2
    h_gens = [int(a) % f for a in h_gens] if f > 1 else []
    units = UnitGroup(f)
    H = units.subgroup(h_gens) if f > 1 else frozenset()
    # conductor minimality: smallest divisor d of f whose reduction kernel
    # lies inside H
    for d in divisors(f):
        if d % 4 == 2:
            continue
        if f == 1:
            break
        ker = units.kernel_to(d)
        if all(x in H for x in ker):
            if d == 1:
                return AbelianFieldQ(1, frozenset())
            Hd = frozenset({x % d for x in H})
            return AbelianFieldQ(d, Hd)
    return AbelianFieldQ(f, H)


@dataclass(frozen=True)
class PlaceData:
    """Splitting data of one place of Q in the field: inertia and
    decomposition subgroups of G, a Frobenius representative (well defined
    modulo inertia), ramification index e, residue degree f_res, norm nv,
    and the number of places above."""

    place: object  # prime int or "oo"
    inertia: frozenset
    decomposition: frozenset
    frobenius: tuple
    e: int
    f_res: int
    nv: int  # norm of the rational place: ell itself, 1 at oo
    num_places: int


def place_data(field: AbelianFieldQ, place) -> PlaceData:
    """Splitting data for a rational place (prime or \"oo\")."""
    cached = field._places.get(place)
    if cached is not None:
        return cached
    G = field.group
    if place == "oo":
        inertia = frozenset({G.identity, field.c})
        pd = PlaceData(
            place="oo",
            inertia=inertia,
            decomposition=inertia,
            frobenius=G.identity,
            e=len(inertia),
            f_res=1,
            nv=1,
            num_places=G.order // len(inertia),
        )
    else:
        ell = int(place)
        if ell < 2 or any(ell % d == 0 for d in range(2, int(ell**0.5) + 1)):
            raise StructuralError(f"{ell} is not prime")
        f = field.f
        a = 0
        m = f
        while m % ell == 0:
            a += 1
            m //= ell
        if f == 1:
            inertia = frozenset({G.identity})
            frob = G.identity
        else:
            inertia = frozenset(
                field.sigma(x) for x in field.units.kernel_to(m)
            )
            # Frobenius: x = ell (mod m), x = 1 (mod ell^a)
            if a == 0:
                x = ell % f
            elif m == 1:
                x = 1 % f
            else:
                la = ell**a
                x = ((ell % m) * la * pow(la, -1, m) + m * pow(m, -1, la)) % f
            frob = field.sigma(x)
        e = len(inertia)
        # residue degree: least t >= 1 with frob^t in I
        f_res = 1
        g = frob
        while g not in inertia:
            g = G.mul(g, frob)
            f_res += 1
        dec = G.subgroup_generated(list(inertia) + [frob])
        if len(dec) != e * f_res:
            raise StructuralError("decomposition group size mismatch")
        if G.order % (e * f_res) != 0:
            raise StructuralError("efg invariant fails")
        pd = PlaceData(
            place=ell,
            inertia=inertia,
            decomposition=dec,
            frobenius=frob,
            e=e,
            f_res=f_res,
            nv=ell,
            num_places=G.order // (e * f_res),
        )
    assert pd.e * pd.f_res * pd.num_places == G.order
    field._places[place] = pd
    return pd


@dataclass(frozen=True)
class SigmaSets:
    """The depletion/smoothing place sets attached to (K, p, T)."""

    s_places: tuple          # "oo" plus all ramified primes
    sigma: tuple             # "oo" plus ramified primes above p
    sigma_prime: tuple       # T plus ramified primes away from p


def sigma_sets(field: AbelianFieldQ, p: int, t_primes) -> SigmaSets:
    if p < 2 or any(p % d == 0 for d in range(2, int(p**0.5) + 1)):
        raise StructuralError(f"p = {p} is not prime")
    T = tuple(sorted({int(x) for x in t_primes}))
    for ell in T:
        if ell < 2 or any(ell % d == 0 for d in range(2, int(ell**0.5) + 1)):
            raise StructuralError(f"T contains non-prime {ell}")
    ram = set(field.ram_primes)
    if ram & set(T):
        raise StructuralError("T meets the ramified set")
    sigma = ("oo",) + tuple(ell for ell in field.ram_primes if ell == p)
    sigma_prime = tuple(sorted(set(T) | {ell for ell in ram if ell != p}))
    return SigmaSets(
        s_places=("oo",) + field.ram_primes,
        sigma=sigma,
        sigma_prime=sigma_prime,
    )


def torsion_order(field: AbelianFieldQ) -> int:
    """Order w of the group of roots of unity in the field."""
    f = field.f
    if f == 1:
        return 2
    if f % 2 == 0:
        m0 = f
        lifts = sorted(field.H)
    else:
        m0 = 2 * f
        lifts = [h if h % 2 == 1 else h + f for h in sorted(field.H)]
    w = m0
    for h in lifts:
        w = gcd(w, gcd(m0, h - 1))
    return w


def dr_condition_check(field: AbelianFieldQ, t_primes) -> bool:
    """Integrality condition on T: no nontrivial root of unity in the field
    is congruent to 1 at every prime of T. Tested divisor-by-divisor on the
    torsion order via the cyclotomic-polynomial values Phi_d(1)."""
    T = sorted({int(x) for x in t_primes})
    w = torsion_order(field)
    for d in divisors(w):
        if d == 1:
            continue
        v = cyclotomic_value_at_one(d)
        if all(v % ell == 0 for ell in T):
            return False
    return True


def max_conductor_bound() -> int:
    raw = os.environ.get("ETNCKIT_MAX_CONDUCTOR", "120")
    try:
        return int(raw)
    except ValueError:
        raise StructuralError(f"bad ETNCKIT_MAX_CONDUCTOR value {raw!r}")


class FieldLattice:
    """A top field together with CM subfields, inclusion order, and the
    reduction surjections between Galois groups."""

    def __init__(self, top: AbelianFieldQ, members=None, close_joins: bool = True):
        if top.f > max(200, max_conductor_bound()):
            raise StructuralError("conductor exceeds the enumeration bound")
        self.top = top
        if members is None:
            members = cm_subfields(top)
        members = list(dict.fromkeys(members))
        for E in members:
            _ = self.surjection_from_top(E)  # validates E <= top
        if close_joins:
            members = self._join_closure(members)
        if top.is_cm and top not in members:
            members.append(top)
        self.members = sorted(members, key=lambda E: (E.degree, E.f, sorted(E.H)))
        self._subgroup = {E: self._kernel_in_top(E) for E in self.members}
        self._surjections: dict = {}

    def _kernel_in_top(self, E: AbelianFieldQ) -> frozenset:
        q = self.surjection_from_top(E)
        G = self.top.group
        return frozenset(g for g in G.elements if q(g) == E.group.identity)

    def surjection_from_top(self, E: AbelianFieldQ) -> GroupSurjection:
        return field_surjection(self.top, E)

    def _join_closure(self, members):
        pool = list(members)
        changed = True
        while changed:
            changed = False
            kers = {E: self._kernel_in_top(E) for E in pool}
            for i in range(len(pool)):
                for j in range(i + 1, len(pool)):
                    k = kers[pool[i]] & kers[pool[j]]
                    J = self._field_of_kernel(k)
                    if J not in pool:
                        pool.append(J)
                        changed = True
        return pool

    def _field_of_kernel(self, kernel: frozenset) -> AbelianFieldQ:
        top = self.top
        h_gens = [a for a in top.units.elements if top.sigma(a) in kernel]
        return build_field(top.f, sorted(top.H | set(h_gens)))

    def leq(self, E: AbelianFieldQ, F: AbelianFieldQ) -> bool:
        """E is a subfield of F (both must be members)."""
        return self._subgroup[E] >= self._subgroup[F]

    def edges(self):
        """All strictly comparable member pairs (sub, super)."""
        out = []
        for E in self.members:
            for F in self.members:
                if E is not F and self.leq(E, F):
                    out.append((E, F))
        return out

    def surjection(self, sup: AbelianFieldQ, sub: AbelianFieldQ) -> GroupSurjection:
        key = (sup, sub)
        q = self._surjections.get(key)
        if q is None:
            q = field_surjection(sup, sub)
            self._surjections[key] = q
        return q


def field_surjection(sup: AbelianFieldQ, sub: AbelianFieldQ) -> GroupSurjection:
    """Galois restriction G_sup -> G_sub, sigma_a -> sigma_{a mod f_sub};
    raises when sub is not actually a subfield."""
    if sup.f % sub.f != 0:
        raise StructuralError("conductors incompatible")
    # residue representative per group element (smallest label)
    rep: dict = {}
    for a in sup.units.elements:
        g = sup.sigma(a)
        if g not in rep:
            rep[g] = a
    if sub.f == 1:
        return GroupSurjection(sup.group, sub.group, lambda g: ())
    for h in sup.H:
        if h % sub.f not in sub.H:
            raise StructuralError("not a subfield: H does not map in")
    return GroupSurjection(
        sup.group, sub.group, lambda g: sub.sigma(rep[sup.group.element(g)])
    )


def subfield_lattice(top: AbelianFieldQ) -> FieldLattice:
    """Lattice of all CM subfields of the top field."""
    return FieldLattice(top)


def cm_subfields(top: AbelianFieldQ) -> list[AbelianFieldQ]:
    """All CM subfields of the top field (conjugation nontrivial)."""
    if top.f > max(200, max_conductor_bound()):
        raise StructuralError("conductor exceeds the enumeration bound")
    G = top.group
    out = []
    for S in G.subgroups():
        if top.c in S:
            continue
        h_gens = [a for a in top.units.elements if top.sigma(a) in S]
        E = build_field(top.f, sorted(set(h_gens) | top.H))
        if E.is_cm and E not in out:
            out.append(E)
    return sorted(out, key=lambda E: (E.degree, E.f, sorted(E.H)))
