"""Stickelberger elements by two independent exact methods, Euler factors,
idempotents, and the identity checks built from them.

Conventions, fixed once: zeta_S(sigma_a, 0) = 1/2 - {a/f}; chi(Theta_{S,T}) =
L_{S,T}(chi^{-1}, 0); Euler factors carry sigma_v^{-1}. Arithmetic is rational
throughout and the minus projection is taken last.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .cyclotomic import divisors
from .galois_data import (
    AbelianFieldQ,
    PlaceData,
    dr_condition_check,
    field_surjection,
    place_data,
    sigma_sets,
    subfield_lattice,
)
from .group_ring import (
    Character,
    GroupRingElement,
    MinusElement,
    Q,
    StructuralError,
    char_eval,
    characters,
    fourier_assemble,
    gr_mul,
    minus_project,
    reduce_element,
    sum_of_elements,
)


class MethodDisagreement(ArithmeticError):
    """The two independent Theta computations differ; always fatal."""


@dataclass(frozen=True)
class StickelbergerElement:
    field: AbelianFieldQ
    S: tuple
    T: tuple
    value: GroupRingElement      # over Q, supported on odd characters
    minus: MinusElement          # image in Q[G]_-
    dr_ok: bool
    integral: bool
    warning: bool                # set when the integrality guarantee is off


@dataclass(frozen=True)
class EulerFactor:
    kind: str                    # "P" | "Q" | "T-factor" | "x" | "y"
    places: tuple
    value: GroupRingElement


_theta_cache: dict = {}


def _validate_places(field: AbelianFieldQ, S, T):
    S = tuple(S)
    T = tuple(sorted({int(x) for x in T}))
    if "oo" not in S:
        raise StructuralError("S must contain the archimedean place")
    finite = sorted({int(x) for x in S if x != "oo"})
    for ell in set(finite) | set(T):
        if ell < 2 or any(ell % d == 0 for d in range(2, int(ell**0.5) + 1)):
            raise StructuralError(f"non-prime place {ell}")
    if not set(field.ram_primes) <= set(finite):
        raise StructuralError("S must contain every ramified prime")
    if set(T) & (set(finite) | {"oo"}):
        raise StructuralError("T must be disjoint from S")
    return ("oo",) + tuple(finite), T


def _theta_coset(field: AbelianFieldQ, S, T) -> GroupRingElement:
    """theta_f = sum (1/2 - a/f) sigma_a^{-1}, then depletion and smoothing."""
    G = field.group
    f = field.f
    coeffs = [Fraction(0)] * G.order
    for a in field.units.elements:
        g = G.inv(field.sigma(a))
        coeffs[G.index[g]] += Fraction(1, 2) - Fraction(a, f)
    th = GroupRingElement(G, Q, coeffs)
    one = GroupRingElement.one(G, Q)
    for ell in S:
        if ell == "oo" or ell in field.ram_primes:
            continue
        pd = place_data(field, ell)
        th = gr_mul(th, one - GroupRingElement.monomial(G, Q, G.inv(pd.frobenius)))
    for ell in T:
        pd = place_data(field, ell)
        th = gr_mul(
            th, one - GroupRingElement.monomial(G, Q, G.inv(pd.frobenius), pd.nv)
        )
    return th


def _char_data(field: AbelianFieldQ, chi: Character):
    """(f_chi, value-exponent map on (Z/f_chi)^*, B_1(chi)) for the primitive
    character below chi; exponents are powers of zeta_N, N the group exponent.
    Cached per field."""
    cache = getattr(field, "_char_cache", None)
    if cache is None:
        cache = {}
        field._char_cache = cache
    got = cache.get(chi.exps)
    if got is not None:
        return got
    from .galois_data import UnitGroup

    f = field.f
    N = field.group.exponent
    chit = {a: chi.value_exponent(field.sigma(a)) for a in field.units.elements}
    f_chi = f
    for d in divisors(f):
        if d % 4 == 2:
            continue
        if all(chit[x] == 0 for x in field.units.kernel_to(d)):
            f_chi = d
            break
    ud = UnitGroup(f_chi)
    prim: dict[int, int] = {}
    for a in ud.elements:
        b = a
        while gcd(b, f) != 1:  # lift a to a unit mod f (Dirichlet lift)
            b += f_chi
        prim[a] = chit[b % f]
    fld = chi.field
    if chi.exps == tuple(0 for _ in chi.exps):
        b1 = None  # trivial character: B_1 never used (even character)
    else:
        b1 = fld.from_zeta_sum((Fraction(a, f_chi), prim[a]) for a in ud.elements)
    got = (f_chi, prim, b1)
    cache[chi.exps] = got
    return got


def _chi_inverse(chi: Character) -> Character:
    return Character(chi.group, tuple(-t for t in chi.exps))


def _lvalue(field: AbelianFieldQ, chi: Character, depletion, smoothing):
    """L_{S,T}(chibar, 0) for odd chi: -B_1(chibar) times depletion factors
    (1 - chibar(v)) for finite v in S prime to f_chi, times smoothing factors
    (1 - chibar(v)·Nv); chibar(v) = 0 at v | f_chi."""
    chibar = _chi_inverse(chi)
    f_chi, prim, b1 = _char_data(field, chibar)
    fld = chibar.field
    val = fld.neg(b1)
    for ell in depletion:
        if ell == "oo":
            continue
        if f_chi % ell == 0:
            continue
        val = fld.mul(val, fld.sub(fld.one, fld.zeta_pow(prim[ell % f_chi])))
    for ell in smoothing:
        if f_chi % ell == 0:
            continue
        factor = fld.sub(fld.one, fld.scalar(ell, fld.zeta_pow(prim[ell % f_chi])))
        val = fld.mul(val, factor)
    return val


def _theta_characterwise(field: AbelianFieldQ, depletion, smoothing) -> GroupRingElement:
    """Assemble Theta from characterwise L-values by Fourier inversion; even
    characters contribute 0."""
    G = field.group
    values = []
    for chi in characters(G):
        if chi.is_odd(field.c):
            values.append(_lvalue(field, chi, depletion, smoothing))
        else:
            values.append(None)
    return fourier_assemble(G, values)


def theta(field: AbelianFieldQ, S=None, T=()) -> StickelbergerElement:
    """Theta_{S,T} by coset partial-zeta sums, cross-checked exactly against
    the Bernoulli/Fourier oracle. Disagreement raises MethodDisagreement."""
    if not field.is_cm:
        raise StructuralError("Stickelberger elements need a CM field")
    if S is None:
        S = ("oo",) + field.ram_primes
    S, T = _validate_places(field, S, T)
    key = (field, S, T)
    got = _theta_cache.get(key)
    if got is not None:
        return got
    value = _theta_coset(field, S, T)
    oracle = _theta_characterwise(field, S, T)
    if value != oracle:
        raise MethodDisagreement(
            f"coset vs Bernoulli mismatch for f={field.f}, S={S}, T={T}"
        )
    dr_ok = dr_condition_check(field, T)
    integral = value.is_integral()
    if dr_ok and not integral:
        raise ArithmeticError("integrality guarantee violated")
    st = StickelbergerElement(
        field=field,
        S=S,
        T=T,
        value=value,
        minus=minus_project(value, field.minus_ring(Q)),
        dr_ok=dr_ok,
        integral=integral,
        warning=not dr_ok,
    )
    _theta_cache[key] = st
    return st


def theta_sigma(field: AbelianFieldQ, p: int, sigma_prime) -> StickelbergerElement:
    """Theta_{Sigma(E), Sigma'}: depletion only at the archimedean place and
    ramified places above p, smoothing at sigma_prime (which may meet the
    ramified set). Characterwise construction only; no coset counterpart
    exists below the full ramified level."""
    if not field.is_cm:
        raise StructuralError("Stickelberger elements need a CM field")
    sigma = ("oo",) + tuple(ell for ell in field.ram_primes if ell == p)
    sp = tuple(sorted({int(x) for x in sigma_prime}))
    if set(sp) & set(sigma):
        raise StructuralError("smoothing set meets the depletion set")
    key = (field, ("sigma", p), sp)
    got = _theta_cache.get(key)
    if got is not None:
        return got
    value = _theta_characterwise(field, sigma, sp)
    st = StickelbergerElement(
        field=field,
        S=sigma,
        T=sp,
        value=value,
        minus=minus_project(value, field.minus_ring(Q)),
        dr_ok=True,
        integral=value.is_integral(),
        warning=False,
    )
    _theta_cache[key] = st
    return st


# ---------------------------------------------------------------------------
# Euler factors

def _one_minus_frob(field: AbelianFieldQ, pd: PlaceData, weight: int = 1) -> GroupRingElement:
    G = field.group
    return GroupRingElement.one(G, Q) - GroupRingElement.monomial(
        G, Q, G.inv(pd.frobenius), weight
    )


def euler_P(sup: AbelianFieldQ, sub: AbelianFieldQ, p: int) -> EulerFactor:
    """P(E'/E) = prod over v in Sigma(E') - Sigma(E) of (1 - sigma_v^{-1}),
    in Q[G_E]. The difference set is {p} or empty."""
    field_surjection(sup, sub)  # validates sub <= sup
    sup_sigma = {ell for ell in sup.ram_primes if ell == p}
    sub_sigma = {ell for ell in sub.ram_primes if ell == p}
    new = sorted(sup_sigma - sub_sigma)
    value = GroupRingElement.one(sub.group, Q)
    for ell in new:
        value = gr_mul(value, _one_minus_frob(sub, place_data(sub, ell)))
    return EulerFactor(kind="P", places=tuple(new), value=value)


def euler_Q(sup: AbelianFieldQ, sub: AbelianFieldQ, p: int, T=()) -> EulerFactor:
    """Q(K'/K) = prod over v in Sigma'(K') - Sigma'(K) of (1 - sigma_v^{-1} Nv),
    in Q[G_K]; requires Sigma(K') = Sigma(K)."""
    field_surjection(sup, sub)
    ss_sup = sigma_sets(sup, p, T)
    ss_sub = sigma_sets(sub, p, T)
    if set(ss_sup.sigma) != set(ss_sub.sigma):
        raise StructuralError("Sigma sets differ; Q-factor undefined")
    new = sorted(set(ss_sup.sigma_prime) - set(ss_sub.sigma_prime))
    value = GroupRingElement.one(sub.group, Q)
    for ell in new:
        pd = place_data(sub, ell)
        value = gr_mul(value, _one_minus_frob(sub, pd, pd.nv))
    return EulerFactor(kind="Q", places=tuple(new), value=value)


def x_factor(field: AbelianFieldQ, ell) -> EulerFactor:
    """x_v = e_v - sigma_v^{-1}·NI_v in Z[G] (well defined: NI_v absorbs the
    inertia ambiguity of the Frobenius representative)."""
    pd = place_data(field, ell)
    G = field.group
    ni = sum_of_elements(G, Q, pd.inertia)
    val = GroupRingElement.one(G, Q).scalar(pd.e) - gr_mul(
        GroupRingElement.monomial(G, Q, G.inv(pd.frobenius)), ni
    )
    return EulerFactor(kind="x", places=(ell,), value=val)


def y_factor(field: AbelianFieldQ, ell) -> EulerFactor:
    """y_v = e_v - sigma_v^{-1}·NI_v·Nv."""
    pd = place_data(field, ell)
    G = field.group
    ni = sum_of_elements(G, Q, pd.inertia)
    val = GroupRingElement.one(G, Q).scalar(pd.e) - gr_mul(
        GroupRingElement.monomial(G, Q, G.inv(pd.frobenius), pd.nv), ni
    )
    return EulerFactor(kind="y", places=(ell,), value=val)


def idempotent_eE(field: AbelianFieldQ, p: int) -> MinusElement:
    """e_E = prod over v in Sigma(E) of (1 - NG_v/#G_v) in Q[G_E]_-; the
    archimedean factor is (1-c)/2, which projects to 1."""
    if not field.is_cm:
        raise StructuralError("idempotent needs a CM field")
    G = field.group
    acc = GroupRingElement.one(G, Q)
    for ell in ("oo",) + tuple(e for e in field.ram_primes if e == p):
        pd = place_data(field, ell)
        ng = sum_of_elements(G, Q, pd.decomposition).scalar(
            Fraction(1, len(pd.decomposition))
        )
        acc = gr_mul(acc, GroupRingElement.one(G, Q) - ng)
    return minus_project(acc, field.minus_ring(Q))


def place_group_order(field: AbelianFieldQ, ell) -> int:
    """#G_v, the order of the decomposition group."""
    return len(place_data(field, ell).decomposition)


# ---------------------------------------------------------------------------
# identity checks

def _minus_json(x: MinusElement) -> dict:
    return x.to_json_dict()


def _report(identity: str, field_desc: str, lhs: MinusElement, rhs: MinusElement) -> dict:
    ok = lhs == rhs
    return {
        "identity": identity,
        "field": field_desc,
        "status": "ok" if ok else "fail",
        "lhs": _minus_json(lhs),
        "rhs": _minus_json(rhs),
        "difference": _minus_json(lhs - rhs),
    }


def check_tnorm(sup: AbelianFieldQ, sub: AbelianFieldQ, p: int, T=(), top=None,
                perturb=0) -> dict:
    """red_{E'/E}(Theta_{Sigma(E'),Sigma'}) = Theta_{Sigma(E),Sigma'}·P(E'/E),
    compared exactly in Q[G_E]_-. Sigma' comes from the ambient top field
    (default E'). A nonzero perturb is added to the first coefficient of the
    left side, a deliberate negative control."""
    if top is None:
        top = sup
    sp = sigma_sets(top, p, T).sigma_prime
    q = field_surjection(sup, sub)
    mring = sub.minus_ring(Q)
    lhs = minus_project(reduce_element(theta_sigma(sup, p, sp).value, q), mring)
    if perturb:
        bump = [0] * mring.rank
        bump[0] = perturb
        lhs = lhs + MinusElement(mring, bump)
    rhs = minus_project(
        gr_mul(theta_sigma(sub, p, sp).value, euler_P(sup, sub, p).value), mring
    )
    return _report(
        "tnorm", f"f={sup.f}->f={sub.f}, p={p}, T={tuple(sorted(T))}", lhs, rhs
    )


def check_st_conversion(top: AbelianFieldQ, p: int, T=()) -> list[dict]:
    """Theta_{S(E),T}·prod y_v = Theta_{Sigma(E),Sigma'(K)}·prod x_v over all
    CM subfields E of the top field, with x_v only at places ramified in E
    (elsewhere the factor degenerates to e_v = 1). J is the set of finite
    places of K ramified away from p."""
    ss = sigma_sets(top, p, T)
    J = tuple(sorted(set(ss.s_places) - set(ss.sigma)))
    assert set(J) == set(ss.sigma_prime) - set(T)
    out = []
    for E in subfield_lattice(top).members:
        mring = E.minus_ring(Q)
        lhs = theta(E, None, T).value
        for ell in J:
            lhs = gr_mul(lhs, y_factor(E, ell).value)
        rhs = theta_sigma(E, p, ss.sigma_prime).value
        for ell in J:
            if ell in E.ram_primes:
                rhs = gr_mul(rhs, x_factor(E, ell).value)
        out.append(
            _report(
                "st-conversion",
                f"K f={top.f}, E f={E.f} deg {E.degree}, p={p}, T={tuple(sorted(T))}",
                minus_project(lhs, mring),
                minus_project(rhs, mring),
            )
        )
    return out
