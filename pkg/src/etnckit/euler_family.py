"""Norm-compatible families over a CM field lattice and the finite-level
lifting solver over Z/p^k[G]_-.

A family entry lives in R_E = e_E·Z_p[G_E]_- at precision k, stored as an
integral representative modulo p^{k+r} with r = v_p(prod of decomposition
group orders over Sigma(E)); two representatives are equal when p^r·e_E times
their difference vanishes mod p^{k+r}. The lifting problem assembles all
member conditions into one linear system over Z/p^{k+max r} and solves it by
Smith normal form, returning a certificate row when infeasible.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import prod

from .galois_data import (
    AbelianFieldQ,
    FieldLattice,
    build_field,
    place_data,
    sigma_sets,
)
from .group_ring import (
    GroupRingElement,
    MinusElement,
    Q,
    ResidueRing,
    StructuralError,
    gr_mul,
    minus_project,
    reduce_element,
)
from .lvalues import idempotent_eE
from .snf import check_certificate, solve_mod_pk, val_p


def denominator_exponent(field: AbelianFieldQ, p: int) -> int:
    """r = v_p of the product of #G_v over v in Sigma(E)."""
    orders = [len(place_data(field, "oo").decomposition)]
    if p in field.ram_primes:
        orders.append(len(place_data(field, p).decomposition))
    return val_p(prod(orders), p, 64)


@dataclass(frozen=True)
class REElement:
    """Class of e_E·x in R_E/p^k, stored as the representative x mod p^{k+r}."""

    field: AbelianFieldQ
    p: int
    k: int
    r: int
    rep: MinusElement  # over Z/p^{k+r}

    def rep_lift(self) -> MinusElement:
        """Representative lifted to Q[G]_- (canonical integer coefficients)."""
        return MinusElement(self.field.minus_ring(Q), [int(c) for c in self.rep.coeffs])


def re_element(field: AbelianFieldQ, p: int, k: int, coeffs) -> REElement:
    r = denominator_exponent(field, p)
    ring = ResidueRing(p, k + r)
    return REElement(field, p, k, r, MinusElement(field.minus_ring(ring), coeffs))


def _vp_fraction(c: Fraction, p: int, cap: int) -> int:
    if c == 0:
        return cap
    if c.denominator % p == 0:
        raise StructuralError("p in denominator where integrality was promised")
    return val_p(c.numerator, p, cap)


def _is_zero_to_precision(x: MinusElement, p: int, prec: int) -> bool:
    """All coefficients of the exact rational minus element have v_p >= prec."""
    return all(_vp_fraction(Fraction(c), p, prec) >= prec for c in x.coeffs)


class NormFamily:
    """Entries E -> REElement over a field lattice, common (p, k)."""

    def __init__(self, lattice: FieldLattice, p: int, k: int, entries: dict, T=(), order=None):
        if k < 1:
            raise StructuralError("precision k must be >= 1")
        self.lattice = lattice
        self.p = p
        self.k = k
        self.T = tuple(sorted(T))
        for E in lattice.members:
            if E not in entries:
                raise StructuralError(f"missing family entry for f={E.f}")
            z = entries[E]
            if (z.p, z.k) != (p, k):
                raise StructuralError("entry precision mismatch")
        self.entries = dict(entries)
        canonical = sigma_sets(lattice.top, p, self.T).sigma
        if order is None:
            order = canonical
        elif set(order) != set(canonical) or len(order) != len(canonical):
            raise StructuralError(
                f"stage ordering must arrange exactly {list(canonical)}"
            )
        self.order = tuple(order)

    def to_json_dict(self) -> dict:
        return {
            "p": self.p,
            "k": self.k,
            "entries": [
                {
                    "field": E.to_json_dict(),
                    "coeffs": [str(c) for c in self.entries[E].rep.coeffs],
                }
                for E in self.lattice.members
            ],
        }

    @classmethod
    def from_json_dict(cls, d: dict, T=(), order=None) -> "NormFamily":
        p, k = int(d["p"]), int(d["k"])
        fields = []
        coeff_lists = []
        for ent in d["entries"]:
            E = build_field(int(ent["field"]["f"]), ent["field"].get("H", []))
            fields.append(E)
            coeff_lists.append([int(c) for c in ent["coeffs"]])
        top = None
        for F in fields:
            try:
                for E in fields:
                    from .galois_data import field_surjection

                    field_surjection(F, E)
                top = F
                break
            except StructuralError:
                continue
        if top is None:
            raise StructuralError("entries have no common top field")
        lattice = FieldLattice(top, fields, close_joins=False)
        if set(lattice.members) != set(fields):
            raise StructuralError("entry list is not the lattice member list")
        entries = {
            E: re_element(E, p, k, cs) for E, cs in zip(fields, coeff_lists)
        }
        return cls(lattice, p, k, entries, T=T, order=order)


def induce_family(lattice: FieldLattice, p: int, k: int, top_coeffs, T=(), order=None) -> NormFamily:
    """The induced family z_E = e_E·red_{K/E}(ztilde) for ztilde in
    Z/p^k[G_K]_- given by integer transversal coefficients on the top field."""
    K = lattice.top
    mrK = K.minus_ring(Q)
    ztilde = MinusElement(mrK, [int(c) for c in top_coeffs])
    entries = {}
    for E in lattice.members:
        q = lattice.surjection(K, E)
        red = minus_project(reduce_element(ztilde.lift(), q), E.minus_ring(Q))
        entries[E] = re_element(E, p, k, [int(c) for c in red.coeffs])
    return NormFamily(lattice, p, k, entries, T=T, order=order)


# ---------------------------------------------------------------------------
# stage factors and residuals

def _stage_factor(fam: NormFamily, E: AbelianFieldQ, i: int) -> MinusElement:
    """P_i(K/E) = prod over stage positions j > i of (1 - sigma_{v_j}^{-1}),
    restricted to v_j in Sigma(K) - Sigma(E); over Q[G_E]_-."""
    K = fam.lattice.top
    sig_K = set(sigma_sets(K, fam.p, fam.T).sigma)
    sig_E = set(sigma_sets(E, fam.p, fam.T).sigma)
    G = E.group
    acc = GroupRingElement.one(G, Q)
    for j, v in enumerate(fam.order, start=1):
        if j > i and v in sig_K - sig_E:
            pd = place_data(E, v)
            acc = gr_mul(
                acc,
                GroupRingElement.one(G, Q)
                - GroupRingElement.monomial(G, Q, G.inv(pd.frobenius)),
            )
    return minus_project(acc, E.minus_ring(Q))


def _full_factor(fam: NormFamily, sup: AbelianFieldQ, sub: AbelianFieldQ) -> MinusElement:
    """P(E'/E) over Q[G_E]_-."""
    from .lvalues import euler_P

    return minus_project(euler_P(sup, sub, fam.p).value, sub.minus_ring(Q))


def _edge_residual(fam: NormFamily, sup: AbelianFieldQ, sub: AbelianFieldQ,
                   sup_rep: MinusElement, factor: MinusElement) -> MinusElement:
    """p^r·e_E·(red(sup_rep) - x_E)·factor, exact over Q[G_E]_-."""
    q = fam.lattice.surjection(sup, sub)
    mr = sub.minus_ring(Q)
    red = minus_project(reduce_element(sup_rep.lift(), q), mr)
    diff = red - fam.entries[sub].rep_lift()
    e_sub = idempotent_eE(sub, fam.p)
    r = fam.entries[sub].r
    return (e_sub * diff * factor).scalar(fam.p**r)


def is_norm_compatible(fam: NormFamily) -> dict:
    """Per-edge verdicts for (e_E·red(ztilde_{E'}) - z_E)·P(E'/E) = 0 in
    R_E at precision k."""
    checks = []
    for sub, sup in fam.lattice.edges():
        res = _edge_residual(
            fam, sup, sub, fam.entries[sup].rep_lift(), _full_factor(fam, sup, sub)
        )
        prec = fam.k + fam.entries[sub].r
        ok = _is_zero_to_precision(res, fam.p, prec)
        checks.append(
            {
                "name": f"edge f={sup.f}(deg {sup.degree})->f={sub.f}(deg {sub.degree})",
                "status": "ok" if ok else "fail",
                "details": {"precision": prec},
            }
        )
    return {
        "identity": "norm-compatible",
        "status": "ok" if all(c["status"] == "ok" for c in checks) else "fail",
        "checks": checks,
    }


def lift_well_defined_check(fam: NormFamily, sup: AbelianFieldQ, sub: AbelianFieldQ,
                            w_coeffs) -> bool:
    """The compatibility product is unchanged when the representative of the
    upper entry moves by p^{r'}·(1-e_{E'})·w, which e_{E'} kills."""
    r_sup = fam.entries[sup].r
    mr_sup = sup.minus_ring(Q)
    w = MinusElement(mr_sup, [int(c) for c in w_coeffs])
    one = mr_sup.one()
    delta = ((one - idempotent_eE(sup, fam.p)) * w).scalar(fam.p**r_sup)
    if any(Fraction(c).denominator != 1 for c in delta.coeffs):
        raise StructuralError("perturbation is not integral")
    factor = _full_factor(fam, sup, sub)
    base = fam.entries[sup].rep_lift()
    res0 = _edge_residual(fam, sup, sub, base, factor)
    res1 = _edge_residual(fam, sup, sub, base + delta, factor)
    prec = fam.k + fam.entries[sub].r
    return _is_zero_to_precision(res1 - res0, fam.p, prec)


# ---------------------------------------------------------------------------
# the lifting solver

@dataclass(frozen=True)
class LiftResult:
    status: str                      # "solved" | "infeasible"
    lift: MinusElement | None        # over Z/p^k on the top group
    witness: MinusElement | None     # over Z/p^{k+max r}, solves the system
    certificate: tuple | None        # row u with u·A = 0, u·b != 0 mod p^{k'}
    stage: int
    precision: int

    def to_json_dict(self) -> dict:
        if self.status == "solved":
            return {"status": "solved", "lift": [str(c) for c in self.lift.coeffs]}
        return {"status": "infeasible", "certificate": [str(c) for c in self.certificate]}


def _as_residue(c: Fraction, p: int, modulus: int) -> int:
    c = Fraction(c)
    if c.denominator % p == 0:
        raise StructuralError("non p-integral system coefficient")
    return c.numerator * pow(c.denominator, -1, modulus) % modulus


def _assemble_system(fam: NormFamily, i: int, k: int):
    """Rows of p^{max r}·e_E·(red(ztilde) - x_E)·P_i = 0 over Z/p^{k+max r},
    unknowns the transversal coefficients of ztilde on the top field."""
    K = fam.lattice.top
    p = fam.p
    members = fam.lattice.members
    max_r = max(fam.entries[E].r for E in members)
    kp = k + max_r
    modulus = p**kp
    mrK = K.minus_ring(Q)
    n_unknowns = mrK.rank
    A: list[list[int]] = []
    b: list[int] = []
    for E in members:
        mrE = E.minus_ring(Q)
        q = fam.lattice.surjection(K, E)
        scale = Fraction(p**max_r)
        e_pi = (idempotent_eE(E, fam.p) * _stage_factor(fam, E, i)).scalar(scale)
        cols = []
        for t in range(n_unknowns):
            delta = [0] * n_unknowns
            delta[t] = 1
            red = minus_project(
                reduce_element(MinusElement(mrK, delta).lift(), q), mrE
            )
            cols.append((red * e_pi).coeffs)
        rhs = (fam.entries[E].rep_lift() * e_pi).coeffs
        for s in range(mrE.rank):
            A.append([_as_residue(col[s], p, modulus) for col in cols])
            b.append(_as_residue(rhs[s], p, modulus))
    return A, b, kp


def lift_family(fam: NormFamily, i: int | None = None, k: int | None = None) -> LiftResult:
    """Solve for ztilde_K in Z/p^k[G_K]_- with (e_E·red(ztilde_K) - z_E)·P_i = 0
    in R_E/p^k for every member E. Default stage is i = m (empty P), default
    precision the family's k."""
    if k is None:
        k = fam.k
    if k < 1:
        raise StructuralError("precision k must be >= 1")
    if k > fam.k:
        raise StructuralError("family entries are below the requested precision")
    if i is None:
        i = len(fam.order)
    if not 0 <= i <= len(fam.order):
        raise StructuralError("stage index out of range")
    A, b, kp = _assemble_system(fam, i, k)
    p = fam.p
    status, obj = solve_mod_pk(A, b, p, kp)
    K = fam.lattice.top
    if status == "infeasible":
        assert check_certificate(A, b, obj, p, kp)
        return LiftResult("infeasible", None, None, tuple(obj), i, k)
    witness = MinusElement(K.minus_ring(ResidueRing(p, kp)), obj)
    lift = MinusElement(K.minus_ring(ResidueRing(p, k)), obj)
    return LiftResult("solved", lift, witness, None, i, k)


def verify_lift(fam: NormFamily, witness: MinusElement, i: int, k: int) -> dict:
    """Independent residual re-check of a solver result against every member."""
    checks = []
    wit_q = MinusElement(
        fam.lattice.top.minus_ring(Q), [int(c) for c in witness.coeffs]
    )
    for E in fam.lattice.members:
        res = _edge_residual(fam, fam.lattice.top, E, wit_q, _stage_factor(fam, E, i))
        prec = k + fam.entries[E].r
        ok = _is_zero_to_precision(res, fam.p, prec)
        reduced = [
            Fraction(c).numerator * pow(Fraction(c).denominator, -1, fam.p**prec)
            % fam.p**prec
            if c != 0
            else 0
            for c in res.coeffs
        ]
        checks.append(
            {
                "name": f"member f={E.f} deg {E.degree}",
                "status": "ok" if ok else "fail",
                "details": {"residual": [str(x) for x in reduced], "precision": prec},
            }
        )
    return {
        "identity": "lift-residuals",
        "status": "ok" if all(c["status"] == "ok" for c in checks) else "fail",
        "checks": checks,
    }


def brute_force_feasible(fam: NormFamily, i: int | None = None, k: int | None = None) -> bool:
    """Oracle for small cases: enumerate every candidate ztilde mod p^k and
    test whether some higher-precision correction satisfies the system; the
    correction test is a valuation comparison against one precomputed Smith
    form of the scaled system."""
    from itertools import product

    from .snf import snf_mod_pk

    if k is None:
        k = fam.k
    if i is None:
        i = len(fam.order)
    A, b, kp = _assemble_system(fam, i, k)
    p = fam.p
    modulus = p**kp
    n = len(A[0]) if A else 0
    m = len(A)
    pk = p**k
    # candidates z mod p^k lift to z + p^k·w; solvable iff p^k·A·w = b - A·z
    scaled = [[a * pk % modulus for a in row] for row in A]
    D, U, V = snf_mod_pk(scaled, p, kp)
    dvals = [val_p(D[j][j], p, kp) if j < n else kp for j in range(m)]
    for cand in product(range(pk), repeat=n):
        rhs = [
            (b[s] - sum(A[s][t] * cand[t] for t in range(n))) % modulus
            for s in range(m)
        ]
        c = [sum(U[j][s] * rhs[s] for s in range(m)) % modulus for j in range(m)]
        if all(val_p(c[j], p, kp) >= dvals[j] for j in range(m)):
            return True
    return False
