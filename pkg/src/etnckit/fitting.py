"""Fitting ideals over commutative group rings, exact determinants, and the
explicit two-generator local presentation at a tame place with its
determinant identity det = e - sigma^{-1}·q·N_I.

Determinants run fraction-free Bareiss elimination; exact division happens in
the regular representation (an integer linear solve), and on division failure
the Leibniz expansion takes over for n <= 5. Ideal comparisons that cannot be
decided over Z[G] are settled mod p^k as module-span inclusions.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations

from .group_ring import (
    FiniteAbelianGroup,
    GroupRingElement,
    GroupSurjection,
    MinusElement,
    MinusRing,
    Q,
    StructuralError,
    UnsupportedError,
    Z,
    gr_mul,
    reduce_element,
    sum_of_elements,
)
from .snf import snf_mod_pk, solve_mod_pk, val_p

LEIBNIZ_LIMIT = 5


class _DivisionFailure(ArithmeticError):
    pass


def _space(x):
    """Hashable identity of the ambient ring of an element."""
    if isinstance(x, MinusElement):
        return x.parent
    return (x.group, x.ring)


def _zero_like(x):
    if isinstance(x, MinusElement):
        return x.parent.zero()
    return GroupRingElement.zero(x.group, x.ring)


def _one_like(x):
    if isinstance(x, MinusElement):
        return x.parent.one()
    return GroupRingElement.one(x.group, x.ring)


def _basis_products(x):
    """Columns of the regular representation of x (coefficient vectors of
    x times each basis element)."""
    if isinstance(x, MinusElement):
        parent = x.parent
        cols = []
        for t in range(parent.rank):
            delta = [0] * parent.rank
            delta[t] = 1
            cols.append((x * MinusElement(parent, delta)).coeffs)
        return cols
    table = x.group.mul_table()
    n = x.group.order
    cols = []
    for j in range(n):
        col = [0] * n
        for i, a in enumerate(x.coeffs):
            if a:
                col[table[i][j]] = a
        cols.append(col)
    return cols


def _exact_divide(num, den):
    """q with q·den = num, via the regular representation of den. Demands a
    unique quotient: zero-divisor denominators raise _DivisionFailure even
    when some quotient exists, because only the unique one is the Bareiss
    minor."""
    if den == _one_like(den):
        return num
    cols = _basis_products(den)
    n = len(cols)
    mat = [[Fraction(cols[j][i]) for j in range(n)] for i in range(n)]
    sol = _solve_unique(mat, [Fraction(c) for c in num.coeffs])
    if sol is None:
        raise _DivisionFailure
    if isinstance(num, MinusElement):
        return MinusElement(num.parent, sol)
    if num.ring == Z:
        assert all(c.denominator == 1 for c in sol)
        sol = [c.numerator for c in sol]
    return GroupRingElement(num.group, num.ring, sol)


def _solve_unique(mat, target):
    """Solution of a square system over Q when the matrix is nonsingular;
    None on a singular matrix."""
    n = len(mat)
    aug = [row[:] + [t] for row, t in zip(mat, target)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            return None
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [v * inv for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    return [aug[r][n] for r in range(n)]


def det_leibniz(matrix) -> object:
    n = len(matrix)
    acc = _zero_like(matrix[0][0])
    for perm in permutations(range(n)):
        sign = 1
        seen = list(perm)
        for i in range(n):
            for j in range(i + 1, n):
                if seen[i] > seen[j]:
                    sign = -sign
        term = _one_like(matrix[0][0])
        for i in range(n):
            term = term * matrix[i][perm[i]]
        acc = acc + term.scalar(sign)
    return acc


def _det_bareiss(matrix):
    n = len(matrix)
    a = [list(row) for row in matrix]
    sign = 1
    prev = _one_like(a[0][0])
    for k in range(n - 1):
        if a[k][k].is_zero():
            piv = next((r for r in range(k + 1, n) if not a[r][k].is_zero()), None)
            if piv is None:
                return _zero_like(a[0][0])
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = _exact_divide(a[k][k] * a[i][j] - a[i][k] * a[k][j], prev)
            a[i][k] = _zero_like(a[0][0])
        prev = a[k][k]
    return a[n - 1][n - 1] if sign == 1 else a[n - 1][n - 1].neg()


def det_group_ring(matrix) -> object:
    """Exact determinant of a square matrix over one commutative group ring
    or minus quotient."""
    n = len(matrix)
    if n == 0:
        raise StructuralError("empty matrix")
    if any(len(row) != n for row in matrix):
        raise StructuralError("matrix is not square")
    spaces = {_space(e) for row in matrix for e in row}
    if len(spaces) != 1:
        raise StructuralError("matrix entries live in different rings")
    if n == 1:
        return matrix[0][0]
    try:
        return _det_bareiss(matrix)
    except _DivisionFailure:
        if n > LEIBNIZ_LIMIT:
            raise ArithmeticError(
                f"division-free fallback is limited to n <= {LEIBNIZ_LIMIT}"
            ) from None
        return det_leibniz(matrix)


# ---------------------------------------------------------------------------
# presentations and Fitting ideals

@dataclass(frozen=True)
class QuadraticPresentation:
    """Square presentation matrix with named generators."""

    matrix: tuple
    labels: tuple

    def __init__(self, matrix, labels=None):
        n = len(matrix)
        if n == 0 or any(len(row) != n for row in matrix):
            raise StructuralError("quadratic presentation must be square")
        if len({_space(e) for row in matrix for e in row}) != 1:
            raise StructuralError("entries live in different rings")
        if labels is None:
            labels = tuple(f"g{j}" for j in range(n))
        if len(labels) != n:
            raise StructuralError("one label per generator")
        object.__setattr__(self, "matrix", tuple(tuple(row) for row in matrix))
        object.__setattr__(self, "labels", tuple(labels))

    @property
    def size(self) -> int:
        return len(self.matrix)

    def to_json_dict(self) -> dict:
        return {
            "labels": list(self.labels),
            "matrix": [[e.to_json_dict() for e in row] for row in self.matrix],
        }


@dataclass(frozen=True)
class GeneralPresentation:
    """r relations on s generators; r may be 0."""

    matrix: tuple
    cols: int

    def __init__(self, matrix, cols=None):
        matrix = tuple(tuple(row) for row in matrix)
        if matrix:
            widths = {len(row) for row in matrix}
            if len(widths) != 1:
                raise StructuralError("ragged relation matrix")
            (width,) = widths
            if cols is None:
                cols = width
            if cols != width:
                raise StructuralError("declared generator count != row width")
            if len({_space(e) for row in matrix for e in row}) != 1:
                raise StructuralError("entries live in different rings")
        elif cols is None:
            raise StructuralError("empty presentation needs an explicit generator count")
        if cols < 1:
            raise StructuralError("at least one generator")
        object.__setattr__(self, "matrix", matrix)
        object.__setattr__(self, "cols", cols)

    @property
    def rows(self) -> int:
        return len(self.matrix)

    def to_json_dict(self) -> dict:
        return {
            "cols": self.cols,
            "matrix": [[e.to_json_dict() for e in row] for row in self.matrix],
        }


def fitting_ideal(pres) -> list:
    """Generators of the zeroth Fitting ideal: the determinant for a square
    presentation, all maximal minors in general, empty (the zero ideal) when
    there are fewer relations than generators."""
    if isinstance(pres, QuadraticPresentation):
        return [det_group_ring([list(row) for row in pres.matrix])]
    r, s = pres.rows, pres.cols
    if r < s:
        return []
    gens = []
    for rows in combinations(range(r), s):
        minor = [[pres.matrix[i][j] for j in range(s)] for i in rows]
        gens.append(det_group_ring(minor))
    return gens


def _span_columns(gens, p: int, k: int):
    """Integer columns mod p^k spanning the Z/p^k[G]-module generated by
    gens: every gen times every basis element."""
    modulus = p**k
    cols = []
    for g in gens:
        for col in _basis_products(g):
            cols.append([_to_residue(c, p, modulus) for c in col])
    return cols


def _to_residue(c, p: int, modulus: int) -> int:
    c = Fraction(c)
    if c.denominator % p == 0:
        raise UnsupportedError("coefficient with p in the denominator")
    return c.numerator * pow(c.denominator, -1, modulus) % modulus


def ideal_contains_mod_pk(gens, x, p: int, k: int) -> bool:
    """x in (gens) as Z/p^k[G]-modules, decided by a linear solve."""
    modulus = p**k
    target = [_to_residue(c, p, modulus) for c in x.coeffs]
    cols = _span_columns(gens, p, k)
    if not cols:
        return all(t % modulus == 0 for t in target)
    mat = [[col[i] for col in cols] for i in range(len(target))]
    status, _ = solve_mod_pk(mat, target, p, k)
    return status == "solved"


def ideals_equal_mod_pk(gens_a, gens_b, p: int, k: int) -> bool:
    return all(ideal_contains_mod_pk(gens_a, x, p, k) for x in gens_b) and all(
        ideal_contains_mod_pk(gens_b, x, p, k) for x in gens_a
    )


def zp_content_exponent(x: GroupRingElement, p: int, k: int) -> int:
    """v_p of the Z/p^k-Fitting ideal of Z/p^k[G]/(x): the capped valuation
    sum down the Smith diagonal of the regular representation."""
    modulus = p**k
    cols = _basis_products(x)
    n = len(cols)
    mat = [[_to_residue(cols[j][i], p, modulus) for j in range(n)] for i in range(n)]
    D, _, _ = snf_mod_pk(mat, p, k)
    total = sum(val_p(D[i][i], p, k) for i in range(n))
    return min(total, k)


# ---------------------------------------------------------------------------
# the local presentation at a tame place

class LocalRWParams:
    """Local data (G, tau, sigma, q): cyclic inertia generated by tau of
    order e, Frobenius lift sigma, residue size q with e | q-1, and G
    generated by inertia together with sigma."""

    def __init__(self, group: FiniteAbelianGroup, tau, sigma, q: int):
        tau = group.element(tau)
        sigma = group.element(sigma)
        e = group.element_order(tau)
        if q < 2:
            raise StructuralError("residue size must be at least 2")
        if (q - 1) % e:
            raise StructuralError("tameness requires e | q-1")
        if group.subgroup_generated([tau, sigma]) != frozenset(group.elements):
            raise StructuralError("inertia and Frobenius must generate the group")
        self.group = group
        self.tau = tau
        self.sigma = sigma
        self.q = q
        self.e = e

    def inertia_norm(self) -> GroupRingElement:
        G = self.group
        return sum_of_elements(
            G, Z, [G.pow(self.tau, i) for i in range(self.e)]
        )

    def z_element(self) -> GroupRingElement:
        """z = sigma^{-1}·((e-1) + (e-2)tau + ... + tau^{e-2}); zero for e = 1."""
        G = self.group
        acc = GroupRingElement.zero(G, Z)
        sigma_inv = G.inv(self.sigma)
        for i in range(self.e - 1):
            g = G.mul(sigma_inv, G.pow(self.tau, i))
            acc = acc + GroupRingElement.monomial(G, Z, g, self.e - 1 - i)
        return acc


def local_rw_presentation(params: LocalRWParams) -> QuadraticPresentation:
    """The 2x2 relation matrix on the generators (g_sigma, g_tau): first row
    the main local relation, second row the quotient row defining x."""
    G = params.group
    one = GroupRingElement.one(G, Z)
    sigma_inv_mono = GroupRingElement.monomial(G, Z, G.inv(params.sigma))
    ni = params.inertia_norm()
    top_right = one - sigma_inv_mono + (sigma_inv_mono * ni).scalar(
        (1 - params.q) // params.e
    )
    row1 = [GroupRingElement.monomial(G, Z, params.tau) - one, top_right]
    row2 = [one.scalar(-params.e), params.z_element().neg()]
    return QuadraticPresentation([row1, row2], labels=("g_sigma", "g_tau"))


def verify_lemma_tx(params: LocalRWParams) -> dict:
    """det of the local presentation equals y = e - sigma^{-1}·q·N_I, and the
    x-row combination e·(1-sigma^{-1}) - z·(tau-1) equals e - sigma^{-1}·N_I."""
    G = params.group
    one = GroupRingElement.one(G, Z)
    sigma_inv = GroupRingElement.monomial(G, Z, G.inv(params.sigma))
    tau_mono = GroupRingElement.monomial(G, Z, params.tau)
    ni = params.inertia_norm()
    det = det_group_ring([list(r) for r in local_rw_presentation(params).matrix])
    y = one.scalar(params.e) - (sigma_inv * ni).scalar(params.q)
    x_image = (one - sigma_inv).scalar(params.e) - params.z_element() * (tau_mono - one)
    x = one.scalar(params.e) - sigma_inv * ni
    checks = [
        {
            "name": "det equals e - sigma^{-1}·q·N_I",
            "status": "ok" if det == y else "fail",
            "details": {"e": params.e, "q": params.q, "order": G.order},
        },
        {
            "name": "x-row image equals e - sigma^{-1}·N_I",
            "status": "ok" if x_image == x else "fail",
            "details": {},
        },
    ]
    return {
        "identity": "local-presentation-determinant",
        "status": "ok" if all(c["status"] == "ok" for c in checks) else "fail",
        "checks": checks,
    }


def lemma_tx_sweep(max_e: int = 6, max_q: int = 13, max_order: int = 24):
    """All local parameter realizations covering every (e, q, |G|) triple
    with e <= max_e, q prime <= max_q, e | q-1, |G| <= max_order: split
    groups C_e x C_m with every Frobenius twist, and cyclic groups C_n with
    inertia the index-n/e subgroup. Yields (params, descriptor)."""
    primes = [q for q in range(2, max_q + 1) if all(q % d for d in range(2, q))]
    for e in range(1, max_e + 1):
        for q in primes:
            if (q - 1) % e:
                continue
            for m in range(1, max_order // e + 1):
                if e == 1:
                    G = FiniteAbelianGroup((m,))
                    yield (
                        LocalRWParams(G, (0,), (1,), q),
                        {"e": e, "q": q, "orders": [m], "shape": "split", "twist": 0},
                    )
                    continue
                G = FiniteAbelianGroup((e, m))
                for s in range(e):
                    yield (
                        LocalRWParams(G, (1, 0), (s, 1), q),
                        {"e": e, "q": q, "orders": [e, m], "shape": "split", "twist": s},
                    )
            for n in range(e, max_order + 1, e):
                G = FiniteAbelianGroup((n,))
                yield (
                    LocalRWParams(G, (n // e,), (1,), q),
                    {"e": e, "q": q, "orders": [n], "shape": "cyclic", "twist": 0},
                )


def det_functoriality_check(matrix, q: GroupSurjection, u: GroupRingElement) -> dict:
    """red(det) = det(red) under a group surjection, and appending a final
    diagonal block u (zeros above, arbitrary junk left of it) multiplies the
    determinant by u."""
    det = det_group_ring(matrix)
    red_then_det = det_group_ring(
        [[reduce_element(e, q) for e in row] for row in matrix]
    )
    coinvariance_ok = reduce_element(det, q) == red_then_det
    n = len(matrix)
    zero = _zero_like(matrix[0][0])
    extended = [list(row) + [zero] for row in matrix]
    extended.append([matrix[i % n][i // 2 % n] for i in range(n)] + [u])
    block_ok = det_group_ring(extended) == det * u
    checks = [
        {"name": "reduction commutes with det", "status": "ok" if coinvariance_ok else "fail", "details": {}},
        {"name": "diagonal block multiplies det", "status": "ok" if block_ok else "fail", "details": {}},
    ]
    return {
        "identity": "det-functoriality",
        "status": "ok" if all(c["status"] == "ok" for c in checks) else "fail",
        "checks": checks,
    }
