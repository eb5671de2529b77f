"""Smith normal form over Z and over Z/p^K, with unimodular transforms.

The Z variant drives unit-group quotients and integral solvability tests.
The Z/p^K variant pivots on entries of minimal p-valuation (Z/p^K is not a
field, so ordinary Gaussian elimination is unsound) and powers the
norm-family lifting solver, including infeasibility certificates.
"""
from __future__ import annotations


def _identity(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def snf_z(A: list[list[int]]) -> tuple[list[list[int]], list[list[int]], list[list[int]]]:
    """Return (D, U, V) with U*A*V = D diagonal, d_1 | d_2 | ..., U, V unimodular."""
    m = len(A)
    n = len(A[0]) if m else 0
    D = [list(row) for row in A]
    U = _identity(m)
    V = _identity(n)

    def row_sub(i: int, q: int, t: int) -> None:
        D[i] = [a - q * b for a, b in zip(D[i], D[t])]
        U[i] = [a - q * b for a, b in zip(U[i], U[t])]

    def col_sub(j: int, q: int, t: int) -> None:
        for row in D:
            row[j] -= q * row[t]
        for row in V:
            row[j] -= q * row[t]

    def swap_rows(i: int, t: int) -> None:
        D[i], D[t] = D[t], D[i]
        U[i], U[t] = U[t], U[i]

    def swap_cols(j: int, t: int) -> None:
        for row in D:
            row[j], row[t] = row[t], row[j]
        for row in V:
            row[j], row[t] = row[t], row[j]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                a = abs(D[i][j])
                if a and (best is None or a < best[0]):
                    best = (a, i, j)
        if best is None:
            break
        _, bi, bj = best
        swap_rows(bi, t)
        swap_cols(bj, t)
        if D[t][t] < 0:
            D[t] = [-a for a in D[t]]
            U[t] = [-a for a in U[t]]
        dirty = False
        for i in range(m):
            if i != t and D[i][t]:
                q = D[i][t] // D[t][t]
                row_sub(i, q, t)
                if D[i][t]:
                    dirty = True
        for j in range(n):
            if j != t and D[t][j]:
                q = D[t][j] // D[t][t]
                col_sub(j, q, t)
                if D[t][j]:
                    dirty = True
        if dirty:
            continue
        # enforce d_t | every remaining entry
        bad = None
        for i in range(t + 1, m):
            for j in range(t + 1, n):
                if D[i][j] % D[t][t]:
                    bad = i
                    break
            if bad is not None:
                break
        if bad is not None:
            D[t] = [a + b for a, b in zip(D[t], D[bad])]
            U[t] = [a + b for a, b in zip(U[t], U[bad])]
            continue
        t += 1
    return D, U, V


def solve_z(A: list[list[int]], b: list[int]) -> list[int] | None:
    """An integer solution x of A x = b, or None if none exists."""
    m = len(A)
    n = len(A[0]) if m else 0
    D, U, V = snf_z(A)
    c = [sum(U[i][j] * b[j] for j in range(m)) for i in range(m)]
    y = [0] * n
    for i in range(m):
        d = D[i][i] if i < n else 0
        if d == 0:
            if c[i] != 0:
                return None
        else:
            if c[i] % d:
                return None
            y[i] = c[i] // d
    return [sum(V[i][j] * y[j] for j in range(n)) for i in range(n)]


def val_p(x: int, p: int, cap: int) -> int:
    """p-adic valuation of x as a residue mod p^cap; val(0) = cap."""
    x %= p**cap
    if x == 0:
        return cap
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


def snf_mod_pk(
    A: list[list[int]], p: int, K: int
) -> tuple[list[list[int]], list[list[int]], list[list[int]]]:
    """(D, U, V) over Z/p^K with U*A*V = D, diagonal entries exact powers of p
    in ascending valuation, U and V invertible mod p^K."""
    mod = p**K
    m = len(A)
    n = len(A[0]) if m else 0
    D = [[a % mod for a in row] for row in A]
    U = _identity(m)
    V = _identity(n)

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if D[i][j]:
                    v = val_p(D[i][j], p, K)
                    if best is None or v < best[0]:
                        best = (v, i, j)
        if best is None:
            break
        v, bi, bj = best
        D[bi], D[t] = D[t], D[bi]
        U[bi], U[t] = U[t], U[bi]
        for row in D:
            row[bj], row[t] = row[t], row[bj]
        for row in V:
            row[bj], row[t] = row[t], row[bj]
        # normalize pivot to exactly p^v
        unit = D[t][t] // p**v
        inv = pow(unit, -1, mod)
        D[t] = [(a * inv) % mod for a in D[t]]
        U[t] = [(a * inv) % mod for a in U[t]]
        piv = p**v
        for i in range(m):
            if i != t and D[i][t]:
                q = D[i][t] // piv  # exact: pivot has minimal valuation
                D[i] = [(a - q * b) % mod for a, b in zip(D[i], D[t])]
                U[i] = [(a - q * b) % mod for a, b in zip(U[i], U[t])]
        for j in range(n):
            if j != t and D[t][j]:
                q = D[t][j] // piv
                for row in D:
                    row[j] = (row[j] - q * row[t]) % mod
                for row in V:
                    row[j] = (row[j] - q * row[t]) % mod
        t += 1
    return D, U, V


def solve_mod_pk(
    A: list[list[int]], b: list[int], p: int, K: int
) -> tuple[str, list[int]]:
    """Solve A x = b over Z/p^K.

    Returns ("solved", x) or ("infeasible", u) where u is a certificate row:
    u*A = 0 and u*b != 0 mod p^K, so no solution can exist."""
    mod = p**K
    m = len(A)
    n = len(A[0]) if m else 0
    D, U, V = snf_mod_pk(A, p, K)
    c = [sum(U[i][j] * b[j] for j in range(m)) % mod for i in range(m)]
    y = [0] * n
    for i in range(m):
        dv = val_p(D[i][i], p, K) if i < n else K
        cv = val_p(c[i], p, K)
        if cv < dv:
            mult = p ** (K - dv)
            cert = [(mult * U[i][j]) % mod for j in range(m)]
            return "infeasible", cert
        if i < n and D[i][i]:
            y[i] = c[i] // p**dv
    x = [sum(V[i][j] * y[j] for j in range(n)) % mod for i in range(n)]
    return "solved", x


def check_certificate(
    A: list[list[int]], b: list[int], u: list[int], p: int, K: int
) -> bool:
    """True iff u*A = 0 and u*b != 0 mod p^K (a valid infeasibility witness)."""
    mod = p**K
    m = len(A)
    n = len(A[0]) if m else 0
    ua = [sum(u[i] * A[i][j] for i in range(m)) % mod for j in range(n)]
    ub = sum(u[i] * b[i] for i in range(m)) % mod
    return all(a == 0 for a in ua) and ub != 0
