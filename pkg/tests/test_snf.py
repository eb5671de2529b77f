"""Smith normal form over Z and over Z/p^k, with solvers and certificates."""
import random

from etnckit.snf import (
    check_certificate,
    snf_mod_pk,
    snf_z,
    solve_mod_pk,
    solve_z,
    val_p,
)


def _matmul(A, B):
    return [
        [sum(A[i][t] * B[t][j] for t in range(len(B))) for j in range(len(B[0]))]
        for i in range(len(A))
    ]


def test_snf_z_fixture():
    A = [[2, 4, 4], [-6, 6, 12], [10, 4, 16]]
    D, U, V = snf_z(A)
    assert _matmul(_matmul(U, A), V) == D
    diag = [D[i][i] for i in range(3)]
    assert diag == [2, 2, 156]
    for i in range(2):
        assert diag[i + 1] % diag[i] == 0


def test_snf_z_randomized_transform_and_divisibility():
    rng = random.Random(7)
    for _ in range(120):
        m, n = rng.randint(1, 4), rng.randint(1, 4)
        A = [[rng.randint(-9, 9) for _ in range(n)] for _ in range(m)]
        D, U, V = snf_z(A)
        assert _matmul(_matmul(U, A), V) == D
        diag = [D[i][i] for i in range(min(m, n))]
        for i in range(len(diag) - 1):
            if diag[i]:
                assert diag[i + 1] % diag[i] == 0
            else:
                assert diag[i + 1] == 0
        for i in range(m):
            for j in range(n):
                if i != j:
                    assert D[i][j] == 0


def test_solve_z_round_trip_and_insolvable():
    rng = random.Random(8)
    hits = 0
    for _ in range(150):
        m, n = rng.randint(1, 4), rng.randint(1, 4)
        A = [[rng.randint(-6, 6) for _ in range(n)] for _ in range(m)]
        x = [rng.randint(-5, 5) for _ in range(n)]
        b = [sum(A[i][j] * x[j] for j in range(n)) for i in range(m)]
        got = solve_z(A, b)
        assert got is not None
        assert [sum(A[i][j] * got[j] for j in range(n)) for i in range(m)] == b
        hits += 1
    assert hits == 150
    assert solve_z([[2]], [1]) is None
    assert solve_z([[2, 4], [1, 2]], [0, 1]) is None


def test_val_p():
    assert val_p(0, 3, 5) == 5
    assert val_p(18, 3, 5) == 2
    assert val_p(-8, 2, 10) == 3
    assert val_p(7, 5, 4) == 0


def test_snf_mod_pk_structure():
    rng = random.Random(9)
    for _ in range(150):
        p = rng.choice([2, 3, 5])
        K = rng.randint(1, 4)
        modulus = p**K
        m, n = rng.randint(1, 4), rng.randint(1, 4)
        A = [[rng.randrange(modulus) for _ in range(n)] for _ in range(m)]
        D, U, V = snf_mod_pk(A, p, K)
        got = _matmul(_matmul(U, A), V)
        assert [[x % modulus for x in row] for row in got] == D
        vals = []
        for i in range(min(m, n)):
            d = D[i][i]
            v = val_p(d, p, K)
            assert d == (p**v if v < K else 0) % modulus
            vals.append(v)
        assert vals == sorted(vals)


def test_solve_mod_pk_solution_or_certificate():
    rng = random.Random(10)
    solved = infeasible = 0
    for _ in range(250):
        p = rng.choice([2, 3])
        K = rng.randint(1, 4)
        modulus = p**K
        m, n = rng.randint(1, 3), rng.randint(1, 3)
        A = [[rng.randrange(modulus) for _ in range(n)] for _ in range(m)]
        b = [rng.randrange(modulus) for _ in range(m)]
        status, obj = solve_mod_pk(A, b, p, K)
        if status == "solved":
            solved += 1
            for i in range(m):
                assert sum(A[i][j] * obj[j] for j in range(n)) % modulus == b[i] % modulus
        else:
            infeasible += 1
            assert check_certificate(A, b, obj, p, K)
    assert solved > 0 and infeasible > 0


def test_certificate_annihilates_rows_not_rhs():
    p, K = 2, 3
    A = [[2, 4], [6, 4]]
    b = [1, 0]
    status, cert = solve_mod_pk(A, b, p, K)
    assert status == "infeasible"
    n = len(A[0])
    for j in range(n):
        assert sum(cert[i] * A[i][j] for i in range(len(A))) % p**K == 0
    assert sum(cert[i] * b[i] for i in range(len(A))) % p**K != 0
