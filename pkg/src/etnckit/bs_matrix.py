"""Column-replacement determinants over the minus quotient: the cofactor
vector u built along a designated split-prime column, its kernel property
(pairing with every other column vanishes), and the pairing identity
<u, p-column> = 2^{1-t}·det(A).

The factor (1-c) acts as the scalar 2 on the minus side; building u records
an explicit flag that this lift was taken. Real-place columns carry entries
divisible by 2 and the first t of them are halved exactly before the
cofactor expansion, so every coefficient stays integral.
"""
from __future__ import annotations

from dataclasses import dataclass

from .fitting import det_group_ring
from .group_ring import (
    FiniteAbelianGroup,
    MinusElement,
    MinusRing,
    StructuralError,
    ring_from_name,
)

COLUMN_KINDS = ("real", "finite", "split-prime")


def _halve(x: MinusElement) -> MinusElement:
    out = []
    for c in x.coeffs:
        if c % 2:
            raise StructuralError("real-place column entry not divisible by 2")
        out.append(c // 2)
    return MinusElement(x.parent, out)


@dataclass(frozen=True)
class PlaceIndexedMatrix:
    """Square matrix over Z[G]_- with place-labeled columns, one designated
    split-prime column, and the caller's real-place count t."""

    matrix: tuple
    labels: tuple
    t: int

    def __init__(self, matrix, labels, t: int):
        n = len(matrix)
        if n == 0 or any(len(row) != n for row in matrix):
            raise StructuralError("matrix must be square")
        parents = {e.parent for row in matrix for e in row}
        if len(parents) != 1:
            raise StructuralError("entries live in different minus rings")
        if any(not isinstance(c, int) for row in matrix for e in row for c in e.coeffs):
            raise StructuralError("entries must have integer coefficients")
        labels = tuple(dict(lab) for lab in labels)
        if len(labels) != n:
            raise StructuralError("one label per column")
        for lab in labels:
            if set(lab) != {"place", "kind"} or lab["kind"] not in COLUMN_KINDS:
                raise StructuralError("column label needs place and a known kind")
        split_cols = [j for j, lab in enumerate(labels) if lab["kind"] == "split-prime"]
        if len(split_cols) != 1:
            raise StructuralError("exactly one split-prime column required")
        real_cols = [j for j, lab in enumerate(labels) if lab["kind"] == "real"]
        if not 0 <= t <= len(real_cols):
            raise StructuralError("t exceeds the number of real-place columns")
        for j in real_cols:
            for i in range(n):
                _halve(matrix[i][j])
        object.__setattr__(self, "matrix", tuple(tuple(row) for row in matrix))
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "t", t)

    @property
    def size(self) -> int:
        return len(self.matrix)

    @property
    def parent(self) -> MinusRing:
        return self.matrix[0][0].parent

    @property
    def p_col(self) -> int:
        return next(
            j for j, lab in enumerate(self.labels) if lab["kind"] == "split-prime"
        )

    @property
    def real_cols(self) -> tuple:
        return tuple(j for j, lab in enumerate(self.labels) if lab["kind"] == "real")

    def column(self, j: int) -> tuple:
        return tuple(self.matrix[i][j] for i in range(self.size))

    def halved(self) -> list:
        """Copy with the first t real columns divided by 2, exactly."""
        cols = set(self.real_cols[: self.t])
        return [
            [_halve(e) if j in cols else e for j, e in enumerate(row)]
            for row in self.matrix
        ]

    def det(self) -> MinusElement:
        return det_group_ring([list(row) for row in self.matrix])

    def to_json_dict(self) -> dict:
        parent = self.parent
        return {
            "orders": list(parent.group.cyclic_orders),
            "c": list(parent.c),
            "ring": parent.ring.name,
            "t": self.t,
            "labels": [dict(lab) for lab in self.labels],
            "matrix": [
                [[parent.ring.format(c) for c in e.coeffs] for e in row]
                for row in self.matrix
            ],
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "PlaceIndexedMatrix":
        group = FiniteAbelianGroup(tuple(d["orders"]))
        ring = ring_from_name(d["ring"])
        parent = MinusRing(group, tuple(d["c"]), ring)
        matrix = [
            [MinusElement(parent, [ring.parse(c) for c in e]) for e in row]
            for row in d["matrix"]
        ]
        return cls(matrix, d["labels"], int(d["t"]))


@dataclass(frozen=True)
class CofactorVector:
    """u = (1-c)·det(A_V)/2^t expanded along the split-prime column: entry j
    is twice the signed cofactor of the halved matrix at (j, p-column)."""

    entries: tuple
    t: int
    lifted: bool  # (1-c) was evaluated as the scalar 2 on the minus side

    def pair(self, column) -> MinusElement:
        acc = self.entries[0].parent.zero()
        for u_j, a_j in zip(self.entries, column):
            acc = acc + u_j * a_j
        return acc


def build_u(A: PlaceIndexedMatrix) -> CofactorVector:
    halved = A.halved()
    n = A.size
    pc = A.p_col
    entries = []
    for j in range(n):
        minor = [
            [halved[i][k] for k in range(n) if k != pc]
            for i in range(n)
            if i != j
        ]
        if minor:
            cof = det_group_ring(minor)
        else:
            cof = A.parent.one()
        sign = 1 if (j + pc) % 2 == 0 else -1
        entries.append(cof.scalar(2 * sign))
    return CofactorVector(tuple(entries), A.t, True)


def kernel_check(A: PlaceIndexedMatrix, u: CofactorVector) -> dict:
    """Pairing u against every non-designated column of A, and against the
    zero column, must vanish: the adjugate rows annihilate foreign columns."""
    pc = A.p_col
    checks = []
    for j in range(A.size):
        if j == pc:
            continue
        val = u.pair(A.column(j))
        checks.append(
            {
                "name": f"column {j} ({A.labels[j]['place']})",
                "status": "ok" if val.is_zero() else "fail",
                "details": {},
            }
        )
    zero_col = [A.parent.zero()] * A.size
    checks.append(
        {
            "name": "zero column",
            "status": "ok" if u.pair(zero_col).is_zero() else "fail",
            "details": {},
        }
    )
    return {
        "identity": "cofactor-kernel",
        "status": "ok" if all(c["status"] == "ok" for c in checks) else "fail",
        "checks": checks,
    }


def ord_identity_check(A: PlaceIndexedMatrix, u: CofactorVector,
                       theta: MinusElement | None = None) -> dict:
    """<u, p-column> = 2^{1-t}·det(A), and equals theta/2^{t-1} when the
    determinant is a supplied Stickelberger value."""
    pairing = u.pair(A.column(A.p_col))
    det = A.det()
    t = A.t
    if t >= 1:
        lhs, rhs = pairing.scalar(2 ** (t - 1)), det
    else:
        lhs, rhs = pairing, det.scalar(2)
    checks = [
        {
            "name": "pairing equals 2^{1-t}·det",
            "status": "ok" if lhs == rhs else "fail",
            "details": {"t": t},
        }
    ]
    if theta is not None:
        checks.append(
            {
                "name": "det equals the supplied theta",
                "status": "ok" if det == theta else "fail",
                "details": {},
            }
        )
    return {
        "identity": "ord-pairing",
        "status": "ok" if all(c["status"] == "ok" for c in checks) else "fail",
        "checks": checks,
    }
