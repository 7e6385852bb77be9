"""Dense exact linear algebra over Q and F_p.

Matrices are lists of rows. Over Q, rank and determinant clear denominators
row by row and run Bareiss fraction-free elimination on Python ints; over
F_p they run ordinary Gaussian elimination on residues. Pivoting is always
"first nonzero entry in the column", so results are reproducible.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import List, Optional, Sequence

from .errors import DegreeError
from .scalar import Field, ModP, Rationals

Matrix = List[list]

__all__ = [
    "Matrix",
    "shape",
    "rank",
    "rref",
    "kernel_basis",
    "determinant",
    "solve",
    "matvec",
]


def shape(M: Sequence[Sequence]) -> tuple[int, int]:
    rows = len(M)
    return rows, (len(M[0]) if rows else 0)


def _integer_rows(M) -> tuple[list[list[int]], Fraction]:
    """Scale each row of a rational matrix to integers.

    Returns the integer matrix and the product of the scale factors.
    """
    out = []
    scale = Fraction(1)
    for row in M:
        row = [Fraction(x) for x in row]
        den = lcm(*(x.denominator for x in row)) if row else 1
        out.append([int(x * den) for x in row])
        scale *= den
    return out, scale


def _bareiss(A: list[list[int]], stop_at_rank=False) -> tuple[int, int]:
    """In-place Bareiss elimination. Returns (rank, signed last pivot).

    For a square nonsingular input the second value is the determinant.
    """
    n, m = len(A), (len(A[0]) if A else 0)
    prev = 1
    sign = 1
    r = 0
    for c in range(m):
        if r == n:
            break
        piv = next((i for i in range(r, n) if A[i][c] != 0), None)
        if piv is None:
            continue
        if piv != r:
            A[r], A[piv] = A[piv], A[r]
            sign = -sign
        pr = A[r]
        p = pr[c]
        for i in range(r + 1, n):
            row = A[i]
            a = row[c]
            for j in range(c + 1, m):
                row[j] = (p * row[j] - a * pr[j]) // prev
            row[c] = 0
        prev = p
        r += 1
    return r, sign * prev


def _mod_rows(M, p: int) -> list[list[int]]:
    return [[int(x) % p for x in row] for row in M]


def _mod_eliminate(A: list[list[int]], p: int) -> tuple[int, int]:
    """Gaussian elimination mod p. Returns (rank, determinant-if-square)."""
    n, m = len(A), (len(A[0]) if A else 0)
    det = 1
    r = 0
    for c in range(m):
        if r == n:
            break
        piv = next((i for i in range(r, n) if A[i][c]), None)
        if piv is None:
            det = 0
            continue
        if piv != r:
            A[r], A[piv] = A[piv], A[r]
            det = -det
        pr = A[r]
        inv = pow(pr[c], -1, p)
        det = det * pr[c] % p
        for i in range(r + 1, n):
            row = A[i]
            a = row[c]
            if a:
                f = a * inv % p
                for j in range(c, m):
                    row[j] = (row[j] - f * pr[j]) % p
        r += 1
    return r, det % p


def rank(M: Sequence[Sequence], field: Field) -> int:
    """Rank of ``M`` over ``field``."""
    n, m = shape(M)
    if n == 0 or m == 0:
        return 0
    if isinstance(field, Rationals):
        A, _ = _integer_rows(M)
        return _bareiss(A)[0]
    return _mod_eliminate(_mod_rows(M, field.p), field.p)[0]


def determinant(M: Sequence[Sequence], field: Field):
    n, m = shape(M)
    if n != m:
        raise DegreeError(f"determinant of a non-square {n}x{m} matrix")
    if n == 0:
        return field.one
    if isinstance(field, Rationals):
        A, scale = _integer_rows(M)
        r, last = _bareiss(A)
        if r < n:
            return Fraction(0)
        return Fraction(last) / scale
    A = _mod_rows(M, field.p)
    r, det = _mod_eliminate(A, field.p)
    return field(det if r == n else 0)


def rref(M: Sequence[Sequence], field: Field) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and the list of pivot columns."""
    A = [[field(x) for x in row] for row in M]
    n, m = shape(A)
    pivots = []
    r = 0
    for c in range(m):
        if r == n:
            break
        piv = next((i for i in range(r, n) if A[i][c] != 0), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = 1 / A[r][c]
        A[r] = [x * inv for x in A[r]]
        for i in range(n):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [a - f * b for a, b in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
    return A, pivots


def kernel_basis(M: Sequence[Sequence], field: Field, ncols: Optional[int] = None) -> list[list]:
    """Basis of the right kernel, one vector per non-pivot column.

    Each basis vector has a 1 in its free coordinate and 0 in the other free
    coordinates; ``len(result) == ncols - rank(M)``.
    """
    n, m = shape(M)
    if ncols is None:
        ncols = m
    if n == 0:
        return [[field.one if i == j else field.zero for i in range(ncols)] for j in range(ncols)]
    R, pivots = rref(M, field)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [field.zero] * ncols
        v[fc] = field.one
        for row, pc in enumerate(pivots):
            v[pc] = -R[row][fc]
        basis.append(v)
    return basis


def matvec(M: Sequence[Sequence], v: Sequence, field: Field) -> list:
    return [sum((a * b for a, b in zip(row, v)), field.zero) for row in M]


def solve(M: Sequence[Sequence], b: Sequence, field: Field) -> Optional[list]:
    """One solution ``x`` of ``M x = b`` (free variables set to 0), or None."""
    n, m = shape(M)
    aug = [list(row) + [b[i]] for i, row in enumerate(M)]
    R, pivots = rref(aug, field)
    if m in pivots:
        return None
    x = [field.zero] * m
    for row, pc in enumerate(pivots):
        x[pc] = R[row][m]
    return x
