"""Exact integer linear algebra over the lattice Z^d.

Vectors are plain tuples of Python ints, matrices are tuples of row tuples,
and every routine here is exact: no floats anywhere.  The module supplies
the primitives the rest of the package is built on: primitivity and
basis-extension tests, deterministic integer row reduction, integral linear
solving, unimodular maps, the shear matrices used to deform fans, and a
Fourier-Motzkin feasibility test for strict/weak homogeneous inequalities.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Sequence

from .errors import DimensionMismatch

Vector = tuple[int, ...]
Matrix = tuple[Vector, ...]


class NoIntegerSolution(Exception):
    """The linear system has no integral solution."""


class UnderdeterminedSystem(Exception):
    """The linear system does not pin the unknowns uniquely."""


def gcd_all(values: Iterable[int]) -> int:
    return reduce(math.gcd, values, 0)


def dot(u: Sequence[int], v: Sequence[int]) -> int:
    return sum(a * b for a, b in zip(u, v))


def vec_add(u: Sequence[int], v: Sequence[int]) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def vec_scale(k: int, v: Sequence[int]) -> Vector:
    return tuple(k * a for a in v)


def is_primitive(v: Sequence[int]) -> bool:
    """Whether v generates the semigroup of lattice points on its ray.

    >>> is_primitive((1, 0, 0))
    True
    >>> is_primitive((2, 0))
    False
    >>> is_primitive((2, 0, -1))
    True
    """
    if len(v) == 0:
        raise ValueError("empty vector has no primitivity")
    return gcd_all(abs(a) for a in v) == 1


def det(rows: Sequence[Sequence[int]]) -> int:
    """Determinant by fraction-free (Bareiss) elimination."""
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ValueError("determinant needs a square matrix")
    if n == 0:
        return 1
    a = [list(r) for r in rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            pivot_row = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if pivot_row is None:
                return 0
            a[k], a[pivot_row] = a[pivot_row], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def row_echelon(
    matrix: Sequence[Sequence[int]],
) -> tuple[list[list[int]], list[list[int]], list[int]]:
    """Reduce to echelon form by unimodular row operations.

    Returns (transform, echelon, pivot_columns) with transform @ matrix ==
    echelon and det(transform) = +-1.  Pivoting is deterministic: among the
    active rows of a column, pick the smallest nonzero absolute value,
    breaking ties by lowest row index; the eventual pivot is made positive
    and the entries above it are reduced into [0, pivot).
    """
    rows = [list(r) for r in matrix]
    m = len(rows)
    n = len(rows[0]) if m else 0
    if any(len(r) != n for r in rows):
        raise ValueError("ragged matrix")
    transform = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    pivots: list[int] = []
    r = 0
    for c in range(n):
        if r == m:
            break
        while True:
            candidates = [(abs(rows[i][c]), i) for i in range(r, m) if rows[i][c]]
            if not candidates:
                break
            _, p = min(candidates)
            if p != r:
                rows[r], rows[p] = rows[p], rows[r]
                transform[r], transform[p] = transform[p], transform[r]
            cleared = True
            for i in range(r + 1, m):
                q = rows[i][c] // rows[r][c]
                if q:
                    rows[i] = [a - q * b for a, b in zip(rows[i], rows[r])]
                    transform[i] = [a - q * b for a, b in zip(transform[i], transform[r])]
                if rows[i][c]:
                    cleared = False
            if cleared:
                break
        if rows[r][c]:
            if rows[r][c] < 0:
                rows[r] = [-a for a in rows[r]]
                transform[r] = [-a for a in transform[r]]
            for i in range(r):
                q = rows[i][c] // rows[r][c]
                if q:
                    rows[i] = [a - q * b for a, b in zip(rows[i], rows[r])]
                    transform[i] = [a - q * b for a, b in zip(transform[i], transform[r])]
            pivots.append(c)
            r += 1
    return transform, rows, pivots


def solve_integer(
    coeffs: Sequence[Sequence[int]], rhs: Sequence[Sequence[int]]
) -> list[list[int]]:
    """Solve coeffs @ X == rhs over the integers, X of shape (n, k).

    Raises NoIntegerSolution when no rational or no integral solution
    exists, UnderdeterminedSystem when the solution is not unique.
    """
    m = len(coeffs)
    n = len(coeffs[0]) if m else 0
    k = len(rhs[0]) if rhs else 0
    if len(rhs) != m:
        raise ValueError("rhs row count mismatch")
    transform, echelon, pivots = row_echelon(coeffs)
    reduced_rhs = [
        [dot(transform[i], [rhs[t][j] for t in range(m)]) for j in range(k)]
        for i in range(m)
    ]
    rank = len(pivots)
    for i in range(rank, m):
        if any(reduced_rhs[i][j] != 0 for j in range(k)):
            raise NoIntegerSolution("inconsistent linear system")
    if rank < n:
        raise UnderdeterminedSystem("solution space is positive-dimensional")
    # rank == n, so the pivot columns are 0..n-1 in order.
    solution = [[0] * k for _ in range(n)]
    for i in range(n - 1, -1, -1):
        piv = echelon[i][i]
        for j in range(k):
            acc = reduced_rhs[i][j] - sum(
                echelon[i][t] * solution[t][j] for t in range(i + 1, n)
            )
            if acc % piv:
                raise NoIntegerSolution("no integral solution")
            solution[i][j] = acc // piv
    return solution


def elementary_divisors_all_one(vectors: Sequence[Sequence[int]]) -> bool:
    """Whether the row span is a rank-len(vectors) direct summand of Z^d.

    Diagonalizes by unimodular row and column operations, pivoting on the
    smallest nonzero absolute value in the working submatrix (ties broken
    by lowest row, then column, index), then checks every diagonal entry
    is a unit.
    """
    work = [list(v) for v in vectors]
    m = len(work)
    if m == 0:
        return True
    n = len(work[0])
    for t in range(m):
        while True:
            entries = [
                (abs(work[i][j]), i, j)
                for i in range(t, m)
                for j in range(t, n)
                if work[i][j]
            ]
            if not entries:
                return False  # rank dropped below m
            _, pi, pj = min(entries)
            if pi != t:
                work[t], work[pi] = work[pi], work[t]
            if pj != t:
                for row in work:
                    row[t], row[pj] = row[pj], row[t]
            done = True
            for i in range(m):
                if i == t or not work[i][t]:
                    continue
                q = work[i][t] // work[t][t]
                if q:
                    work[i] = [a - q * b for a, b in zip(work[i], work[t])]
                if work[i][t]:
                    done = False
            for j in range(n):
                if j == t or not work[t][j]:
                    continue
                q = work[t][j] // work[t][t]
                if q:
                    for row in work:
                        row[j] -= q * row[t]
                if work[t][j]:
                    done = False
            if done:
                break
        if abs(work[t][t]) != 1:
            return False
    return True


def extends_to_basis(vectors: Sequence[Sequence[int]]) -> bool:
    """Whether the vectors are part of some Z-basis of Z^d.

    >>> extends_to_basis([(1, 0, 0), (0, 1, 0)])
    True
    >>> extends_to_basis([(2, 0), (0, 1)])
    False
    """
    vectors = [tuple(v) for v in vectors]
    if not vectors:
        return True
    dim = len(vectors[0])
    if any(len(v) != dim for v in vectors):
        raise DimensionMismatch("vectors of mixed lengths")
    if len(vectors) > dim:
        return False
    return elementary_divisors_all_one(vectors)


@dataclass(frozen=True)
class UnimodularMap:
    """An invertible integer matrix acting on column vectors from the left."""

    matrix: Matrix

    def __post_init__(self):
        n = len(self.matrix)
        if any(len(row) != n for row in self.matrix):
            raise ValueError("matrix must be square")
        if abs(det(self.matrix)) != 1:
            raise ValueError("matrix is not unimodular")

    @classmethod
    def identity(cls, dim: int) -> "UnimodularMap":
        return cls(tuple(tuple(1 if i == j else 0 for j in range(dim)) for i in range(dim)))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]]) -> "UnimodularMap":
        return cls(tuple(zip(*[tuple(c) for c in columns])))

    @property
    def dimension(self) -> int:
        return len(self.matrix)

    def apply(self, v: Sequence[int]) -> Vector:
        if len(v) != self.dimension:
            raise DimensionMismatch("vector length does not match map dimension")
        return tuple(dot(row, v) for row in self.matrix)

    def compose(self, other: "UnimodularMap") -> "UnimodularMap":
        """self after other, as matrices: self.matrix @ other.matrix."""
        cols = tuple(self.apply(col) for col in zip(*other.matrix))
        return UnimodularMap.from_columns(cols)

    def inverse(self) -> "UnimodularMap":
        n = self.dimension
        eye = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
        inv = solve_integer(self.matrix, eye)
        return UnimodularMap(tuple(tuple(row) for row in inv))


def shear_map(q: Sequence[int]) -> UnimodularMap:
    """Identity except the last column is (q_1, ..., q_{d-1}, 1).

    Applied to a column vector it adds q times the last coordinate to the
    others and fixes the last coordinate, so the hyperplane of vectors with
    last coordinate 0 is fixed pointwise.

    >>> shear_map((2, -1)).apply((2, 0, -1))
    (0, 1, -1)
    """
    q = tuple(q)
    d = len(q) + 1
    rows = []
    for i in range(d - 1):
        row = [1 if j == i else 0 for j in range(d - 1)] + [q[i]]
        rows.append(tuple(row))
    rows.append(tuple([0] * (d - 1) + [1]))
    return UnimodularMap(tuple(rows))


def matrix_inverse(columns: Sequence[Sequence[int]]) -> Matrix:
    """Rows of the inverse of the unimodular matrix with the given columns."""
    return UnimodularMap.from_columns(columns).inverse().matrix


def change_of_basis(
    src_columns: Sequence[Sequence[int]], dst_columns: Sequence[Sequence[int]]
) -> UnimodularMap:
    """The unique map sending the i-th source column to the i-th destination column."""
    inv = matrix_inverse(src_columns)
    d = len(inv)
    rows = tuple(
        tuple(
            sum(dst_columns[t][i] * inv[t][j] for t in range(d)) for j in range(d)
        )
        for i in range(d)
    )
    return UnimodularMap(rows)


def _normalize_row(row: tuple[int, ...]) -> tuple[int, ...]:
    g = gcd_all(abs(a) for a in row)
    return row if g <= 1 else tuple(a // g for a in row)


def linear_feasible(
    strict: Sequence[Sequence[int]], weak: Sequence[Sequence[int]]
) -> bool:
    """Is there x with r . x > 0 for r in strict and r . x >= 0 for r in weak?

    Homogeneous Fourier-Motzkin elimination; exact over the integers.
    """
    rows: dict[tuple[int, ...], bool] = {}

    def add(vec: tuple[int, ...], is_strict: bool) -> bool:
        if all(a == 0 for a in vec):
            return not is_strict  # 0 > 0 is infeasible, 0 >= 0 is vacuous
        vec = _normalize_row(vec)
        rows[vec] = rows.get(vec, False) or is_strict
        return True

    for r in strict:
        if not add(tuple(r), True):
            return False
    for r in weak:
        if not add(tuple(r), False):
            return False
    if not rows:
        return True
    n = len(next(iter(rows)))
    current = list(rows.items())
    for j in range(n):
        positive = [(v, s) for v, s in current if v[j] > 0]
        negative = [(v, s) for v, s in current if v[j] < 0]
        passthrough = [(v, s) for v, s in current if v[j] == 0]
        rows = {}
        ok = True
        for v, s in passthrough:
            ok = ok and add(v, s)
        for p, ps in positive:
            for m, ms in negative:
                combo = tuple(p[j] * m[i] - m[j] * p[i] for i in range(n))
                ok = ok and add(combo, ps or ms)
        if not ok:
            return False
        current = list(rows.items())
    return True
