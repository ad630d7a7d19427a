"""Dense exact linear algebra over prime fields F_p.

Matrices are immutable, stored row-major, and act on column vectors.
All eliminations use reduced row echelon form with the leftmost-pivot,
first-nonzero-row strategy, so every derived object (kernel bases, solved
representatives, subspace enumerations) is deterministic run to run.
"""

from __future__ import annotations

from typing import Iterable, Optional

from .errors import ShapeError
from .scalars import check_prime


class FpMatrix:
    __slots__ = ("p", "rows", "cols", "data")

    def __init__(self, p: int, data: Iterable[Iterable[int]], rows: int = None, cols: int = None):
        self.p = p
        rows_t = tuple(tuple(int(x) % p for x in row) for row in data)
        if rows_t:
            ncols = len(rows_t[0])
            if any(len(r) != ncols for r in rows_t):
                raise ShapeError("ragged matrix rows")
        else:
            ncols = cols if cols is not None else 0
        self.data = rows_t
        self.rows = len(rows_t) if rows is None else rows
        self.cols = ncols
        if rows is not None and rows != len(rows_t):
            raise ShapeError("row count mismatch")

    # -- constructors ---------------------------------------------------

    @staticmethod
    def zero(p: int, rows: int, cols: int) -> "FpMatrix":
        return FpMatrix(p, [[0] * cols for _ in range(rows)], cols=cols)

    @staticmethod
    def identity(p: int, n: int) -> "FpMatrix":
        return FpMatrix(p, [[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @staticmethod
    def from_columns(p: int, columns: Iterable[Iterable[int]], nrows: int) -> "FpMatrix":
        cols = [tuple(c) for c in columns]
        if any(len(c) != nrows for c in cols):
            raise ShapeError("column length mismatch")
        return FpMatrix(p, [[c[i] for c in cols] for i in range(nrows)], cols=len(cols))

    # -- basic ops -------------------------------------------------------

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FpMatrix)
            and self.p == other.p
            and self.rows == other.rows
            and self.cols == other.cols
            and self.data == other.data
        )

    def __hash__(self):
        return hash((self.p, self.rows, self.cols, self.data))

    def __repr__(self):
        return f"FpMatrix(p={self.p}, {self.rows}x{self.cols}, {self.data})"

    def is_zero(self) -> bool:
        return all(all(x == 0 for x in row) for row in self.data)

    def entries_flat(self) -> tuple:
        return tuple(x for row in self.data for x in row)

    def __add__(self, other: "FpMatrix") -> "FpMatrix":
        self._same_shape(other)
        p = self.p
        return FpMatrix(p, [
            [(a + b) % p for a, b in zip(r1, r2)]
            for r1, r2 in zip(self.data, other.data)
        ], cols=self.cols)

    def __sub__(self, other: "FpMatrix") -> "FpMatrix":
        self._same_shape(other)
        p = self.p
        return FpMatrix(p, [
            [(a - b) % p for a, b in zip(r1, r2)]
            for r1, r2 in zip(self.data, other.data)
        ], cols=self.cols)

    def __neg__(self) -> "FpMatrix":
        p = self.p
        return FpMatrix(p, [[(-a) % p for a in row] for row in self.data], cols=self.cols)

    def scale(self, c: int) -> "FpMatrix":
        p = self.p
        c %= p
        return FpMatrix(p, [[(c * a) % p for a in row] for row in self.data], cols=self.cols)

    def __matmul__(self, other: "FpMatrix") -> "FpMatrix":
        if self.cols != other.rows:
            raise ShapeError(f"matmul shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        p = self.p
        od = other.data
        out = []
        for r1 in self.data:
            row = [0] * other.cols
            for k, a in enumerate(r1):
                if a:
                    rk = od[k]
                    for j in range(other.cols):
                        row[j] += a * rk[j]
            out.append([x % p for x in row])
        return FpMatrix(p, out, cols=other.cols)

    def mul_vec(self, vec: Iterable[int]) -> tuple:
        v = tuple(vec)
        if len(v) != self.cols:
            raise ShapeError("vector length mismatch")
        p = self.p
        return tuple(sum(a * x for a, x in zip(row, v)) % p for row in self.data)

    def transpose(self) -> "FpMatrix":
        return FpMatrix(self.p, [[self.data[i][j] for i in range(self.rows)]
                                 for j in range(self.cols)], cols=self.rows)

    def _same_shape(self, other: "FpMatrix") -> None:
        if self.p != other.p or self.rows != other.rows or self.cols != other.cols:
            raise ShapeError("shape/field mismatch")

    # -- elimination ------------------------------------------------------

    def rref(self) -> tuple["FpMatrix", tuple]:
        """Reduced row echelon form and its pivot columns."""
        p = self.p
        m = [list(row) for row in self.data]
        nr, nc = self.rows, self.cols
        pivots = []
        r = 0
        for c in range(nc):
            pr = None
            for i in range(r, nr):
                if m[i][c] % p:
                    pr = i
                    break
            if pr is None:
                continue
            m[r], m[pr] = m[pr], m[r]
            inv = pow(m[r][c], -1, p)
            m[r] = [(x * inv) % p for x in m[r]]
            for i in range(nr):
                if i != r and m[i][c]:
                    f = m[i][c]
                    m[i] = [(a - f * b) % p for a, b in zip(m[i], m[r])]
            pivots.append(c)
            r += 1
            if r == nr:
                break
        return FpMatrix(p, m, cols=nc), tuple(pivots)

    def rank(self) -> int:
        return len(self.rref()[1])

    def kernel_basis(self) -> list:
        """Echelonized basis of {v : M v = 0}, as column vectors (tuples).

        Free variables are set one at a time in increasing column order, so
        the result is deterministic.
        """
        R, pivots = self.rref()
        p = self.p
        pivset = set(pivots)
        free = [c for c in range(self.cols) if c not in pivset]
        basis = []
        for fc in free:
            v = [0] * self.cols
            v[fc] = 1
            for r, pc in enumerate(pivots):
                v[pc] = (-R.data[r][fc]) % p
            basis.append(tuple(v))
        return basis

    def solve(self, rhs: Iterable[int]) -> Optional[tuple]:
        """Some x with M x = rhs, or None when inconsistent.

        Free variables are set to 0 in echelon order, so the representative
        is deterministic.
        """
        b = tuple(int(x) % self.p for x in rhs)
        if len(b) != self.rows:
            raise ShapeError("rhs length mismatch")
        aug = FpMatrix(self.p, [list(row) + [b[i]] for i, row in enumerate(self.data)],
                       cols=self.cols + 1)
        R, pivots = aug.rref()
        if self.cols in pivots:
            return None
        x = [0] * self.cols
        for r, pc in enumerate(pivots):
            x[pc] = R.data[r][self.cols]
        return tuple(x)

    def column_space_basis(self) -> list:
        """Echelonized basis of the column space, as column vectors."""
        Rt, pivots = self.transpose().rref()
        return [tuple(Rt.data[i]) for i in range(len(pivots))]

    def is_invertible(self) -> bool:
        return self.rows == self.cols and self.rank() == self.rows

    def inverse(self) -> "FpMatrix":
        if self.rows != self.cols:
            raise ShapeError("inverse of non-square matrix")
        n = self.rows
        aug = FpMatrix(self.p, [list(self.data[i]) + [1 if j == i else 0 for j in range(n)]
                                for i in range(n)], cols=2 * n)
        R, pivots = aug.rref()
        if tuple(pivots) != tuple(range(n)):
            raise ShapeError("matrix not invertible")
        return FpMatrix(self.p, [row[n:] for row in R.data], cols=n)

    # -- block constructions ----------------------------------------------

    @staticmethod
    def hstack(mats: list) -> "FpMatrix":
        mats = list(mats)
        p = mats[0].p
        nr = mats[0].rows
        if any(m.rows != nr or m.p != p for m in mats):
            raise ShapeError("hstack row mismatch")
        return FpMatrix(p, [sum((list(m.data[i]) for m in mats), []) for i in range(nr)],
                        cols=sum(m.cols for m in mats))

    @staticmethod
    def vstack(mats: list) -> "FpMatrix":
        mats = list(mats)
        p = mats[0].p
        nc = mats[0].cols
        if any(m.cols != nc or m.p != p for m in mats):
            raise ShapeError("vstack column mismatch")
        data = []
        for m in mats:
            data.extend(list(row) for row in m.data)
        return FpMatrix(p, data, cols=nc)

    @staticmethod
    def block(p: int, grid: list) -> "FpMatrix":
        """Assemble a block matrix from a grid of FpMatrix entries."""
        rows = [FpMatrix.hstack(row) for row in grid]
        return FpMatrix.vstack(rows)


def field_inverse(x: int, p: int) -> int:
    """Inverse of x modulo the prime p."""
    check_prime(p)
    x %= p
    if x == 0:
        raise ZeroDivisionError("inverse of 0 in F_p")
    return pow(x, -1, p)


def reduce_against_rows(p: int, rows: list, v: Iterable[int]) -> tuple:
    """Reduce v against an rref row basis; the residual has 0 at all pivots."""
    v = list(int(x) % p for x in v)
    for row in rows:
        lead = next((j for j, a in enumerate(row) if a), None)
        if lead is None:
            continue
        if v[lead]:
            f = (v[lead] * pow(row[lead], -1, p)) % p
            v = [(a - f * b) % p for a, b in zip(v, row)]
    return tuple(v)


def subspace_contains(p: int, rref_rows: list, v: Iterable[int]) -> bool:
    return all(x == 0 for x in reduce_against_rows(p, rref_rows, v))


def echelon_subspaces(p: int, n: int, d: int):
    """Yield all d-dimensional subspaces of F_p^n as rref row bases.

    Each subspace appears exactly once, as a tuple of row vectors in reduced
    echelon form; enumeration order is deterministic (pivot sets in
    lexicographic order, then free entries in odometer order).
    """
    from itertools import combinations, product

    if d == 0:
        yield ()
        return
    if d > n:
        return
    for pivots in combinations(range(n), d):
        pivset = set(pivots)
        # Free positions: strictly right of the row's pivot, not a pivot column.
        free_pos = []
        for r, pc in enumerate(pivots):
            for c in range(pc + 1, n):
                if c not in pivset:
                    free_pos.append((r, c))
        for vals in product(range(p), repeat=len(free_pos)):
            rows = [[0] * n for _ in range(d)]
            for r, pc in enumerate(pivots):
                rows[r][pc] = 1
            for (r, c), val in zip(free_pos, vals):
                rows[r][c] = val
            yield tuple(tuple(r) for r in rows)


def gaussian_binomial(n: int, d: int, p: int) -> int:
    """Number of d-dimensional subspaces of F_p^n."""
    if d < 0 or d > n:
        return 0
    num = 1
    den = 1
    for i in range(d):
        num *= p ** (n - i) - 1
        den *= p ** (i + 1) - 1
    return num // den
