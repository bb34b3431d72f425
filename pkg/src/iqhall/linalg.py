"""Dense exact linear algebra over prime fields F_p.

Matrices are immutable tuples of tuples of ints reduced mod p, so they can
be dict keys and shared between threads.  Everything is plain Python int
arithmetic: p may be any prime (tests use 2,3,5,7,11) and dimensions stay
desk-scale (<= ~40), so no numpy and no overflow concerns.

Row vectors are tuples.  A matrix of shape (r, c) maps column vectors of
length c to length r; composition of maps is ``second @ first``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional

from .errors import AmbientMismatch, ShapeMismatch


@dataclass(frozen=True)
class FpMatrix:
    p: int
    rows: int
    cols: int
    data: tuple  # tuple of row tuples, entries already reduced mod p

    def __post_init__(self):
        if len(self.data) != self.rows:
            raise ShapeMismatch("row count mismatch")
        for row in self.data:
            if len(row) != self.cols:
                raise ShapeMismatch("column count mismatch")

    # -- constructors ------------------------------------------------------

    @staticmethod
    def from_rows(p: int, rows: Iterable[Iterable[int]], cols: Optional[int] = None) -> "FpMatrix":
        data = tuple(tuple(x % p for x in row) for row in rows)
        if cols is None:
            if not data:
                raise ShapeMismatch("empty matrix needs explicit column count")
            cols = len(data[0])
        return FpMatrix(p, len(data), cols, data)

    @staticmethod
    def zeros(p: int, rows: int, cols: int) -> "FpMatrix":
        return FpMatrix(p, rows, cols, tuple((0,) * cols for _ in range(rows)))

    @staticmethod
    def identity(p: int, n: int) -> "FpMatrix":
        return FpMatrix(p, n, n, tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)))

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other: "FpMatrix") -> "FpMatrix":
        self._same_shape(other)
        return FpMatrix(self.p, self.rows, self.cols,
                        tuple(tuple((a + b) % self.p for a, b in zip(r1, r2))
                              for r1, r2 in zip(self.data, other.data)))

    def __sub__(self, other: "FpMatrix") -> "FpMatrix":
        self._same_shape(other)
        return FpMatrix(self.p, self.rows, self.cols,
                        tuple(tuple((a - b) % self.p for a, b in zip(r1, r2))
                              for r1, r2 in zip(self.data, other.data)))

    def __neg__(self) -> "FpMatrix":
        return FpMatrix(self.p, self.rows, self.cols,
                        tuple(tuple((-a) % self.p for a in r) for r in self.data))

    def __matmul__(self, other: "FpMatrix") -> "FpMatrix":
        if self.p != other.p or self.cols != other.rows:
            raise ShapeMismatch(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        p = self.p
        ot = other.transpose().data
        data = tuple(tuple(sum(a * b for a, b in zip(row, col)) % p for col in ot)
                     for row in self.data)
        return FpMatrix(p, self.rows, other.cols, data)

    def scale(self, c: int) -> "FpMatrix":
        c %= self.p
        return FpMatrix(self.p, self.rows, self.cols,
                        tuple(tuple((c * a) % self.p for a in r) for r in self.data))

    def apply(self, vec: tuple) -> tuple:
        """Matrix times column vector (given and returned as a tuple)."""
        if len(vec) != self.cols:
            raise ShapeMismatch("vector length mismatch")
        p = self.p
        return tuple(sum(a * x for a, x in zip(row, vec)) % p for row in self.data)

    def transpose(self) -> "FpMatrix":
        return FpMatrix(self.p, self.cols, self.rows,
                        tuple(tuple(self.data[i][j] for i in range(self.rows)) for j in range(self.cols)))

    def is_zero(self) -> bool:
        return all(all(a == 0 for a in r) for r in self.data)

    def _same_shape(self, other: "FpMatrix"):
        if self.p != other.p or self.rows != other.rows or self.cols != other.cols:
            raise ShapeMismatch("shape or modulus mismatch")


def hstack(mats: list) -> FpMatrix:
    """Concatenate matrices side by side (same row count)."""
    if not mats:
        raise ShapeMismatch("hstack of nothing")
    p, rows = mats[0].p, mats[0].rows
    for m in mats:
        if m.p != p or m.rows != rows:
            raise ShapeMismatch("hstack shape mismatch")
    data = tuple(tuple(itertools.chain.from_iterable(m.data[i] for m in mats)) for i in range(rows))
    return FpMatrix(p, rows, sum(m.cols for m in mats), data)


def vstack(mats: list) -> FpMatrix:
    """Stack matrices on top of each other (same column count)."""
    if not mats:
        raise ShapeMismatch("vstack of nothing")
    p, cols = mats[0].p, mats[0].cols
    for m in mats:
        if m.p != p or m.cols != cols:
            raise ShapeMismatch("vstack shape mismatch")
    return FpMatrix(p, sum(m.rows for m in mats), cols,
                    tuple(itertools.chain.from_iterable(m.data for m in mats)))


# -- Gaussian elimination ----------------------------------------------------

def rref(m: FpMatrix):
    """Reduced row echelon form.

    Returns (R, rank, pivot_cols).  Deterministic: pivots are chosen as the
    first nonzero entry scanning columns left to right.
    """
    p = m.p
    rows = [list(r) for r in m.data]
    nrows, ncols = m.rows, m.cols
    pivot_cols = []
    r = 0
    for c in range(ncols):
        pivot = None
        for i in range(r, nrows):
            if rows[i][c] % p:
                pivot = i
                break
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = pow(rows[r][c], p - 2, p)
        rows[r] = [(x * inv) % p for x in rows[r]]
        for i in range(nrows):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [(a - f * b) % p for a, b in zip(rows[i], rows[r])]
        pivot_cols.append(c)
        r += 1
        if r == nrows:
            break
    R = FpMatrix(p, nrows, ncols, tuple(tuple(row) for row in rows))
    return R, r, pivot_cols


def rank(m: FpMatrix) -> int:
    return rref(m)[1]


def kernel_basis(m: FpMatrix) -> "Subspace":
    """Right kernel {x : m x = 0} as a subspace of F_p^cols."""
    R, rk, pivots = rref(m)
    p, ncols = m.p, m.cols
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        vec = [0] * ncols
        vec[f] = 1
        for i, c in enumerate(pivots):
            vec[c] = (-R.data[i][f]) % p
        basis.append(tuple(vec))
    return Subspace.from_vectors(p, ncols, basis)


def image_basis(m: FpMatrix) -> "Subspace":
    """Column space of m as a subspace of F_p^rows."""
    return Subspace.from_vectors(m.p, m.rows, [tuple(col) for col in m.transpose().data])


def solve(m: FpMatrix, rhs: tuple) -> Optional[tuple]:
    """One solution x of m x = rhs, or None if inconsistent."""
    if len(rhs) != m.rows:
        raise ShapeMismatch("rhs length mismatch")
    aug = hstack([m, FpMatrix.from_rows(m.p, [[x] for x in rhs], cols=1)]) if m.rows else \
        FpMatrix.zeros(m.p, 0, m.cols + 1)
    R, rk, pivots = rref(aug)
    if m.cols in pivots:
        return None
    x = [0] * m.cols
    for i, c in enumerate(pivots):
        x[c] = R.data[i][m.cols]
    return tuple(x)


# -- subspaces ---------------------------------------------------------------

@dataclass(frozen=True)
class Subspace:
    """A subspace of F_p^n, stored as an RREF row basis (possibly 0 rows)."""

    p: int
    ambient_dim: int
    basis: FpMatrix  # rank x ambient_dim, in RREF with pivot normalization

    @staticmethod
    def from_vectors(p: int, ambient_dim: int, vectors: Iterable[tuple]) -> "Subspace":
        vecs = [tuple(x % p for x in v) for v in vectors]
        for v in vecs:
            if len(v) != ambient_dim:
                raise ShapeMismatch("vector does not live in the ambient space")
        if not vecs:
            return Subspace(p, ambient_dim, FpMatrix.zeros(p, 0, ambient_dim))
        m = FpMatrix.from_rows(p, vecs, cols=ambient_dim)
        R, rk, _ = rref(m)
        return Subspace(p, ambient_dim, FpMatrix(p, rk, ambient_dim, R.data[:rk]))

    @staticmethod
    def zero(p: int, ambient_dim: int) -> "Subspace":
        return Subspace(p, ambient_dim, FpMatrix.zeros(p, 0, ambient_dim))

    @staticmethod
    def full(p: int, ambient_dim: int) -> "Subspace":
        return Subspace(p, ambient_dim, FpMatrix.identity(p, ambient_dim))

    @property
    def dim(self) -> int:
        return self.basis.rows

    def pivots(self) -> list:
        _, _, piv = rref(self.basis)
        return piv

    def contains_vector(self, vec: tuple) -> bool:
        return self.coords(vec) is not None

    def coords(self, vec: tuple) -> Optional[tuple]:
        """Coefficients of vec on the RREF basis rows, or None if outside."""
        if len(vec) != self.ambient_dim:
            raise AmbientMismatch("vector not in ambient space")
        p = self.p
        v = [x % p for x in vec]
        coeffs = []
        piv = self.pivots()
        for i, c in enumerate(piv):
            f = v[c]
            coeffs.append(f)
            if f:
                v = [(a - f * b) % p for a, b in zip(v, self.basis.data[i])]
        if any(v):
            return None
        return tuple(coeffs)

    def _check_ambient(self, other: "Subspace"):
        if self.p != other.p or self.ambient_dim != other.ambient_dim:
            raise AmbientMismatch("subspaces live in different ambient spaces")

    def sum(self, other: "Subspace") -> "Subspace":
        self._check_ambient(other)
        return Subspace.from_vectors(self.p, self.ambient_dim,
                                     list(self.basis.data) + list(other.basis.data))

    def perp(self) -> "Subspace":
        """Orthogonal complement w.r.t. the standard dot product."""
        if self.dim == 0:
            return Subspace.full(self.p, self.ambient_dim)
        return kernel_basis(self.basis)

    def intersect(self, other: "Subspace") -> "Subspace":
        # (V cap W) = (V^perp + W^perp)^perp; the standard form is
        # nondegenerate on F_p^n so double-perp is the identity.
        self._check_ambient(other)
        return self.perp().sum(other.perp()).perp()

    def contains(self, other: "Subspace") -> bool:
        self._check_ambient(other)
        return all(self.contains_vector(v) for v in other.basis.data)

    def quotient_dim(self, other: "Subspace") -> int:
        """dim(self / other); requires other <= self."""
        if not self.contains(other):
            raise AmbientMismatch("quotient by a non-subspace")
        return self.dim - other.dim

    def __eq__(self, other) -> bool:
        return (isinstance(other, Subspace) and self.p == other.p
                and self.ambient_dim == other.ambient_dim and self.basis == other.basis)

    def __hash__(self):
        return hash((self.p, self.ambient_dim, self.basis))


# -- enumeration helpers ------------------------------------------------------

def iter_vectors(p: int, n: int) -> Iterator[tuple]:
    """All p^n vectors of F_p^n."""
    return itertools.product(range(p), repeat=n)


def iter_monic_vectors(p: int, n: int) -> Iterator[tuple]:
    """One representative per line: first nonzero coordinate equals 1."""
    for lead in range(n):
        for tail in itertools.product(range(p), repeat=n - lead - 1):
            yield (0,) * lead + (1,) + tail


def iter_matrices(p: int, rows: int, cols: int) -> Iterator[FpMatrix]:
    """All p^(rows*cols) matrices of the given shape."""
    if rows == 0 or cols == 0:
        yield FpMatrix.zeros(p, rows, cols)
        return
    for flat in itertools.product(range(p), repeat=rows * cols):
        yield FpMatrix(p, rows, cols,
                       tuple(flat[i * cols:(i + 1) * cols] for i in range(rows)))


def iter_subspaces(p: int, n: int, k: int) -> Iterator[Subspace]:
    """All k-dimensional subspaces of F_p^n, via their unique RREF bases."""
    if k == 0:
        yield Subspace.zero(p, n)
        return
    for pivots in itertools.combinations(range(n), k):
        free_slots = []
        for i, c in enumerate(pivots):
            for j in range(c + 1, n):
                if j not in pivots:
                    free_slots.append((i, j))
        for values in itertools.product(range(p), repeat=len(free_slots)):
            rows = [[0] * n for _ in range(k)]
            for i, c in enumerate(pivots):
                rows[i][c] = 1
            for (i, j), v in zip(free_slots, values):
                rows[i][j] = v
            yield Subspace(p, n, FpMatrix.from_rows(p, rows, cols=n))
