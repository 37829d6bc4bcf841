"""Exact dense linear algebra over GF(p) and the rationals.

Matrices are plain numpy arrays.  Over GF(p) they hold ``int64``
representatives in ``[0, p)``; over the rationals they are ``object``
arrays of :class:`fractions.Fraction`.  Every routine takes the
:class:`Field` explicitly and never mutates its inputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

__all__ = [
    "Field",
    "GF",
    "QQ",
    "NoSolution",
    "rref",
    "rank",
    "nullspace_basis",
    "solve",
    "Subspace",
    "EchelonBasis",
]


class NoSolution(ValueError):
    """Raised by :func:`solve` when the right-hand side is not in the column space."""


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    f = 2
    while f * f <= n:
        if n % f == 0:
            return False
        f += 1
    return True


@dataclass(frozen=True)
class Field:
    """A prime field GF(p), or the rationals when ``characteristic == 0``."""

    characteristic: int

    def __post_init__(self):
        p = self.characteristic
        if p != 0 and not _is_prime(p):
            raise ValueError(f"characteristic must be 0 or a prime, got {p}")

    @property
    def p(self) -> int:
        return self.characteristic

    @property
    def is_finite(self) -> bool:
        return self.characteristic > 0

    @property
    def dtype(self):
        return np.int64 if self.characteristic else object

    def __repr__(self):
        return f"GF({self.p})" if self.p else "QQ"

    # -- scalars -----------------------------------------------------------
    def scalar(self, x):
        if self.p:
            if isinstance(x, Fraction):
                return (x.numerator * pow(x.denominator, -1, self.p)) % self.p
            return int(x) % self.p
        return Fraction(x)

    def inv(self, x):
        x = self.scalar(x)
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.p:
            return pow(int(x), -1, self.p)
        return 1 / x

    def elements(self):
        """All field elements (finite fields only), in increasing order."""
        if not self.p:
            raise ValueError("the rationals are infinite")
        return range(self.p)

    # -- arrays ------------------------------------------------------------
    def asarray(self, data) -> np.ndarray:
        if self.p:
            arr = np.asarray(data)
            if arr.dtype == object:
                arr = np.vectorize(self.scalar, otypes=[np.int64])(arr) if arr.size else arr.astype(np.int64)
            return np.mod(arr.astype(np.int64), self.p)
        arr = np.asarray(data, dtype=object)
        if arr.size:
            arr = np.vectorize(Fraction, otypes=[object])(arr)
        return arr

    def reduce(self, arr: np.ndarray) -> np.ndarray:
        return np.mod(arr, self.p) if self.p else arr

    def zeros(self, shape) -> np.ndarray:
        if self.p:
            return np.zeros(shape, dtype=np.int64)
        out = np.empty(shape, dtype=object)
        out.fill(Fraction(0))
        return out

    def eye(self, n: int) -> np.ndarray:
        out = self.zeros((n, n))
        for i in range(n):
            out[i, i] = 1 if self.p else Fraction(1)
        return out

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.p:
            inner = a.shape[-1] if a.ndim else 1
            # float64 BLAS is exact while every partial sum stays below 2**53
            if inner * (self.p - 1) ** 2 < 2**52:
                return np.mod(np.rint(a.astype(np.float64) @ b.astype(np.float64)).astype(np.int64), self.p)
            return np.mod(a @ b, self.p)
        return a @ b

    def tensordot(self, a, b, axes):
        if self.p:
            return np.mod(np.tensordot(a, b, axes=axes), self.p)
        return np.tensordot(a, b, axes=axes)

    def random_array(self, rng, shape, bound: int = 3) -> np.ndarray:
        """Uniform entries over GF(p); small integers in ``[-bound, bound]`` over QQ."""
        if self.p:
            return np.array(rng.integers(0, self.p, size=shape), dtype=np.int64)
        return self.asarray(rng.integers(-bound, bound + 1, size=shape))


def GF(p: int) -> Field:
    return Field(p)


QQ = Field(0)


# -- elimination -------------------------------------------------------------


def rref(M: np.ndarray, field: Field) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot columns.

    Pivoting is deterministic: columns are scanned left to right and the
    first nonzero row at or below the current row is used.
    """
    A = field.asarray(M).copy()
    if A.ndim != 2:
        raise ValueError("rref expects a 2-d matrix")
    rows, cols = A.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(A[r:, c])[0]
        if len(nz) == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            A[[r, k]] = A[[k, r]]
        piv = A[r, c]
        if piv != 1:
            A[r] = field.reduce(A[r] * field.inv(piv))
        col = A[:, c].copy()
        col[r] = 0
        others = np.nonzero(col)[0]
        if len(others):
            A[others] = field.reduce(A[others] - np.outer(col[others], A[r]))
        pivots.append(c)
        r += 1
    return A, pivots


def rank(M: np.ndarray, field: Field) -> int:
    M = np.asarray(M)
    if M.size == 0:
        return 0
    return len(rref(M, field)[1])


def nullspace_basis(M: np.ndarray, field: Field) -> np.ndarray:
    """Columns form the canonical basis of ``ker M`` (one per free column)."""
    M = field.asarray(M)
    cols = M.shape[1]
    if M.shape[0] == 0:
        return field.eye(cols)
    R, pivots = rref(M, field)
    free = [c for c in range(cols) if c not in set(pivots)]
    N = field.zeros((cols, len(free)))
    for j, f in enumerate(free):
        N[f, j] = 1
        for i, pc in enumerate(pivots):
            N[pc, j] = field.reduce(-R[i, f])
    return N


def solve(M: np.ndarray, v: np.ndarray, field: Field) -> np.ndarray:
    """One solution of ``M x = v`` with every free variable set to zero."""
    M = field.asarray(M)
    v = field.asarray(v).reshape(-1)
    if M.shape[0] != v.shape[0]:
        raise ValueError(f"dimension mismatch: {M.shape} vs {v.shape}")
    cols = M.shape[1]
    aug = np.concatenate([M.reshape(M.shape[0], cols), v.reshape(-1, 1)], axis=1)
    R, pivots = rref(aug, field)
    if pivots and pivots[-1] == cols:
        raise NoSolution("right-hand side is not in the column space")
    x = field.zeros(cols)
    for i, pc in enumerate(pivots):
        x[pc] = R[i, cols]
    return x


# -- subspaces -----------------------------------------------------------------


class Subspace:
    """A subspace of ``field**n`` held in canonical (RREF row) form.

    Two subspaces are equal iff their canonical rows agree, so the stored
    basis doubles as a normal form.  ``basis`` returns the same vectors as
    columns.
    """

    __slots__ = ("field", "n", "rows", "pivots")

    def __init__(self, field: Field, n: int, rows: np.ndarray, pivots: list[int]):
        self.field = field
        self.n = n
        self.rows = rows
        self.pivots = pivots

    @classmethod
    def span(cls, field: Field, n: int, vectors) -> "Subspace":
        vecs = [field.asarray(v).reshape(-1) for v in vectors]
        if not vecs:
            return cls.zero(field, n)
        R, pivots = rref(np.stack(vecs), field)
        return cls(field, n, R[: len(pivots)], pivots)

    @classmethod
    def column_space(cls, field: Field, M: np.ndarray) -> "Subspace":
        M = field.asarray(M)
        return cls.span(field, M.shape[0], list(M.T))

    @classmethod
    def zero(cls, field: Field, n: int) -> "Subspace":
        return cls(field, n, field.zeros((0, n)), [])

    @classmethod
    def whole(cls, field: Field, n: int) -> "Subspace":
        return cls(field, n, field.eye(n), list(range(n)))

    @classmethod
    def kernel(cls, field: Field, M: np.ndarray) -> "Subspace":
        M = field.asarray(M)
        return cls.column_space(field, nullspace_basis(M, field)) if M.shape[1] else cls.zero(field, 0)

    @property
    def dim(self) -> int:
        return len(self.pivots)

    @property
    def basis(self) -> np.ndarray:
        return self.rows.T

    def __len__(self):
        return self.dim

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.n == other.n and self.pivots == other.pivots and np.array_equal(self.rows, other.rows)

    def __hash__(self):
        return hash((self.n, tuple(self.pivots)))

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.n}, field={self.field!r})"

    def reduce(self, v: np.ndarray) -> np.ndarray:
        """Normal form of ``v`` modulo this subspace (zero on pivot coordinates)."""
        v = self.field.asarray(v).reshape(-1).copy()
        for row, pc in zip(self.rows, self.pivots):
            c = v[pc]
            if c != 0:
                v = self.field.reduce(v - c * row)
        return v

    def reduce_columns(self, M: np.ndarray) -> np.ndarray:
        M = self.field.asarray(M)
        if not self.dim or M.size == 0:
            return M
        coeff = M[self.pivots, :]
        return self.field.reduce(M - self.field.matmul(self.rows.T, coeff))

    def contains(self, v: np.ndarray) -> bool:
        return not self.reduce(v).any()

    def contains_all(self, M: np.ndarray) -> bool:
        """Whether every column of ``M`` lies in the subspace."""
        return not self.reduce_columns(M).any()

    def __contains__(self, v):
        return self.contains(v)

    def coordinates(self, v: np.ndarray) -> np.ndarray:
        """Coordinates of ``v`` in the canonical basis; raises if ``v`` is outside."""
        v = self.field.asarray(v).reshape(-1)
        if not self.contains(v):
            raise NoSolution("vector not in subspace")
        return v[self.pivots].copy()

    def coordinate_matrix(self, M: np.ndarray) -> np.ndarray:
        """Coordinates of each column of ``M`` (columns assumed to lie inside)."""
        M = self.field.asarray(M)
        return M[self.pivots, :].copy()

    def is_subspace_of(self, other: "Subspace") -> bool:
        return all(other.contains(r) for r in self.rows)

    def __add__(self, other: "Subspace") -> "Subspace":
        return Subspace.span(self.field, self.n, list(self.rows) + list(other.rows))

    def intersect(self, other: "Subspace") -> "Subspace":
        if not self.dim or not other.dim:
            return Subspace.zero(self.field, self.n)
        M = np.concatenate([self.basis, self.field.reduce(-other.basis)], axis=1)
        N = nullspace_basis(M, self.field)
        if N.shape[1] == 0:
            return Subspace.zero(self.field, self.n)
        return Subspace.column_space(self.field, self.field.matmul(self.basis, N[: self.dim]))

    def complement_indices(self) -> list[int]:
        """Standard coordinates not used as pivots; their unit vectors span a complement."""
        piv = set(self.pivots)
        return [i for i in range(self.n) if i not in piv]

    def image(self, M: np.ndarray) -> "Subspace":
        """Image of this subspace under the matrix ``M`` (acting on columns)."""
        if not self.dim:
            return Subspace.zero(self.field, M.shape[0])
        return Subspace.column_space(self.field, self.field.matmul(self.field.asarray(M), self.basis))


class EchelonBasis:
    """Incrementally grown echelon basis; ``add`` reports whether a vector was new."""

    def __init__(self, field: Field, n: int):
        self.field = field
        self.n = n
        self._rows: list[np.ndarray] = []
        self._pivots: list[int] = []
        self.vectors: list[np.ndarray] = []

    @property
    def dim(self) -> int:
        return len(self._rows)

    def reduce(self, v: np.ndarray) -> np.ndarray:
        v = self.field.asarray(v).reshape(-1).copy()
        for row, pc in zip(self._rows, self._pivots):
            c = v[pc]
            if c != 0:
                v = self.field.reduce(v - c * row)
        return v

    def contains(self, v: np.ndarray) -> bool:
        return not self.reduce(v).any()

    def add(self, v: np.ndarray) -> bool:
        r = self.reduce(v)
        nz = np.nonzero(r)[0]
        if len(nz) == 0:
            return False
        pc = int(nz[0])
        r = self.field.reduce(r * self.field.inv(r[pc]))
        self._rows.append(r)
        self._pivots.append(pc)
        self.vectors.append(self.field.asarray(v).reshape(-1).copy())
        return True

    def subspace(self) -> Subspace:
        return Subspace.span(self.field, self.n, self._rows)
