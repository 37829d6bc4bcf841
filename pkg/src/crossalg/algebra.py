"""Finite-dimensional associative unital algebras given by structure constants.

An algebra of dimension ``d`` stores a dense table ``c`` of shape
``(d, d, d)`` with ``b_i * b_j = sum_k c[i, j, k] b_k``.  Elements are
coordinate vectors; :class:`AlgebraElement` wraps one together with its
algebra for operator syntax.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np
import sympy

from .linalg import EchelonBasis, Field, NoSolution, Subspace, nullspace_basis, rank, solve

__all__ = [
    "AlgebraError",
    "NotAssociative",
    "NotUnital",
    "MixedAlgebras",
    "NotInvertible",
    "NotAnIdeal",
    "NotIdempotent",
    "NotSplit",
    "FieldNotSupported",
    "IdempotentSetError",
    "NotPrimitive",
    "FDAlgebra",
    "AlgebraElement",
    "IdempotentSet",
    "IdempotentCertificate",
    "RadicalCertificate",
    "AlgebraProfile",
    "SplitStructure",
    "Quotient",
    "Corner",
    "associativity_witness",
    "radical",
    "radical_certificate",
    "quotient_algebra",
    "corner_algebra",
    "subalgebra",
    "center",
    "try_inverse",
    "validate_idempotent_set",
    "characterize_local_commutative",
    "split_structure",
    "gabriel_quiver",
    "minimal_polynomial",
    "field_algebra",
    "truncated_polynomial_algebra",
    "matrix_algebra",
    "product_algebra",
    "automorphism_witness",
    "matrix_order",
    "is_unit",
    "multiply",
    "ideal_witness",
    "subspace_power",
    "power_series",
]


class AlgebraError(ValueError):
    pass


class NotAssociative(AlgebraError):
    def __init__(self, witness):
        self.witness = witness
        super().__init__(f"(b{witness[0]} b{witness[1]}) b{witness[2]} != b{witness[0]} (b{witness[1]} b{witness[2]})")


class NotUnital(AlgebraError):
    def __init__(self, witness: int):
        self.witness = witness
        super().__init__(f"the proposed identity fails on basis element {witness}")


class MixedAlgebras(AlgebraError):
    pass


class NotInvertible(AlgebraError):
    pass


class NotAnIdeal(AlgebraError):
    def __init__(self, witness):
        self.witness = witness
        super().__init__(f"subspace is not a two-sided ideal (witness {witness})")


class NotIdempotent(AlgebraError):
    pass


class NotSplit(AlgebraError):
    """Some corner of the semisimple quotient is a division algebra larger than the field."""


class FieldNotSupported(AlgebraError):
    pass


class IdempotentSetError(AlgebraError):
    def __init__(self, condition: str, witness, message: str = ""):
        self.condition = condition
        self.witness = witness
        super().__init__(message or f"{condition} fails (witness {witness})")


class NotPrimitive(IdempotentSetError):
    def __init__(self, index: int, corner_dim: int):
        self.corner_dim = corner_dim
        super().__init__("primitive", index, f"idempotent {index} is not primitive: dim(e Abar e) = {corner_dim}")


# ---------------------------------------------------------------------------


def associativity_witness(field: Field, table: np.ndarray):
    """First basis triple (lexicographic) violating associativity, or None."""
    d = table.shape[0]
    if d == 0:
        return None
    flat = table.reshape(d * d, d)
    # left[i,j,k,:] = (b_i b_j) b_k ; right[i,j,k,:] = b_i (b_j b_k)
    left = field.matmul(flat, table.reshape(d, d * d)).reshape(d, d, d, d)
    inner = table.reshape(d * d, d)  # (j,k) -> coords of b_j b_k
    right = field.matmul(inner, np.transpose(table, (1, 0, 2)).reshape(d, d * d))
    right = np.transpose(right.reshape(d, d, d, d), (2, 0, 1, 3))
    bad = np.nonzero((left != right).any(axis=3))
    if len(bad[0]) == 0:
        return None
    return int(bad[0][0]), int(bad[1][0]), int(bad[2][0])


class FDAlgebra:
    """Finite-dimensional associative unital algebra by structure constants.

    The constructor verifies associativity on all basis triples and the
    identity law unless ``check=False`` (used for deliberately broken
    tables in tests).  ``idempotents`` may carry a candidate complete set
    of primitive orthogonal idempotents (e.g. vertex idempotents of a
    quiver); ``generators`` an algebra generating set.
    """

    def __init__(
        self,
        field: Field,
        table,
        one,
        *,
        name: str | None = None,
        check: bool = True,
        idempotents=None,
        generators=None,
        radical_hint: Subspace | None = None,
    ):
        self.field = field
        self.table = field.asarray(table)
        d = self.table.shape[0] if self.table.ndim == 3 else 0
        if self.table.shape != (d, d, d):
            raise ValueError(f"structure constants must have shape (d, d, d), got {self.table.shape}")
        self.dim = d
        self.one = field.asarray(one).reshape(-1)
        if self.one.shape != (d,):
            raise ValueError("identity vector has wrong length")
        self.name = name
        self._idempotent_hint = None if idempotents is None else [field.asarray(e) for e in idempotents]
        self._generator_hint = None if generators is None else [field.asarray(g) for g in generators]
        self._radical_hint = radical_hint
        self._cache: dict = {}
        if check:
            w = associativity_witness(field, self.table)
            if w is not None:
                raise NotAssociative(w)
            L = self.left_matrix(self.one)
            R = self.right_matrix(self.one)
            eye = field.eye(d)
            bad = np.nonzero(((L != eye) | (R != eye)).any(axis=0))[0]
            if len(bad):
                raise NotUnital(int(bad[0]))

    @classmethod
    def from_structure_constants(cls, field: Field, dim: int, mult, one, **kw) -> "FDAlgebra":
        """Build from sparse ``(i, j, k, coeff)`` quadruples or a dense table."""
        if isinstance(mult, np.ndarray) and mult.ndim == 3:
            table = field.asarray(mult)
        else:
            table = field.zeros((dim, dim, dim))
            for i, j, k, c in mult:
                if not (0 <= i < dim and 0 <= j < dim and 0 <= k < dim):
                    raise IndexError(f"structure constant index out of range: {(i, j, k)}")
                table[i, j, k] = field.reduce(table[i, j, k] + field.scalar(c))
        return cls(field, table, one, **kw)

    def structure_constants(self) -> list[tuple[int, int, int, object]]:
        idx = np.argwhere(self.table != 0)
        return [(int(i), int(j), int(k), self.table[i, j, k]) for i, j, k in idx]

    def __repr__(self):
        label = f" {self.name!r}" if self.name else ""
        return f"<FDAlgebra{label} dim={self.dim} over {self.field!r}>"

    # -- arithmetic ----------------------------------------------------------
    def vec(self, v) -> np.ndarray:
        return self.field.asarray(v).reshape(self.dim)

    def basis_vector(self, i: int) -> np.ndarray:
        v = self.field.zeros(self.dim)
        v[i] = 1
        return v

    def zero(self) -> np.ndarray:
        return self.field.zeros(self.dim)

    def mul(self, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        d = self.dim
        U = self.field.matmul(u.reshape(1, d), self.table.reshape(d, d * d)).reshape(d, d)
        return self.field.matmul(v.reshape(1, d), U).reshape(d)

    def mul_many(self, *vs: np.ndarray) -> np.ndarray:
        out = vs[0]
        for v in vs[1:]:
            out = self.mul(out, v)
        return out

    def left_matrix(self, u: np.ndarray) -> np.ndarray:
        """Matrix of ``x -> u x``."""
        d = self.dim
        U = self.field.matmul(u.reshape(1, d), self.table.reshape(d, d * d)).reshape(d, d)
        return U.T.copy()

    def right_matrix(self, u: np.ndarray) -> np.ndarray:
        """Matrix of ``x -> x u``."""
        d = self.dim
        V = self.field.matmul(np.transpose(self.table, (0, 2, 1)).reshape(d * d, d), u.reshape(d, 1))
        return V.reshape(d, d).T.copy()

    def left_matrices(self) -> np.ndarray:
        """Stack ``L[i]`` = matrix of left multiplication by ``b_i``."""
        return np.ascontiguousarray(np.transpose(self.table, (0, 2, 1)))

    def right_matrices(self) -> np.ndarray:
        return np.ascontiguousarray(np.transpose(self.table, (1, 2, 0)))

    def power(self, u: np.ndarray, n: int) -> np.ndarray:
        result = self.one.copy()
        base = u
        while n:
            if n & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            n >>= 1
        return result

    def products(self, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
        """All products ``x_a y_b`` of columns, returned as columns (a-major)."""
        d = self.dim
        F = self.field
        if X.shape[1] == 0 or Y.shape[1] == 0:
            return F.zeros((d, 0))
        # T[a, j, k] = sum_i X[i, a] c[i, j, k]
        T = F.matmul(X.T, self.table.reshape(d, d * d)).reshape(X.shape[1], d, d)
        P = F.matmul(np.transpose(T, (0, 2, 1)).reshape(-1, d), Y)  # (a, k) x b
        P = P.reshape(X.shape[1], d, Y.shape[1])
        return np.transpose(P, (1, 0, 2)).reshape(d, -1)

    def is_commutative(self) -> bool:
        return np.array_equal(self.table, np.transpose(self.table, (1, 0, 2)))

    def is_idempotent(self, e: np.ndarray) -> bool:
        return np.array_equal(self.mul(e, e), self.field.asarray(e))

    def element(self, v) -> "AlgebraElement":
        return AlgebraElement(self, self.vec(v))

    def basis_element(self, i: int) -> "AlgebraElement":
        return AlgebraElement(self, self.basis_vector(i))

    def unit(self) -> "AlgebraElement":
        return AlgebraElement(self, self.one.copy())

    # -- cached structure ----------------------------------------------------
    def generators(self) -> list[np.ndarray]:
        """A generating set: the construction hint if it generates, else greedy basis picks."""
        if "generators" in self._cache:
            return self._cache["generators"]
        gens = None
        if self._generator_hint is not None and _generated_dim(self, self._generator_hint) == self.dim:
            gens = list(self._generator_hint)
        if gens is None:
            gens = _greedy_generators(self)
        self._cache["generators"] = gens
        return gens

    def same_as(self, other: "FDAlgebra") -> bool:
        return (
            self.field == other.field
            and self.dim == other.dim
            and np.array_equal(self.table, other.table)
            and np.array_equal(self.one, other.one)
        )


def _generated_dim(A: FDAlgebra, gens) -> int:
    span = EchelonBasis(A.field, A.dim)
    span.add(A.one)
    queue = [A.one]
    while queue:
        w = queue.pop()
        for g in gens:
            v = A.mul(g, w)
            if span.add(v):
                queue.append(v)
    return span.dim


def _greedy_generators(A: FDAlgebra) -> list[np.ndarray]:
    span = EchelonBasis(A.field, A.dim)
    span.add(A.one)
    gens: list[np.ndarray] = []
    for i in range(A.dim):
        if span.dim == A.dim:
            break
        b = A.basis_vector(i)
        if span.contains(b):
            continue
        gens.append(b)
        queue = [(w, True) for w in list(span.vectors)]
        while queue:
            w, only_new = queue.pop()
            for g in ([b] if only_new else gens):
                v = A.mul(g, w)
                if span.add(v):
                    queue.append((v, False))
    return gens


class AlgebraElement:
    """An element of an :class:`FDAlgebra` supporting ``+ - *`` and inversion."""

    __slots__ = ("algebra", "coords")

    def __init__(self, algebra: FDAlgebra, coords: np.ndarray):
        self.algebra = algebra
        self.coords = coords

    def _check(self, other):
        if not isinstance(other, AlgebraElement):
            return None
        if other.algebra is not self.algebra:
            raise MixedAlgebras("elements belong to different algebras")
        return other

    def __add__(self, other):
        other = self._check(other)
        F = self.algebra.field
        return AlgebraElement(self.algebra, F.reduce(self.coords + other.coords))

    def __sub__(self, other):
        other = self._check(other)
        F = self.algebra.field
        return AlgebraElement(self.algebra, F.reduce(self.coords - other.coords))

    def __neg__(self):
        return AlgebraElement(self.algebra, self.algebra.field.reduce(-self.coords))

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            self._check(other)
            return AlgebraElement(self.algebra, self.algebra.mul(self.coords, other.coords))
        F = self.algebra.field
        return AlgebraElement(self.algebra, F.reduce(self.coords * F.scalar(other)))

    def __rmul__(self, scalar):
        F = self.algebra.field
        return AlgebraElement(self.algebra, F.reduce(self.coords * F.scalar(scalar)))

    def __pow__(self, n: int):
        return AlgebraElement(self.algebra, self.algebra.power(self.coords, n))

    def __eq__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return other.algebra is self.algebra and np.array_equal(self.coords, other.coords)

    def __hash__(self):
        return hash(tuple(self.coords.tolist()))

    def is_zero(self) -> bool:
        return not self.coords.any()

    def inverse(self) -> "AlgebraElement":
        return AlgebraElement(self.algebra, try_inverse(self.algebra, self.coords))

    def __repr__(self):
        return f"AlgebraElement({list(self.coords)})"


def multiply(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    return a * b


def try_inverse(A: FDAlgebra, a) -> np.ndarray:
    """Two-sided inverse of ``a``; raises :class:`NotInvertible`."""
    a = A.vec(a)
    try:
        x = solve(A.left_matrix(a), A.one, A.field)
    except NoSolution:
        raise NotInvertible("element has no right inverse") from None
    if not np.array_equal(A.mul(x, a), A.one):
        raise NotInvertible("right inverse is not a left inverse")
    return x


def is_unit(A: FDAlgebra, a) -> bool:
    try:
        try_inverse(A, a)
    except NotInvertible:
        return False
    return True


# -- subspaces attached to an algebra ------------------------------------------


def center(A: FDAlgebra) -> Subspace:
    """Canonical basis of the centre, from ``b_i z = z b_i`` for all ``i``."""
    F = A.field
    if A.dim == 0:
        return Subspace.zero(F, 0)
    comm = F.reduce(A.left_matrices() - A.right_matrices()).reshape(-1, A.dim)
    # (L_{b_i} - R_{b_i}) applied to z gives b_i z - z b_i; rows stack over i
    return Subspace.kernel(F, comm)


def ideal_witness(A: FDAlgebra, I: Subspace):
    """A pair (side, basis index) where the ideal test fails, or None."""
    if not I.dim:
        return None
    F = A.field
    for side, mats in (("left", A.left_matrices()), ("right", A.right_matrices())):
        for i in range(A.dim):
            if not I.contains_all(F.matmul(mats[i], I.basis)):
                return side, i
    return None


def subspace_power(A: FDAlgebra, I: Subspace, J: Subspace) -> Subspace:
    return Subspace.column_space(A.field, A.products(I.basis, J.basis)) if I.dim and J.dim else Subspace.zero(A.field, A.dim)


def power_series(A: FDAlgebra, I: Subspace, limit: int | None = None) -> list[Subspace]:
    """``[I, I^2, I^3, ...]`` ending at the first zero power or the first repeat."""
    out = [I]
    cur = I
    limit = A.dim + 1 if limit is None else limit
    while cur.dim and len(out) <= limit:
        nxt = subspace_power(A, cur, I)
        if nxt == cur:
            break
        out.append(nxt)
        cur = nxt
    return out


@dataclass
class RadicalCertificate:
    radical: Subspace
    nilpotency_index: int
    is_ideal: bool
    quotient_radical_dim: int

    @property
    def ok(self) -> bool:
        return self.is_ideal and self.quotient_radical_dim == 0 and self.nilpotency_index >= 0


def _lifted_trace_power(L: np.ndarray, e: int, q: int) -> int:
    """Trace of ``L**e`` over the integers modulo ``q`` (``L`` lifted to [0, p))."""
    n = L.shape[0]
    M = L.astype(np.int64) % q
    R = np.eye(n, dtype=np.int64)
    exact = n * (q - 1) ** 2 < 2**52
    while e:
        if e & 1:
            R = _mulmod(R, M, q, exact)
        e >>= 1
        if e:
            M = _mulmod(M, M, q, exact)
    return int(np.trace(R)) % q


def _mulmod(a, b, q, exact):
    if exact:
        return np.mod(np.rint(a.astype(np.float64) @ b.astype(np.float64)).astype(np.int64), q)
    return np.mod(a @ b, q)


def _radical_raw(A: FDAlgebra) -> Subspace:
    F = A.field
    d = A.dim
    if d == 0:
        return Subspace.zero(F, 0)
    if F.p == 0:
        # x in rad iff Tr(L_{x y}) = 0 for all y
        tr = np.array([sum(A.table[m, j, j] for j in range(d)) for m in range(d)], dtype=object)
        G = np.empty((d, d), dtype=object)
        for j in range(d):
            for k in range(d):
                G[j, k] = sum(A.table[k, j, m] * tr[m] for m in range(d))
        return Subspace.kernel(F, G)
    p = F.p
    # p-power trace refinement: I_{-1} = A, I_i = {x in I_{i-1} : g_i(x b) = 0 for all b}
    # with g_i(a) = (Tr(lift(L_a)^(p^i)) mod p^(i+1)) / p^i on I_{i-1}.
    levels = 0
    while p ** (levels + 1) <= d:
        levels += 1
    basis = F.eye(d)
    for i in range(levels + 1):
        if basis.shape[1] == 0:
            break
        q = p ** (i + 1)
        r = basis.shape[1]
        prods = A.products(basis, F.eye(d))  # column (k, j) = u_k b_j
        vals = np.zeros((d, r), dtype=np.int64)
        for k in range(r):
            for j in range(d):
                a = prods[:, k * d + j]
                La = A.left_matrix(a)
                vals[j, k] = (_lifted_trace_power(La, p**i, q) // p**i) % p
        N = nullspace_basis(vals, F)
        basis = F.matmul(basis, N) if N.shape[1] else F.zeros((d, 0))
    return Subspace.column_space(F, basis) if basis.shape[1] else Subspace.zero(F, d)


def radical_certificate(A: FDAlgebra) -> RadicalCertificate:
    if "radical_certificate" in A._cache:
        return A._cache["radical_certificate"]
    if A._radical_hint is not None:
        R = A._radical_hint
    else:
        R = _radical_raw(A)
    is_ideal = ideal_witness(A, R) is None
    series = power_series(A, R)
    nil = len(series) if not series[-1].dim else -1
    qdim = -1
    if is_ideal:
        Q = quotient_algebra(A, R).algebra
        qdim = _radical_raw(Q).dim
    cert = RadicalCertificate(R, nil if R.dim else 0, is_ideal, qdim)
    A._cache["radical_certificate"] = cert
    return cert


def radical(A: FDAlgebra) -> Subspace:
    """Jacobson radical, post-verified (ideal, nilpotent, semisimple quotient)."""
    cert = radical_certificate(A)
    if not cert.ok:
        raise FieldNotSupported(f"radical certificate failed for {A!r}: {cert}")
    return cert.radical


# -- quotients, corners, subalgebras --------------------------------------------


class Quotient(NamedTuple):
    algebra: FDAlgebra
    projection: np.ndarray  # q x d
    section: np.ndarray  # d x q, a linear right inverse of the projection


class Corner(NamedTuple):
    algebra: FDAlgebra
    embedding: np.ndarray  # d x r, columns = basis of eAe inside A


def quotient_algebra(A: FDAlgebra, I: Subspace) -> Quotient:
    w = ideal_witness(A, I)
    if w is not None:
        raise NotAnIdeal(w)
    F = A.field
    keep = I.complement_indices()
    proj = I.reduce_columns(F.eye(A.dim))[keep, :]
    sec = F.zeros((A.dim, len(keep)))
    for a, k in enumerate(keep):
        sec[k, a] = 1
    sub = A.table[np.ix_(keep, keep)]  # (q, q, d)
    q = len(keep)
    table = F.matmul(sub.reshape(q * q, A.dim), proj.T).reshape(q, q, q)
    one = F.matmul(proj, A.one.reshape(-1, 1)).reshape(-1)
    Q = FDAlgebra(F, table, one, name=f"{A.name}/I" if A.name else None, check=False)
    return Quotient(Q, proj, sec)


def _algebra_on_subspace(A: FDAlgebra, W: Subspace, unit: np.ndarray, name=None) -> FDAlgebra:
    F = A.field
    B = W.basis
    r = W.dim
    prods = A.products(B, B)
    if not W.contains_all(prods):
        raise AlgebraError("subspace is not closed under multiplication")
    coords = W.coordinate_matrix(prods)  # r x (r*r), column a*r+b
    table = np.transpose(coords.reshape(r, r, r), (1, 2, 0))
    return FDAlgebra(F, table, W.coordinates(unit), name=name)


def corner_algebra(A: FDAlgebra, e) -> Corner:
    """The corner ``e A e`` with unit ``e`` and its embedding into ``A``."""
    e = A.vec(e)
    if not A.is_idempotent(e):
        raise NotIdempotent("corner requires an idempotent")
    F = A.field
    M = F.matmul(A.left_matrix(e), A.right_matrix(e))
    W = Subspace.column_space(F, M)
    C = _algebra_on_subspace(A, W, e, name=f"corner of {A.name}" if A.name else None)
    return Corner(C, W.basis)


def subalgebra(A: FDAlgebra, W: Subspace) -> Corner:
    """The unital subalgebra on ``W`` (must contain the identity)."""
    if not W.contains(A.one):
        raise AlgebraError("subspace does not contain the identity")
    return Corner(_algebra_on_subspace(A, W, A.one), W.basis)


# -- polynomials -----------------------------------------------------------------

_X = sympy.Symbol("X")


def minimal_polynomial(A: FDAlgebra, a: np.ndarray, unit: np.ndarray | None = None) -> list:
    """Coefficients (constant term first) of the monic minimal polynomial of ``a``.

    ``unit`` replaces the identity, for elements of a corner ``eAe``.
    """
    F = A.field
    unit = A.one if unit is None else unit
    span = EchelonBasis(F, A.dim)
    powers = [unit]
    span.add(unit)
    while True:
        nxt = A.mul(powers[-1], a)
        if not span.add(nxt):
            M = np.stack(powers, axis=1)
            c = solve(M, nxt, F)
            return [F.reduce(-x) for x in c] + [F.scalar(1)]
        powers.append(nxt)


def _to_poly(coeffs, F: Field) -> sympy.Poly:
    hi_first = list(reversed([int(c) if F.p else sympy.Rational(c.numerator, c.denominator) for c in coeffs]))
    if F.p:
        return sympy.Poly(hi_first, _X, modulus=F.p)
    return sympy.Poly(hi_first, _X, domain="QQ")


def _from_poly(P: sympy.Poly, F: Field) -> list:
    coeffs = P.all_coeffs()[::-1]
    if F.p:
        return [int(c) % F.p for c in coeffs]
    from fractions import Fraction

    return [Fraction(int(sympy.Rational(c).p), int(sympy.Rational(c).q)) for c in coeffs]


def _evaluate(A: FDAlgebra, coeffs, a, unit) -> np.ndarray:
    F = A.field
    out = F.zeros(A.dim)
    for c in reversed(coeffs):
        out = F.reduce(A.mul(out, a) + unit * F.scalar(c))
    return out


def _split_idempotent(A: FDAlgebra, a: np.ndarray, e: np.ndarray):
    """An idempotent ``q`` in ``eAe`` with ``0 != q != e`` obtained from ``a``, or None.

    Also returns a nilpotent ``f(a)`` when the minimal polynomial is a
    proper power of one irreducible factor.
    """
    F = A.field
    m = minimal_polynomial(A, a, unit=e)
    if len(m) <= 2:
        return None, None
    P = _to_poly(m, F)
    _, factors = P.factor_list()
    if len(factors) >= 2:
        f1 = factors[0][0] ** factors[0][1]
        rest = sympy.Poly(1, _X, modulus=F.p) if F.p else sympy.Poly(1, _X, domain="QQ")
        for f, k in factors[1:]:
            rest = rest * f**k
        s, t, h = f1.gcdex(rest)
        # h is a unit constant; t*rest/h is 1 mod f1 and 0 mod rest
        poly = (t * rest).quo(h) if not h.is_one else t * rest
        poly = poly.rem(P)
        q = _evaluate(A, _from_poly(poly, F), a, e)
        return q, None
    f, k = factors[0]
    if k > 1:
        return None, _evaluate(A, _from_poly(f, F), a, e)
    return None, None


def _corner_basis(A: FDAlgebra, e: np.ndarray) -> np.ndarray:
    F = A.field
    return Subspace.column_space(F, F.matmul(A.left_matrix(e), A.right_matrix(e))).basis


def _find_splitting(A: FDAlgebra, e: np.ndarray, rng, trials: int = 48, exhaustive_limit: int = 4096):
    """Nontrivial idempotent of the semisimple corner ``eAe`` or None if none was found."""
    F = A.field
    B = _corner_basis(A, e)
    r = B.shape[1]
    if r <= 1:
        return None

    def candidates():
        for j in range(r):
            yield B[:, j]
        for _ in range(trials):
            yield F.matmul(B, F.random_array(rng, (r, 1)).reshape(r, 1)).reshape(-1)
        if F.p and F.p**r <= exhaustive_limit:
            for digits in np.ndindex(*(F.p,) * r):
                yield F.matmul(B, np.array(digits, dtype=np.int64).reshape(r, 1)).reshape(-1)

    for a in candidates():
        q, nil = _split_idempotent(A, a, e)
        if q is not None:
            return q
        if nil is not None and nil.any():
            # a nonzero nilpotent n: the right ideal n(eAe) is proper and nonzero,
            # hence generated by an idempotent; search it for a non-nilpotent element
            NB = Subspace.column_space(F, F.matmul(A.left_matrix(nil), B)).basis
            k = NB.shape[1]
            cands = [NB[:, j] for j in range(k)]
            cands += [F.matmul(NB, F.random_array(rng, (k, 1))).reshape(-1) for _ in range(trials)]
            for b in cands:
                q2, _ = _split_idempotent(A, b, e)
                if q2 is not None:
                    return q2
    return None


def _semisimple_primitive_idempotents(Q: FDAlgebra, rng) -> list[np.ndarray]:
    todo = [Q.one.copy()]
    done: list[np.ndarray] = []
    while todo:
        e = todo.pop(0)
        q = _find_splitting(Q, e, rng)
        if q is None:
            done.append(e)
            continue
        todo[:0] = [q, Q.field.reduce(e - q)]
    return done


def _lift_idempotents(A: FDAlgebra, quot: Quotient, ebar: list[np.ndarray]) -> list[np.ndarray]:
    F = A.field
    lifted = []
    f = A.one.copy()
    for eb in ebar[:-1]:
        a = F.matmul(quot.section, eb.reshape(-1, 1)).reshape(-1)
        a = A.mul(A.mul(f, a), f)
        for _ in range(2 * A.dim.bit_length() + 4):
            a2 = A.mul(a, a)
            if np.array_equal(a2, a):
                break
            a = F.reduce(3 * a2 - 2 * A.mul(a2, a))
        else:
            raise AlgebraError("idempotent lifting did not converge")
        lifted.append(a)
        f = F.reduce(f - a)
    lifted.append(f)
    return lifted


# -- idempotent sets ---------------------------------------------------------------


class IdempotentSet:
    """A finite list of algebra elements proposed as orthogonal idempotents."""

    def __init__(self, algebra: FDAlgebra, elements: Sequence):
        self.algebra = algebra
        self.elements = [algebra.vec(e) for e in elements]

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __getitem__(self, i):
        return self.elements[i]


@dataclass
class IdempotentCertificate:
    size: int
    corner_dims: list[int]  # dim(e_i Abar e_i), all 1 when valid
    classes: list[tuple[int, ...]]  # isomorphism classes of the e_i


def _corner_dim(Q: FDAlgebra, e: np.ndarray, f: np.ndarray | None = None) -> int:
    F = Q.field
    f = e if f is None else f
    return rank(F.matmul(Q.left_matrix(e), Q.right_matrix(f)), F)


def validate_idempotent_set(A: FDAlgebra, E, *, seed: int = 0) -> IdempotentCertificate:
    """Check orthogonality, completeness and primitivity (``dim e Abar e = 1``)."""
    if not isinstance(E, IdempotentSet):
        E = IdempotentSet(A, E)
    F = A.field
    els = E.elements
    for i, e in enumerate(els):
        if not A.is_idempotent(e):
            raise IdempotentSetError("idempotent", i)
    for i, e in enumerate(els):
        for j, f in enumerate(els):
            if i != j and A.mul(e, f).any():
                raise IdempotentSetError("orthogonal", (i, j))
    total = F.reduce(sum(els, F.zeros(A.dim))) if els else F.zeros(A.dim)
    if not np.array_equal(total, A.one):
        raise IdempotentSetError("complete", None, "idempotents do not sum to the identity")
    R = radical(A)
    quot = quotient_algebra(A, R)
    Q = quot.algebra
    bars = [F.matmul(quot.projection, e.reshape(-1, 1)).reshape(-1) for e in els]
    dims = [_corner_dim(Q, eb) for eb in bars]
    for i, dm in enumerate(dims):
        if dm == 0:
            raise IdempotentSetError("nonzero", i, f"idempotent {i} lies in the radical")
        if dm > 1:
            q = _find_splitting(Q, bars[i], np.random.default_rng(seed))
            if q is not None:
                raise NotPrimitive(i, dm)
            raise NotSplit(f"e_{i} (A/rad) e_{i} is a division algebra of dimension {dm}")
    classes: list[list[int]] = []
    for i in range(len(els)):
        for cl in classes:
            if _corner_dim(Q, bars[cl[0]], bars[i]):
                cl.append(i)
                break
        else:
            classes.append([i])
    return IdempotentCertificate(len(els), dims, [tuple(c) for c in classes])


@dataclass
class SplitStructure:
    """Radical, semisimple quotient and a validated primitive idempotent set."""

    algebra: FDAlgebra
    radical: Subspace
    quotient: Quotient
    idempotents: list[np.ndarray]
    classes: list[tuple[int, ...]]
    computed: bool = False  # True when idempotents were found by splitting rather than given

    @property
    def representatives(self) -> list[int]:
        return [c[0] for c in self.classes]

    def class_of(self, i: int) -> int:
        for k, c in enumerate(self.classes):
            if i in c:
                return k
        raise KeyError(i)

    def bar(self, v: np.ndarray) -> np.ndarray:
        F = self.algebra.field
        return F.matmul(self.quotient.projection, v.reshape(-1, 1)).reshape(-1)


def split_structure(A: FDAlgebra, *, seed: int = 0) -> SplitStructure:
    """Primitive idempotent data; uses the algebra's idempotent hint when it validates."""
    if "split" in A._cache:
        return A._cache["split"]
    R = radical(A)
    quot = quotient_algebra(A, R)
    cert = None
    idem = None
    computed = False
    if A._idempotent_hint is not None:
        try:
            cert = validate_idempotent_set(A, A._idempotent_hint, seed=seed)
            idem = list(A._idempotent_hint)
        except IdempotentSetError:
            cert = None
    if cert is None:
        rng = np.random.default_rng(seed)
        ebar = _semisimple_primitive_idempotents(quot.algebra, rng)
        idem = _lift_idempotents(A, quot, ebar)
        cert = validate_idempotent_set(A, idem, seed=seed)
        computed = True
    out = SplitStructure(A, R, quot, idem, cert.classes, computed)
    A._cache["split"] = out
    return out


def gabriel_quiver(A: FDAlgebra, idempotents=None) -> np.ndarray:
    """Arrow counts: entry ``[i, j]`` = dim e_j (J/J^2) e_i, arrows i -> j."""
    F = A.field
    E = split_structure(A).idempotents if idempotents is None else [A.vec(e) for e in idempotents]
    J = radical(A)
    J2 = subspace_power(A, J, J)
    n = len(E)
    out = np.zeros((n, n), dtype=int)
    for i, ei in enumerate(E):
        Ri = A.right_matrix(ei)
        for j, ej in enumerate(E):
            M = F.matmul(A.left_matrix(ej), Ri)
            out[i, j] = J.image(M).dim - J2.image(M).dim
    return out


@dataclass(frozen=True)
class AlgebraProfile:
    dim: int
    commutative: bool
    local: bool
    radical_layers: tuple[int, ...]


def characterize_local_commutative(A: FDAlgebra) -> AlgebraProfile:
    """Dimension, commutativity, locality and Loewy layer dimensions."""
    J = radical(A)
    series = power_series(A, J)
    dims = [A.dim] + [s.dim for s in series]
    if dims[-1] != 0:
        dims.append(0)
    layers = tuple(dims[i] - dims[i + 1] for i in range(len(dims) - 1) if dims[i] - dims[i + 1] > 0)
    return AlgebraProfile(A.dim, A.is_commutative(), A.dim - J.dim == 1, layers)


# -- stock algebras -----------------------------------------------------------------


def field_algebra(F: Field) -> FDAlgebra:
    return FDAlgebra(F, F.asarray([[[1]]]), F.asarray([1]), name=f"{F!r}")


def truncated_polynomial_algebra(F: Field, n: int) -> FDAlgebra:
    """``k[X]/(X^n)`` on the monomial basis ``1, X, ..., X^(n-1)``."""
    table = F.zeros((n, n, n))
    for i in range(n):
        for j in range(n):
            if i + j < n:
                table[i, j, i + j] = 1
    one = F.zeros(n)
    one[0] = 1
    return FDAlgebra(F, table, one, name=f"k[X]/(X^{n})", radical_hint=Subspace.span(F, n, [_unit(F, n, i) for i in range(1, n)]))


def _unit(F, n, i):
    v = F.zeros(n)
    v[i] = 1
    return v


def matrix_algebra(F: Field, n: int) -> FDAlgebra:
    """``M_n(k)`` on matrix units ``E_{ab}`` (index ``a*n + b``)."""
    d = n * n
    table = F.zeros((d, d, d))
    for a in range(n):
        for b in range(n):
            for c in range(n):
                table[a * n + b, b * n + c, a * n + c] = 1
    one = F.zeros(d)
    for a in range(n):
        one[a * n + a] = 1
    idem = [_unit(F, d, a * n + a) for a in range(n)]
    return FDAlgebra(F, table, one, name=f"M_{n}", idempotents=idem)


def product_algebra(A: FDAlgebra, B: FDAlgebra) -> FDAlgebra:
    """Direct product ``A x B`` with basis of ``A`` followed by basis of ``B``."""
    F = A.field
    if B.field != F:
        raise MixedAlgebras("fields differ")
    d = A.dim + B.dim
    table = F.zeros((d, d, d))
    table[: A.dim, : A.dim, : A.dim] = A.table
    table[A.dim :, A.dim :, A.dim :] = B.table
    one = np.concatenate([A.one, B.one])
    idem = None
    if A._idempotent_hint is not None and B._idempotent_hint is not None:
        idem = [np.concatenate([e, F.zeros(B.dim)]) for e in A._idempotent_hint]
        idem += [np.concatenate([F.zeros(A.dim), e]) for e in B._idempotent_hint]
    return FDAlgebra(F, table, one, name=f"{A.name} x {B.name}", idempotents=idem)


def automorphism_witness(A: FDAlgebra, M: np.ndarray):
    """Why the linear map ``M`` fails to be a unital algebra automorphism, or None.

    Returns ``("unit", None)``, ``("singular", None)`` or ``("multiplicative", (i, j))``.
    """
    F = A.field
    M = F.asarray(M)
    d = A.dim
    if M.shape != (d, d):
        return ("shape", M.shape)
    if not np.array_equal(F.matmul(M, A.one.reshape(-1, 1)).reshape(-1), A.one):
        return ("unit", None)
    if rank(M, F) != d:
        return ("singular", None)
    lhs = F.matmul(A.table.reshape(d * d, d), M.T)  # row i*d+j: M(b_i b_j)
    rhs = A.products(M, M).T
    bad = np.nonzero((lhs != rhs).any(axis=1))[0]
    if len(bad):
        return ("multiplicative", divmod(int(bad[0]), d))
    return None


def matrix_order(M: np.ndarray, field: Field, limit: int = 1000) -> int:
    """Multiplicative order of an invertible square matrix (0 if above ``limit``)."""
    eye = field.eye(M.shape[0])
    P = field.asarray(M)
    for n in range(1, limit + 1):
        if np.array_equal(P, eye):
            return n
        P = field.matmul(P, M)
    return 0
