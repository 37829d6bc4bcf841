"""Finite-dimensional modules, projective covers and minimal resolutions.

A module over an algebra of dimension ``d`` is an array of ``d`` action
matrices, one per basis element.  Everything downstream of the cover
construction needs a split algebra (every ``e_i Abar e_i`` is the ground
field); :func:`crossalg.algebra.split_structure` certifies that or raises
:class:`~crossalg.algebra.NotSplit`.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Sequence

import numpy as np

from .algebra import FDAlgebra, radical, split_structure
from .linalg import EchelonBasis, Field, Subspace, nullspace_basis, rank

__all__ = [
    "ModuleError",
    "FDModule",
    "ModuleMap",
    "PD",
    "ResolutionReport",
    "ProjectiveCover",
    "InducedModule",
    "regular_module",
    "submodule",
    "quotient_module",
    "direct_sum",
    "module_radical",
    "projective_indecomposable",
    "simple_module",
    "simple_modules",
    "top",
    "projective_cover",
    "syzygy",
    "pd",
    "gldim",
    "ext1_dim",
    "ext1_dim_by_hom",
    "hom_space",
    "is_isomorphic",
    "restrict_module",
    "induce_module",
    "pi_delta_check",
    "psi_phi_check",
    "balancing_subspace",
    "hom_dim",
    "theorem_spotcheck",
    "fdim_probe",
    "minimal_resolution",
    "cover_generators",
]

EXHAUSTIVE_LIMIT = 4096
RANDOM_TRIALS = 64


class ModuleError(ValueError):
    pass


class FDModule:
    """Left module given by ``action[i]`` = matrix of basis element ``b_i``."""

    def __init__(self, algebra: FDAlgebra, action, *, check: bool = True, name: str | None = None):
        F = algebra.field
        self.algebra = algebra
        self.action = F.asarray(action)
        if self.action.ndim != 3 or self.action.shape[0] != algebra.dim or self.action.shape[1] != self.action.shape[2]:
            raise ModuleError(f"action must have shape (d, m, m); got {self.action.shape}")
        self.dim = self.action.shape[1]
        self.name = name
        if check:
            w = self.compatibility_witness()
            if w is not None:
                raise ModuleError(f"action is not compatible with the structure constants at {w}")

    @property
    def field(self) -> Field:
        return self.algebra.field

    def __repr__(self):
        label = f" {self.name!r}" if self.name else ""
        return f"<FDModule{label} dim={self.dim}>"

    def compatibility_witness(self):
        A, F, m = self.algebra, self.field, self.dim
        if m == 0:
            return None
        if not np.array_equal(self.act(A.one), F.eye(m)):
            return "unit"
        d = A.dim
        flat = self.action.reshape(d, m * m)
        # rho(b_i) rho(b_j) against sum_k c[i,j,k] rho(b_k)
        rhs = F.matmul(A.table.reshape(d * d, d), flat).reshape(d, d, m, m)
        for i in range(d):
            lhs = F.matmul(self.action[i], self.action.transpose(1, 0, 2).reshape(m, d * m)).reshape(m, d, m).transpose(1, 0, 2)
            bad = np.nonzero((lhs != rhs[i]).any(axis=(1, 2)))[0]
            if len(bad):
                return (i, int(bad[0]))
        return None

    def act(self, a: np.ndarray) -> np.ndarray:
        """Matrix of the algebra element ``a``."""
        F = self.field
        if self.dim == 0:
            return F.zeros((0, 0))
        return F.matmul(F.asarray(a).reshape(1, -1), self.action.reshape(self.algebra.dim, -1)).reshape(self.dim, self.dim)

    def is_zero(self) -> bool:
        return self.dim == 0


@dataclass
class ModuleMap:
    source: FDModule
    target: FDModule
    matrix: np.ndarray

    def is_homomorphism(self) -> bool:
        F = self.source.field
        for i in range(self.source.algebra.dim):
            if not np.array_equal(F.matmul(self.target.action[i], self.matrix), F.matmul(self.matrix, self.source.action[i])):
                return False
        return True


# -- constructions -------------------------------------------------------------


def regular_module(A: FDAlgebra) -> FDModule:
    return FDModule(A, A.left_matrices(), check=False, name="regular")


def _restricted_action(M: FDModule, W: Subspace) -> np.ndarray:
    F = M.field
    d = M.algebra.dim
    B = W.basis
    imgs = F.matmul(M.action.reshape(d * M.dim, M.dim), B).reshape(d, M.dim, W.dim)
    if not all(W.contains_all(imgs[i]) for i in range(d)):
        raise ModuleError("subspace is not a submodule")
    return imgs[:, W.pivots, :]


def submodule(M: FDModule, W: Subspace, name=None) -> FDModule:
    """Submodule on ``W`` in its canonical coordinates (``v[W.pivots]``)."""
    if W.dim == 0:
        return FDModule(M.algebra, M.field.zeros((M.algebra.dim, 0, 0)), check=False, name=name)
    return FDModule(M.algebra, _restricted_action(M, W), check=False, name=name)


@dataclass
class QuotientData:
    module: FDModule
    projection: np.ndarray
    section: np.ndarray


def quotient_module(M: FDModule, W: Subspace, name=None) -> QuotientData:
    F = M.field
    d = M.algebra.dim
    if W.dim:
        _restricted_action(M, W)
    keep = W.complement_indices()
    proj = W.reduce_columns(F.eye(M.dim))[keep, :]
    sec = F.zeros((M.dim, len(keep)))
    for a, k in enumerate(keep):
        sec[k, a] = 1
    if keep:
        act = F.matmul(F.matmul(proj, M.action.transpose(1, 0, 2).reshape(M.dim, d * M.dim)).reshape(len(keep), d, M.dim).transpose(1, 0, 2).reshape(d * len(keep), M.dim), sec).reshape(d, len(keep), len(keep))
    else:
        act = F.zeros((d, 0, 0))
    return QuotientData(FDModule(M.algebra, act, check=False, name=name), proj, sec)


def direct_sum(mods: Sequence[FDModule], algebra: FDAlgebra | None = None) -> FDModule:
    A = mods[0].algebra if mods else algebra
    F = A.field
    m = sum(M.dim for M in mods)
    act = F.zeros((A.dim, m, m))
    off = 0
    for M in mods:
        act[:, off : off + M.dim, off : off + M.dim] = M.action
        off += M.dim
    return FDModule(A, act, check=False)


def module_radical(M: FDModule) -> Subspace:
    """``rad(A) M`` as a subspace of ``M``."""
    F = M.field
    if M.dim == 0:
        return Subspace.zero(F, 0)
    J = radical(M.algebra)
    if J.dim == 0:
        return Subspace.zero(F, M.dim)
    mats = [M.act(r) for r in J.rows]
    return Subspace.column_space(F, np.concatenate(mats, axis=1))


def projective_indecomposable(A: FDAlgebra, e) -> FDModule:
    """``A e`` with the left regular action."""
    F = A.field
    W = Subspace.column_space(F, A.right_matrix(A.vec(e)))
    return submodule(regular_module(A), W, name="P")


def _projective_data(A: FDAlgebra):
    if "projectives" in A._cache:
        return A._cache["projectives"]
    sp = split_structure(A)
    F = A.field
    data = []
    for c, cls in enumerate(sp.classes):
        e = sp.idempotents[cls[0]]
        W = Subspace.column_space(F, A.right_matrix(e))
        data.append((e, W, submodule(regular_module(A), W, name=f"P{c}")))
    A._cache["projectives"] = data
    return data


def simple_module(A: FDAlgebra, c: int) -> FDModule:
    """The simple top of the ``c``-th indecomposable projective (class order)."""
    P = _projective_data(A)[c][2]
    return quotient_module(P, module_radical(P), name=f"S{c}").module


def simple_modules(A: FDAlgebra) -> list[FDModule]:
    return [simple_module(A, c) for c in range(len(split_structure(A).classes))]


def top(M: FDModule) -> tuple[int, ...]:
    """Multiplicity of each simple (class order) in ``M / rad M``."""
    F = M.field
    R = module_radical(M)
    out = []
    for e, _, _ in _projective_data(M.algebra):
        if M.dim == 0:
            out.append(0)
            continue
        img = Subspace.column_space(F, M.act(e))
        out.append((img + R).dim - R.dim)
    return tuple(out)


@dataclass
class ProjectiveCover:
    module: FDModule  # P, a direct sum of indecomposable projectives
    summands: list[int]  # class index of each summand, in order
    epimorphism: np.ndarray  # dim M x dim P
    kernel: Subspace  # inside P


def projective_cover(M: FDModule) -> ProjectiveCover:
    A, F = M.algebra, M.field
    data = _projective_data(A)
    R = module_radical(M)
    span = EchelonBasis(F, M.dim)
    for r in R.rows:
        span.add(r)
    summands, blocks, mods = [], [], []
    for c, (e, W, P) in enumerate(data):
        img = Subspace.column_space(F, M.act(e)) if M.dim else Subspace.zero(F, 0)
        for v in img.rows:
            if not span.contains(v):
                # a e -> a.v on the basis of A e
                block = _apply_to(M, W.basis, v)
                for col in block.T:
                    span.add(col)
                summands.append(c)
                blocks.append(block)
                mods.append(P)
    if M.dim and span.dim != M.dim:
        raise ModuleError("top generators do not span the module modulo its radical")
    Pm = direct_sum(mods, A)
    epi = np.concatenate(blocks, axis=1) if blocks else F.zeros((M.dim, 0))
    if M.dim and rank(epi, F) != M.dim:
        raise ModuleError("cover map is not surjective")
    K = Subspace.kernel(F, epi) if Pm.dim else Subspace.zero(F, 0)
    return ProjectiveCover(Pm, summands, epi, K)


def _apply_to(M: FDModule, elements: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Columns ``rho(w) v`` for the columns ``w`` of ``elements``."""
    F = M.field
    d = M.algebra.dim
    # Mv[:, i] = rho(b_i) v
    Mv = F.matmul(M.action.reshape(d * M.dim, M.dim), v.reshape(-1, 1)).reshape(d, M.dim).T
    return F.matmul(Mv, elements)


def syzygy(M: FDModule) -> FDModule:
    cov = projective_cover(M)
    return submodule(cov.module, cov.kernel, name="syzygy")


# -- projective dimension ----------------------------------------------------------


@dataclass(frozen=True)
class PD:
    """Finite(n), Infinite (with a syzygy cycle) or Undetermined(cutoff)."""

    kind: str
    value: int | None = None
    cycle: tuple[int, int] | None = None
    loop: int | None = None  # simple with a self-extension, when that is the certificate

    @staticmethod
    def finite(n: int) -> "PD":
        return PD("finite", n)

    @staticmethod
    def infinite(cycle=None) -> "PD":
        return PD("infinite", None, cycle)

    @staticmethod
    def infinite_by_loop(i: int) -> "PD":
        return PD("infinite", None, None, i)

    @staticmethod
    def undetermined(cutoff: int) -> "PD":
        return PD("undetermined", cutoff)

    @property
    def is_finite(self) -> bool:
        return self.kind == "finite"

    @property
    def is_infinite(self) -> bool:
        return self.kind == "infinite"

    @property
    def determined(self) -> bool:
        return self.kind != "undetermined"

    def __str__(self):
        if self.kind == "finite":
            return f"Finite({self.value})"
        if self.kind == "infinite":
            if self.cycle:
                return f"Infinite(cycle {self.cycle[0]}-{self.cycle[1]})"
            return f"Infinite(loop at {self.loop})" if self.loop is not None else "Infinite"
        return f"Undetermined({self.value})"

    def as_number(self) -> float:
        """Finite values as themselves, Infinite as +inf; undetermined raises."""
        if self.kind == "finite":
            return self.value
        if self.kind == "infinite":
            return float("inf")
        raise ValueError("undetermined dimension")


@dataclass
class ResolutionReport:
    status: PD
    terms: list[tuple[int, ...]]  # multiplicity vector of each P_n
    syzygy_dims: list[int]  # dim of Omega^0 = M, Omega^1, ...
    isomorphism: np.ndarray | None = None  # Omega^i -> Omega^j when Infinite
    minimal: bool = True  # every cover kernel lay in the radical of its projective
    syzygies: list = dc_field(default_factory=list, repr=False)


def _multiplicities(summands: list[int], n: int) -> tuple[int, ...]:
    out = [0] * n
    for c in summands:
        out[c] += 1
    return tuple(out)


def pd(M: FDModule, cutoff: int = 20, *, seed: int = 0) -> ResolutionReport:
    """Minimal projective resolution until a zero syzygy, a syzygy cycle or ``cutoff`` steps."""
    A = M.algebra
    nclass = len(split_structure(A).classes)
    rng = np.random.default_rng(seed)
    syz = [M]
    prints = [(M.dim, top(M))]
    terms: list[tuple[int, ...]] = []
    minimal = True
    if M.dim == 0:
        return ResolutionReport(PD.finite(0), [], [0], minimal=True, syzygies=syz)
    for n in range(cutoff + 1):
        cur = syz[-1]
        cov = projective_cover(cur)
        terms.append(_multiplicities(cov.summands, nclass))
        minimal &= cov.kernel.is_subspace_of(module_radical(cov.module))
        nxt = submodule(cov.module, cov.kernel)
        if nxt.dim == 0:
            return ResolutionReport(PD.finite(n), terms, [S.dim for S in syz] + [0], minimal=minimal, syzygies=syz + [nxt])
        fp = (nxt.dim, top(nxt))
        j = len(syz)
        for i, S in enumerate(syz):
            if prints[i] != fp:
                continue
            iso = is_isomorphic(S, nxt, rng=rng)
            if iso.isomorphic:
                syz.append(nxt)
                return ResolutionReport(PD.infinite((i, j)), terms, [S.dim for S in syz], iso.matrix, minimal, syz)
        syz.append(nxt)
        prints.append(fp)
    return ResolutionReport(PD.undetermined(cutoff), terms, [S.dim for S in syz], minimal=minimal, syzygies=syz)


@dataclass
class GldimReport:
    status: PD
    per_simple: list[ResolutionReport]


def gldim(A: FDAlgebra, cutoff: int = 20, *, seed: int = 0) -> GldimReport:
    """Max projective dimension over the simples.

    A simple whose resolution neither stops nor cycles within ``cutoff``
    steps is still certified infinite when it has a self-extension
    (``Ext^1(S, S) != 0`` forces ``pd S = infinity`` for finite-dimensional algebras).
    """
    reports = [pd(S, cutoff, seed=seed) for S in simple_modules(A)]
    for i, r in enumerate(reports):
        if not r.status.determined and ext1_dim(A, i, i) > 0:
            r.status = PD.infinite_by_loop(i)
    infinite = [r for r in reports if r.status.is_infinite]
    if infinite:
        status = infinite[0].status
    elif any(not r.status.determined for r in reports):
        status = PD.undetermined(cutoff)
    else:
        status = PD.finite(max((r.status.value for r in reports), default=0))
    return GldimReport(status, reports)


def ext1_dim(A: FDAlgebra, i: int, j: int) -> int:
    """``dim Ext^1(S_i, S_j)`` as the multiplicity of ``S_j`` in the top of ``Omega S_i``."""
    return top(syzygy(simple_module(A, i)))[j]


# -- Hom spaces and isomorphism ------------------------------------------------------


def hom_space(M: FDModule, N: FDModule, generators=None) -> np.ndarray:
    """Basis of ``Hom_A(M, N)``: array of shape (k, dim N, dim M)."""
    A, F = M.algebra, M.field
    m, n = M.dim, N.dim
    if m == 0 or n == 0:
        return F.zeros((0, n, m))
    gens = A.generators() if generators is None else generators
    # unknown X (n x m) flattened row-major; restrict the solution space one generator at a time
    basis = F.eye(n * m)
    for g in gens:
        rN, rM = N.act(g), M.act(g)
        E = F.reduce(np.kron(rN, F.eye(m)) - np.kron(F.eye(n), rM.T))
        EB = F.matmul(E, basis)
        if not EB.any():
            continue
        ker = nullspace_basis(EB, F)
        basis = F.matmul(basis, ker) if ker.shape[1] else F.zeros((n * m, 0))
        if basis.shape[1] == 0:
            break
    return basis.T.reshape(-1, n, m).copy()


def hom_dim(M: FDModule, N: FDModule) -> int:
    return hom_space(M, N).shape[0]


@dataclass
class IsoResult:
    isomorphic: bool | None  # None when the randomized search gave up
    matrix: np.ndarray | None = None


def is_isomorphic(M: FDModule, N: FDModule, *, rng=None, trials: int = RANDOM_TRIALS) -> IsoResult:
    F = M.field
    if M.dim != N.dim:
        return IsoResult(False)
    if M.dim == 0:
        return IsoResult(True, F.zeros((0, 0)))
    if top(M) != top(N):
        return IsoResult(False)
    H = hom_space(M, N)
    h = H.shape[0]
    if h == 0 or h != hom_space(N, N).shape[0]:
        return IsoResult(False)
    n = M.dim
    flat = H.reshape(h, n * n)

    def combo(c):
        return F.matmul(np.asarray(c).reshape(1, h), flat).reshape(n, n)

    for k in range(h):
        if rank(H[k], F) == n:
            return IsoResult(True, H[k].copy())
    if F.p and F.p**h <= EXHAUSTIVE_LIMIT:
        for digits in np.ndindex(*(F.p,) * h):
            X = combo(np.array(digits, dtype=np.int64))
            if rank(X, F) == n:
                return IsoResult(True, X)
        return IsoResult(False)
    rng = np.random.default_rng(0) if rng is None else rng
    for _ in range(trials):
        X = combo(F.random_array(rng, (h,)))
        if rank(X, F) == n:
            return IsoResult(True, X)
    return IsoResult(None)


def ext1_dim_by_hom(M: FDModule, N: FDModule) -> int:
    """``dim Ext^1(M, N)`` from ``0 -> Hom(M,N) -> Hom(P0,N) -> Hom(Omega M,N) -> Ext^1 -> 0``."""
    cov = projective_cover(M)
    Om = submodule(cov.module, cov.kernel)
    data = _projective_data(M.algebra)
    hom_p0 = sum(rank(N.act(data[c][0]), N.field) if N.dim else 0 for c in cov.summands)
    return hom_dim(Om, N) - hom_p0 + hom_dim(M, N)


# -- change of rings ------------------------------------------------------------------


def restrict_module(M: FDModule, S: FDAlgebra, embedding: np.ndarray) -> FDModule:
    """Restriction along the algebra map ``S -> R`` whose columns are images of ``S``'s basis."""
    F = M.field
    R = M.algebra
    if M.dim == 0:
        return FDModule(S, F.zeros((S.dim, 0, 0)), check=False)
    act = F.matmul(F.asarray(embedding).T, M.action.reshape(R.dim, -1)).reshape(S.dim, M.dim, M.dim)
    return FDModule(S, act, check=False, name=M.name)


def balancing_subspace(R: FDAlgebra, embedding: np.ndarray, N: FDModule, s_generators=None) -> Subspace:
    """Span of ``r s (x) v - r (x) s v`` in ``R (x)_k N`` (index ``a * dim N + v``)."""
    F = R.field
    S = N.algebra
    n = N.dim
    gens = S.generators() if s_generators is None else s_generators
    E = F.asarray(embedding)
    rows = []
    for g in gens:
        s_in_R = F.matmul(E, g.reshape(-1, 1)).reshape(-1)
        Rs = R.right_matrix(s_in_R)
        rows.append(F.reduce(np.kron(Rs, F.eye(n)) - np.kron(F.eye(R.dim), N.act(g))))
    if not rows:
        return Subspace.zero(F, R.dim * n)
    return Subspace.column_space(F, np.concatenate(rows, axis=1))


@dataclass
class InducedModule:
    module: FDModule  # R (x)_S N
    base: FDModule  # N
    balancing: Subspace  # inside R (x)_k N
    projection: np.ndarray  # (x)_k coordinates -> module coordinates
    section: np.ndarray
    embedding: np.ndarray

    def delta(self) -> np.ndarray:
        """``v -> 1 (x) v`` as a matrix N -> R (x)_S N."""
        F = self.base.field
        R = self.module.algebra
        n = self.base.dim
        T = np.kron(R.one.reshape(-1, 1), F.eye(n))
        return F.matmul(self.projection, T)


def induce_module(N: FDModule, R: FDAlgebra, embedding: np.ndarray) -> InducedModule:
    """``R (x)_S N`` as the quotient of ``R (x)_k N`` by the balancing subspace."""
    F = R.field
    n = N.dim
    B = balancing_subspace(R, embedding, N)
    big = FDModule(R, np.stack([np.kron(R.left_matrix(R.basis_vector(i)), F.eye(n)) for i in range(R.dim)]) if n else F.zeros((R.dim, 0, 0)), check=False)
    q = quotient_module(big, B)
    return InducedModule(q.module, N, B, q.projection, q.section, F.asarray(embedding))


@dataclass
class SplitReport:
    pi_delta_identity: bool | None
    psi_phi_identity: bool | None
    phi_is_homomorphism: bool | None
    pi_well_defined: bool | None

    @property
    def ok(self) -> bool:
        return all(v is not False for v in (self.pi_delta_identity, self.psi_phi_identity, self.phi_is_homomorphism, self.pi_well_defined))


def pi_delta_check(M: FDModule, R: FDAlgebra, embedding: np.ndarray, projection: np.ndarray) -> tuple[bool, bool]:
    """For an ``S``-bimodule projection ``pi: R -> S``: (pi_M well defined, pi_M delta_M = id).

    ``projection`` has shape (dim S, dim R).
    """
    F = M.field
    ind = induce_module(M, R, embedding)
    m = M.dim
    if m == 0:
        return True, True
    # pi_M on R (x)_k M: r_a (x) v -> pi(r_a) v
    blocks = [M.act(F.asarray(projection)[:, a]) for a in range(R.dim)]
    pik = np.concatenate(blocks, axis=1)  # m x (R.dim * m), column a*m + v
    well = not F.matmul(pik, ind.balancing.basis).any() if ind.balancing.dim else True
    comp = F.matmul(F.matmul(pik, ind.section), ind.delta())
    return well, bool(np.array_equal(comp, F.eye(m)))


def psi_phi_check(N: FDModule, S: FDAlgebra, embedding: np.ndarray, zeta: np.ndarray) -> tuple[bool, bool]:
    """For ``zeta`` (coefficient matrix on ``R (x)_k R``): (phi_N is R-linear, psi_N phi_N = id).

    ``N`` is an ``R``-module; it is restricted to ``S`` and induced back.
    """
    F = N.field
    R = N.algebra
    n = N.dim
    if n == 0:
        return True, True
    NS = restrict_module(N, S, embedding)
    ind = induce_module(NS, R, embedding)
    C = F.asarray(zeta)
    # phi^k(v) = sum C[a,b] r_a (x) r_b v
    phik = F.zeros((R.dim * n, n))
    for a in range(R.dim):
        row = F.zeros(R.dim)
        row[:] = C[a]
        phik[a * n : (a + 1) * n, :] = N.act(row)
    phi = F.matmul(ind.projection, phik)
    # psi on the quotient: r_a (x) v -> r_a v
    psik = np.concatenate([N.action[a] for a in range(R.dim)], axis=1)
    psi = F.matmul(psik, ind.section)
    ident = bool(np.array_equal(F.matmul(psi, phi), F.eye(n)))
    linear = all(
        np.array_equal(F.matmul(phi, N.action[i]), F.matmul(ind.module.action[i], phi)) for i in range(R.dim)
    )
    return linear, ident


# -- dimension comparisons -------------------------------------------------------------


@dataclass
class SpotCheck:
    pd_big: PD
    pd_small: PD
    equal_when_finite: bool | None
    monotone: bool | None

    @property
    def ok(self) -> bool:
        return self.equal_when_finite is not False and self.monotone is not False


def theorem_spotcheck(M: FDModule, S: FDAlgebra, embedding: np.ndarray, cutoff: int = 20, *, seed: int = 0) -> SpotCheck:
    """pd over the big algebra vs pd of the restriction: equal if both finite, and never smaller."""
    big = pd(M, cutoff, seed=seed).status
    small = pd(restrict_module(M, S, embedding), cutoff, seed=seed).status
    eq = None
    mono = None
    if big.is_finite and small.is_finite:
        eq = big.value == small.value
    if big.determined and small.determined:
        mono = small.as_number() <= big.as_number()
    elif small.is_infinite:
        mono = False if big.is_finite else None
    return SpotCheck(big, small, eq, mono)


@dataclass
class FdimProbe:
    lower_bound: int
    values: list[PD]


def fdim_probe(modules: Sequence[FDModule], cutoff: int = 20, *, seed: int = 0) -> FdimProbe:
    """Supremum of the finite projective dimensions over a family: a lower bound for fdim."""
    vals = [pd(M, cutoff, seed=seed).status for M in modules]
    finite = [v.value for v in vals if v.is_finite]
    return FdimProbe(max(finite, default=0), vals)


# -- resolutions with explicit maps ----------------------------------------------------


@dataclass
class ResolutionStep:
    cover: ProjectiveCover
    source: FDModule  # the module being covered (Omega^n M)
    inclusion: np.ndarray  # Omega^n M -> P_{n-1} (columns), identity-free for n = 0


def minimal_resolution(M: FDModule, steps: int) -> list[ResolutionStep]:
    """Covers ``P_0 -> M``, ``P_1 -> Omega M``, ... for at most ``steps`` steps or until zero."""
    F = M.field
    out = []
    cur = M
    inc = F.eye(M.dim)
    for _ in range(steps):
        if cur.dim == 0:
            break
        cov = projective_cover(cur)
        out.append(ResolutionStep(cov, cur, inc))
        cur = submodule(cov.module, cov.kernel)
        inc = cov.kernel.basis
    return out


def cover_generators(A: FDAlgebra, summands: Sequence[int]) -> list[tuple[np.ndarray, Subspace]]:
    """For each summand ``A e_c`` of a cover: (e_c, the subspace ``A e_c``)."""
    data = _projective_data(A)
    return [(data[c][0], data[c][1]) for c in summands]
