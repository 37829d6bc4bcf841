"""Bounded complexes of projective modules and their minimal representatives.

A term is a list of idempotents ``e_k``; it stands for ``sum_k R e_k``.
Elements of a term are rows ``(r_k)`` with ``r_k`` in ``R e_k`` and a map
between terms is a matrix ``D`` of algebra elements with ``D[k, l]`` in
``e_k R f_l`` acting by right multiplication, ``(r_k) -> (sum_k r_k D[k, l])``.
Under this convention composing ``X`` then ``Y`` is the matrix product
``X Y`` and ``d^2 = 0`` reads ``D^i D^(i+1) = 0``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .algebra import FDAlgebra, corner_algebra, radical, split_structure
from .homology import (
    FDModule,
    cover_generators,
    induce_module,
    minimal_resolution,
    projective_cover,
    restrict_module,
)
from .linalg import Field, NoSolution, Subspace, solve

__all__ = [
    "ComplexError",
    "PerfectComplex",
    "Metrics",
    "Minimalization",
    "metrics",
    "minimalize",
    "length",
    "is_minimal",
    "resolution_complex",
    "induce_complex",
    "restrict_complex",
    "linear_form",
    "LinearComplex",
    "chain_split_check_pi_delta",
    "chain_split_check_psi_phi",
    "random_complex",
    "identity_complex",
    "direct_sum_complex",
    "emat_mul",
]


class ComplexError(ValueError):
    pass


def emat_mul(R: FDAlgebra, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """Product of matrices of algebra elements (shapes (a, b, r) and (b, c, r))."""
    F = R.field
    a, b, r = X.shape
    c = Y.shape[1]
    if b != Y.shape[0]:
        raise ComplexError("shape mismatch in element-matrix product")
    if a == 0 or c == 0 or b == 0:
        return F.zeros((a, c, r))
    # (X Y)[i, k] = sum_j X[i, j] Y[j, k]; contract through the structure constants
    T = F.matmul(X.reshape(a * b, r), R.table.reshape(r, r * r)).reshape(a, b, r, r)  # (i, j, q, s)
    out = F.zeros((a, c, r))
    for j in range(b):
        # sum_q T[i, j, q, s] Y[j, k, q]
        out = F.reduce(out + F.matmul(Y[j].reshape(c, r), T[:, j].transpose(1, 0, 2).reshape(r, a * r)).reshape(c, a, r).transpose(1, 0, 2))
    return out


def _identity_matrix(R: FDAlgebra, idems: Sequence[np.ndarray]) -> np.ndarray:
    F = R.field
    n = len(idems)
    out = F.zeros((n, n, R.dim))
    for k, e in enumerate(idems):
        out[k, k] = e
    return out


@dataclass
class PerfectComplex:
    algebra: FDAlgebra
    terms: dict  # degree -> list of idempotent vectors
    differentials: dict  # degree i -> (len(terms[i]), len(terms[i+1]), dim R) array

    def __post_init__(self):
        F = self.algebra.field
        self.terms = {int(i): [self.algebra.vec(e) for e in t] for i, t in self.terms.items() if len(t)}
        diffs = {}
        for i in self.degrees_with_maps():
            D = self.differentials.get(i)
            shape = (len(self.term(i)), len(self.term(i + 1)), self.algebra.dim)
            D = F.zeros(shape) if D is None else F.asarray(D)
            if D.shape != shape:
                raise ComplexError(f"differential {i} has shape {D.shape}, expected {shape}")
            diffs[i] = D
        self.differentials = diffs

    def term(self, i: int) -> list:
        return self.terms.get(i, [])

    def degrees(self) -> list[int]:
        return sorted(self.terms)

    def degrees_with_maps(self) -> list[int]:
        return [i for i in self.degrees() if (i + 1) in self.terms]

    def d(self, i: int) -> np.ndarray:
        F = self.algebra.field
        if i in self.differentials:
            return self.differentials[i]
        return F.zeros((len(self.term(i)), len(self.term(i + 1)), self.algebra.dim))

    def check(self) -> None:
        """Entries lie in ``e_k R f_l``, every term idempotent is idempotent and ``d^2 = 0``."""
        R = self.algebra
        for i, t in self.terms.items():
            for e in t:
                if not R.is_idempotent(e):
                    raise ComplexError(f"term {i} contains a non-idempotent")
        for i in self.degrees_with_maps():
            D = self.d(i)
            for k, e in enumerate(self.term(i)):
                for l, f in enumerate(self.term(i + 1)):
                    if not np.array_equal(R.mul(R.mul(e, D[k, l]), f), D[k, l]):
                        raise ComplexError(f"entry ({k}, {l}) of d^{i} is not in e R f")
            if (i + 1) in self.differentials and emat_mul(R, D, self.d(i + 1)).any():
                raise ComplexError(f"d^{i + 1} d^{i} != 0")

    def is_zero(self) -> bool:
        return not self.terms


@dataclass(frozen=True)
class Metrics:
    sup: int | None
    inf: int | None
    amplitude: float  # -inf for the zero complex


def metrics(P: PerfectComplex) -> Metrics:
    degs = [i for i in P.degrees() if P.term(i)]
    if not degs:
        return Metrics(None, None, float("-inf"))
    return Metrics(max(degs), min(degs), max(degs) - min(degs))


def identity_complex(R: FDAlgebra, idems: Sequence[np.ndarray], degree: int = -1) -> PerfectComplex:
    """``P --1--> P`` in degrees ``degree, degree + 1``."""
    return PerfectComplex(R, {degree: list(idems), degree + 1: list(idems)}, {degree: _identity_matrix(R, idems)})


def direct_sum_complex(P: PerfectComplex, Q: PerfectComplex) -> PerfectComplex:
    R = P.algebra
    F = R.field
    degs = sorted(set(P.degrees()) | set(Q.degrees()))
    terms = {i: P.term(i) + Q.term(i) for i in degs}
    diffs = {}
    for i in degs:
        if (i + 1) not in terms:
            continue
        a, b = len(P.term(i)), len(Q.term(i))
        c, e = len(P.term(i + 1)), len(Q.term(i + 1))
        D = F.zeros((a + b, c + e, R.dim))
        D[:a, :c] = P.d(i)
        D[a:, c:] = Q.d(i)
        diffs[i] = D
    return PerfectComplex(R, terms, diffs)


# -- minimalization ---------------------------------------------------------------------


def _unit_inverse(R: FDAlgebra, t: np.ndarray, e: np.ndarray, f: np.ndarray):
    """``t'`` in ``f R e`` with ``t t' = e`` and ``t' t = f``, or None."""
    F = R.field
    if not t.any():
        return None
    M = np.concatenate([R.left_matrix(t), R.right_matrix(t)], axis=0)
    rhs = np.concatenate([e, f])
    try:
        s = solve(M, rhs, F)
    except NoSolution:
        return None
    s = R.mul(R.mul(f, s), e)
    if np.array_equal(R.mul(t, s), e) and np.array_equal(R.mul(s, t), f):
        return s
    return None


@dataclass
class Minimalization:
    """Output complex and homotopy-equivalence witnesses against the input.

    ``f[i]`` maps input to output, ``g[i]`` output to input, ``h[i]``
    (input degree ``i`` to ``i - 1``) satisfies ``f g - 1 = d h + h d``.
    """

    complex: PerfectComplex
    f: dict
    g: dict
    h: dict
    steps: int
    input_terms: dict

    def verify(self, P: PerfectComplex) -> dict:
        """Check chain maps, ``g f = 1`` on the output and the homotopy on the input."""
        R = P.algebra
        Q = self.complex
        F = R.field
        res = {"f_chain": True, "g_chain": True, "gf_identity": True, "homotopy": True}
        degs = sorted(set(P.degrees()) | set(Q.degrees()))
        for i in degs:
            # chain maps in row convention: D_P^i f^(i+1) = f^i D_Q^i
            if emat_mul(R, P.d(i), self.f_at(P, i + 1)).tolist() != emat_mul(R, self.f_at(P, i), Q.d(i)).tolist():
                res["f_chain"] = False
            if emat_mul(R, Q.d(i), self.g_at(i + 1)).tolist() != emat_mul(R, self.g_at(i), P.d(i)).tolist():
                res["g_chain"] = False
            if not np.array_equal(emat_mul(R, self.g_at(i), self.f_at(P, i)), _identity_matrix(R, Q.term(i))):
                res["gf_identity"] = False
            lhs = F.reduce(emat_mul(R, self.f_at(P, i), self.g_at(i)) - _identity_matrix(R, P.term(i)))
            rhs = F.reduce(emat_mul(R, P.d(i), self.h_at(P, i + 1)) + emat_mul(R, self.h_at(P, i), P.d(i - 1)))
            if not np.array_equal(lhs, rhs):
                res["homotopy"] = False
        return res

    def f_at(self, P, i):
        return self.f.get(i, self.complex.algebra.field.zeros((len(P.term(i)), len(self.complex.term(i)), P.algebra.dim)))

    def g_at(self, i):
        R = self.complex.algebra
        return self.g.get(i, R.field.zeros((len(self.complex.term(i)), len(self.input_terms.get(i, [])), R.dim)))

    def h_at(self, P, i):
        return self.h.get(i, P.algebra.field.zeros((len(P.term(i)), len(P.term(i - 1)), P.algebra.dim)))


def _primitive_split(R: FDAlgebra, e: np.ndarray, seed: int = 0) -> list[np.ndarray]:
    """Orthogonal primitive idempotents summing to ``e``."""
    C = corner_algebra(R, e)
    sp = split_structure(C.algebra, seed=seed)
    F = R.field
    return [F.matmul(C.embedding, q.reshape(-1, 1)).reshape(-1) for q in sp.idempotents]


def _refine(P: PerfectComplex, seed: int = 0):
    """Replace every term idempotent by primitive ones; returns (complex, f, g) isomorphisms."""
    R = P.algebra
    F = R.field
    new_terms, f, g = {}, {}, {}
    for i in P.degrees():
        parts = []
        for k, e in enumerate(P.term(i)):
            ps = _primitive_split(R, e, seed)
            parts.append(ps)
        total = sum(len(x) for x in parts)
        Fi = F.zeros((len(P.term(i)), total, R.dim))
        Gi = F.zeros((total, len(P.term(i)), R.dim))
        col, flat = 0, []
        for k, ps in enumerate(parts):
            for q in ps:
                Fi[k, col] = q
                Gi[col, k] = q
                flat.append(q)
                col += 1
        new_terms[i] = flat
        f[i], g[i] = Fi, Gi
    diffs = {}
    for i in P.degrees_with_maps():
        diffs[i] = emat_mul(R, emat_mul(R, g[i], P.d(i)), f[i + 1])
    return PerfectComplex(R, new_terms, diffs), f, g


def _in_radical(R: FDAlgebra, D: np.ndarray) -> bool:
    J = radical(R)
    return all(J.contains(D[k, l]) for k in range(D.shape[0]) for l in range(D.shape[1]))


def is_minimal(P: PerfectComplex) -> bool:
    """All differential entries lie in the radical."""
    return all(_in_radical(P.algebra, P.d(i)) for i in P.degrees_with_maps())


def _find_unit(P: PerfectComplex):
    R = P.algebra
    J = radical(R)
    for i in P.degrees_with_maps():
        D = P.d(i)
        for k, e in enumerate(P.term(i)):
            for l, f in enumerate(P.term(i + 1)):
                t = D[k, l]
                if J.contains(t):
                    continue
                s = _unit_inverse(R, t, e, f)
                if s is not None:
                    return i, k, l, s
    return None


def _eliminate(P: PerfectComplex, i: int, k: int, l: int, s: np.ndarray):
    """Split off ``R e_k --t--> R f_l``; returns (complex, f, g, h) in row convention."""
    R = P.algebra
    F = R.field
    r = R.dim
    Pi, Pj = P.term(i), P.term(i + 1)
    X = [a for a in range(len(Pi)) if a != k]
    Y = [b for b in range(len(Pj)) if b != l]
    D = P.d(i)
    u = D[k, Y][None, :, :]  # 1 x |Y|
    v = D[X, l][:, None, :]  # |X| x 1
    w = D[np.ix_(X, Y)]
    s_m = s.reshape(1, 1, r)
    vs = emat_mul(R, v, s_m)  # |X| x 1
    d_new = F.reduce(w - emat_mul(R, vs, u))
    terms = dict(P.terms)
    terms[i] = [Pi[a] for a in X]
    terms[i + 1] = [Pj[b] for b in Y]
    diffs = dict(P.differentials)
    diffs[i] = d_new
    if (i - 1) in P.differentials:
        diffs[i - 1] = P.d(i - 1)[:, X]
    if (i + 1) in P.differentials:
        diffs[i + 1] = P.d(i + 1)[Y, :]
    terms = {a: t for a, t in terms.items() if t}
    diffs = {a: m for a, m in diffs.items() if a in terms and (a + 1) in terms}
    Q = PerfectComplex(R, terms, diffs)
    f, g, h = {}, {}, {}
    for a in P.degrees():
        if a not in (i, i + 1):
            f[a] = _identity_matrix(R, P.term(a))
            g[a] = _identity_matrix(R, P.term(a))
    # f^i = [[0], [1]] ; f^(i+1) = [[-s u], [1]]
    fi = F.zeros((len(Pi), len(X), r))
    for c, a in enumerate(X):
        fi[a, c] = Pi[a]
    fj = F.zeros((len(Pj), len(Y), r))
    fj[l] = F.reduce(-emat_mul(R, s_m, u))[0]
    for c, b in enumerate(Y):
        fj[b, c] = Pj[b]
    # g^i = [-v s, 1] ; g^(i+1) = [0, 1]
    gi = F.zeros((len(X), len(Pi), r))
    gi[:, k] = F.reduce(-vs)[:, 0]
    for c, a in enumerate(X):
        gi[c, a] = Pi[a]
    gj = F.zeros((len(Y), len(Pj), r))
    for c, b in enumerate(Y):
        gj[c, b] = Pj[b]
    f[i], f[i + 1], g[i], g[i + 1] = fi, fj, gi, gj
    # h^(i+1): P^(i+1) -> P^i with the single entry -s at (l, k)
    hj = F.zeros((len(Pj), len(Pi), r))
    hj[l, k] = F.reduce(-s)
    h[i + 1] = hj
    return Q, f, g, h


def _compose(R, P_terms, F1, G1, H1, F2, G2, H2, mid_terms, out_terms):
    """Compose (P -> M -> Q) witnesses: F = F1 F2, G = G2 G1, H = H1 + F1 H2 G1."""
    F = R.field
    f, g, h = {}, {}, {}
    for i in set(P_terms):
        zero_pm = F.zeros((len(P_terms.get(i, [])), len(mid_terms.get(i, [])), R.dim))
        zero_mq = F.zeros((len(mid_terms.get(i, [])), len(out_terms.get(i, [])), R.dim))
        a = F1.get(i, zero_pm)
        b = F2.get(i, zero_mq)
        f[i] = emat_mul(R, a, b)
        g[i] = emat_mul(R, G2.get(i, F.zeros((len(out_terms.get(i, [])), len(mid_terms.get(i, [])), R.dim))), G1.get(i, F.zeros((len(mid_terms.get(i, [])), len(P_terms.get(i, [])), R.dim))))
    for i in set(P_terms):
        base = H1.get(i, F.zeros((len(P_terms.get(i, [])), len(P_terms.get(i - 1, [])), R.dim)))
        if i in H2:
            f1 = F1.get(i, F.zeros((len(P_terms.get(i, [])), len(mid_terms.get(i, [])), R.dim)))
            g1 = G1.get(i - 1, F.zeros((len(mid_terms.get(i - 1, [])), len(P_terms.get(i - 1, [])), R.dim)))
            base = F.reduce(base + emat_mul(R, emat_mul(R, f1, H2[i]), g1))
        h[i] = base
    return f, g, h


def minimalize(P: PerfectComplex, *, seed: int = 0) -> Minimalization:
    """Gaussian elimination until every differential entry lies in the radical.

    Degrees are scanned from the lowest, entries row by row; each step
    splits off a contractible summand ``R e --unit--> R f``.
    """
    R = P.algebra
    P.check()
    cur, f, g = _refine(P, seed)
    h: dict = {}
    steps = 0
    while True:
        hit = _find_unit(cur)
        if hit is None:
            break
        i, k, l, s = hit
        nxt, f2, g2, h2 = _eliminate(cur, i, k, l, s)
        f, g, h = _compose(R, P.terms, f, g, h, f2, g2, h2, cur.terms, nxt.terms)
        cur = nxt
        steps += 1
    out = Minimalization(cur, f, g, h, steps, dict(P.terms))
    if not is_minimal(cur):  # pragma: no cover - the loop only stops on minimal complexes
        raise ComplexError("minimalization stopped on a non-minimal complex")
    return out


def length(P: PerfectComplex, *, seed: int = 0) -> float:
    """Amplitude of the minimal representative (``-inf`` for contractible complexes)."""
    return metrics(minimalize(P, seed=seed).complex).amplitude


# -- resolutions as complexes ----------------------------------------------------------------


def resolution_complex(M: FDModule, width: int) -> PerfectComplex:
    """Minimal projective resolution ``P_n -> ... -> P_0`` in degrees ``-n .. 0``, ``n < width``."""
    R = M.algebra
    F = R.field
    steps = minimal_resolution(M, width)
    terms = {}
    gens = []
    for n, st in enumerate(steps):
        g = cover_generators(R, st.cover.summands)
        gens.append(g)
        terms[-n] = [e for e, _ in g]
    diffs = {}
    for n in range(1, len(steps)):
        st = steps[n]
        prev = gens[n - 1]
        cur = gens[n]
        D = F.zeros((len(cur), len(prev), R.dim))
        # image of each generator of P_n, inside P_(n-1)
        off = 0
        offs_prev = []
        for e, W in prev:
            offs_prev.append(off)
            off += W.dim
        col = 0
        for j, (e, W) in enumerate(cur):
            block = st.cover.epimorphism[:, col : col + W.dim]
            img_in_syz = F.matmul(block, W.coordinates(e).reshape(-1, 1)).reshape(-1)
            img = F.matmul(st.inclusion, img_in_syz.reshape(-1, 1)).reshape(-1)
            for l, (f, Wl) in enumerate(prev):
                coords = img[offs_prev[l] : offs_prev[l] + Wl.dim]
                D[j, l] = F.matmul(Wl.basis, coords.reshape(-1, 1)).reshape(-1)
            col += W.dim
        diffs[-n] = D
    return PerfectComplex(R, terms, diffs)


# -- induction and restriction --------------------------------------------------------------


def induce_complex(Q: PerfectComplex, R: FDAlgebra, embedding: np.ndarray) -> PerfectComplex:
    """Apply ``R (x)_S -``: ``S e -> R e`` and entries through the embedding."""
    F = R.field
    E = F.asarray(embedding)

    def up(v):
        return F.matmul(E, v.reshape(-1, 1)).reshape(-1)

    terms = {i: [up(e) for e in t] for i, t in Q.terms.items()}
    diffs = {}
    for i, D in Q.differentials.items():
        a, b, _ = D.shape
        out = F.zeros((a, b, R.dim))
        for k in range(a):
            for l in range(b):
                out[k, l] = up(D[k, l])
        diffs[i] = out
    P = PerfectComplex(R, terms, diffs)
    P.check()
    return P


@dataclass
class LinearComplex:
    """Terms as modules and differentials as ground-field matrices (column convention)."""

    modules: dict  # degree -> FDModule
    maps: dict  # degree -> matrix from modules[i] to modules[i+1]

    def map(self, i: int) -> np.ndarray:
        if i in self.maps:
            return self.maps[i]
        F = next(iter(self.modules.values())).field if self.modules else None
        a = self.modules[i].dim if i in self.modules else 0
        b = self.modules[i + 1].dim if (i + 1) in self.modules else 0
        return F.zeros((b, a))


def _term_module(R: FDAlgebra, idems: Sequence[np.ndarray]):
    F = R.field
    spaces = [Subspace.column_space(F, R.right_matrix(e)) for e in idems]
    dims = [W.dim for W in spaces]
    m = sum(dims)
    act = F.zeros((R.dim, m, m))
    off = 0
    for W in spaces:
        for i in range(R.dim):
            act[i, off : off + W.dim, off : off + W.dim] = W.coordinate_matrix(F.matmul(R.left_matrix(R.basis_vector(i)), W.basis))
        off += W.dim
    return FDModule(R, act, check=False), spaces


def linear_form(P: PerfectComplex) -> tuple[LinearComplex, dict]:
    """Linear model of ``P``; also returns the per-degree summand subspaces."""
    R = P.algebra
    F = R.field
    mods, spaces = {}, {}
    for i in P.degrees():
        mods[i], spaces[i] = _term_module(R, P.term(i))
    maps = {}
    for i in P.degrees_with_maps():
        D = P.d(i)
        src, tgt = spaces[i], spaces[i + 1]
        M = F.zeros((mods[i + 1].dim, mods[i].dim))
        col = 0
        for k, W in enumerate(src):
            row = 0
            for l, V in enumerate(tgt):
                imgs = F.matmul(R.right_matrix(D[k, l]), W.basis)
                M[row : row + V.dim, col : col + W.dim] = V.coordinate_matrix(imgs)
                row += V.dim
            col += W.dim
        maps[i] = M
    return LinearComplex(mods, maps), spaces


def restrict_complex(P: PerfectComplex, S: FDAlgebra, embedding: np.ndarray) -> PerfectComplex:
    """Termwise restriction, each term rewritten as a sum of indecomposable ``S``-projectives.

    Requires every restricted term to be projective over ``S`` (its cover has zero kernel).
    """
    F = S.field
    lin, _ = linear_form(P)
    terms, isos, gens = {}, {}, {}
    for i, M in lin.modules.items():
        MS = restrict_module(M, S, embedding)
        cov = projective_cover(MS)
        if cov.kernel.dim:
            raise ComplexError(f"term {i} is not projective over the subalgebra")
        g = cover_generators(S, cov.summands)
        terms[i] = [e for e, _ in g]
        isos[i] = cov.epimorphism  # cover coords -> term coords
        gens[i] = g
    diffs = {}
    for i in P.degrees_with_maps():
        inv_next = _inverse(isos[i + 1], F)
        Dlin = F.matmul(inv_next, F.matmul(lin.maps[i], isos[i]))  # cover_i -> cover_(i+1)
        src, tgt = gens[i], gens[i + 1]
        D = F.zeros((len(src), len(tgt), S.dim))
        col = 0
        for k, (e, W) in enumerate(src):
            gen = F.zeros(Dlin.shape[1])
            gen[col : col + W.dim] = W.coordinates(e)
            img = F.matmul(Dlin, gen.reshape(-1, 1)).reshape(-1)
            row = 0
            for l, (f, V) in enumerate(tgt):
                D[k, l] = F.matmul(V.basis, img[row : row + V.dim].reshape(-1, 1)).reshape(-1)
                row += V.dim
            col += W.dim
        diffs[i] = D
    Q = PerfectComplex(S, terms, diffs)
    Q.check()
    return Q


def _inverse(M: np.ndarray, F: Field) -> np.ndarray:
    n = M.shape[0]
    if n == 0:
        return F.zeros((0, 0))
    return np.stack([solve(M, F.eye(n)[:, j], F) for j in range(n)], axis=1)


# -- split chain maps ---------------------------------------------------------------------


@dataclass
class ChainSplitReport:
    chain_maps: bool
    identity: bool
    module_maps: bool
    degrees: int

    @property
    def ok(self) -> bool:
        return self.chain_maps and self.identity and self.module_maps


def _is_module_map(X: np.ndarray, src: FDModule, tgt: FDModule, gens) -> bool:
    F = src.field
    for g in gens:
        if not np.array_equal(F.matmul(tgt.act(g), X), F.matmul(X, src.act(g))):
            return False
    return True


def chain_split_check_pi_delta(Q: PerfectComplex, R: FDAlgebra, embedding: np.ndarray, projection: np.ndarray) -> ChainSplitReport:
    """``delta: Q -> Q up down`` (``s -> 1 s``) and ``pi`` (``r -> pi(r)``) with ``pi delta = 1``.

    ``projection`` is an ``S``-bimodule retraction ``R -> S`` (shape dim S x dim R).
    """
    S = Q.algebra
    F = S.field
    E = F.asarray(embedding)
    Pi = F.asarray(projection)
    up = induce_complex(Q, R, E)
    linQ, spQ = linear_form(Q)
    linU, spU = linear_form(up)
    deltas, pis = {}, {}
    for i in Q.degrees():
        a, b = spQ[i], spU[i]
        dQ = linQ.modules[i].dim
        dU = linU.modules[i].dim
        Dm = F.zeros((dU, dQ))
        Pm = F.zeros((dQ, dU))
        offs_U = np.cumsum([0] + [W.dim for W in b])
        offs_Q = np.cumsum([0] + [W.dim for W in a])
        for k, (W, V) in enumerate(zip(a, b)):
            Dm[offs_U[k] : offs_U[k + 1], offs_Q[k] : offs_Q[k + 1]] = V.coordinate_matrix(F.matmul(E, W.basis))
            Pm[offs_Q[k] : offs_Q[k + 1], offs_U[k] : offs_U[k + 1]] = W.coordinate_matrix(F.matmul(Pi, V.basis))
        deltas[i], pis[i] = Dm, Pm
    chain = True
    for i in Q.degrees_with_maps():
        if not np.array_equal(F.matmul(linU.maps[i], deltas[i]), F.matmul(deltas[i + 1], linQ.maps[i])):
            chain = False
        if not np.array_equal(F.matmul(linQ.maps[i], pis[i]), F.matmul(pis[i + 1], linU.maps[i])):
            chain = False
    ident = all(np.array_equal(F.matmul(pis[i], deltas[i]), F.eye(linQ.modules[i].dim)) for i in Q.degrees())
    gens = S.generators()
    mods = True
    for i in Q.degrees():
        MU = restrict_module(linU.modules[i], S, E)
        if not _is_module_map(deltas[i], linQ.modules[i], MU, gens) or not _is_module_map(pis[i], MU, linQ.modules[i], gens):
            mods = False
    return ChainSplitReport(chain, ident, mods, len(Q.degrees()))


def chain_split_check_psi_phi(P: PerfectComplex, S: FDAlgebra, embedding: np.ndarray, zeta: np.ndarray) -> ChainSplitReport:
    """``phi: P -> P down up`` via ``zeta`` and ``psi: r (x) v -> r v`` with ``psi phi = 1`` degreewise."""
    R = P.algebra
    F = R.field
    E = F.asarray(embedding)
    C = F.asarray(zeta)
    lin, _ = linear_form(P)
    phis, psis, inds = {}, {}, {}
    for i, N in lin.modules.items():
        n = N.dim
        ind = induce_module(restrict_module(N, S, E), R, E)
        phik = F.zeros((R.dim * n, n))
        for a in range(R.dim):
            phik[a * n : (a + 1) * n, :] = N.act(C[a])
        phis[i] = F.matmul(ind.projection, phik)
        psik = np.concatenate([N.action[a] for a in range(R.dim)], axis=1) if n else F.zeros((0, 0))
        psis[i] = F.matmul(psik, ind.section) if n else F.zeros((0, ind.module.dim))
        inds[i] = ind
    chain = True
    for i in P.degrees_with_maps():
        # the induced differential is 1 (x) d, pushed through the quotient
        big = np.kron(F.eye(R.dim), lin.maps[i])
        d_ind = F.matmul(F.matmul(inds[i + 1].projection, big), inds[i].section)
        if not np.array_equal(F.matmul(d_ind, phis[i]), F.matmul(phis[i + 1], lin.maps[i])):
            chain = False
        if not np.array_equal(F.matmul(lin.maps[i], psis[i]), F.matmul(psis[i + 1], d_ind)):
            chain = False
    ident = all(np.array_equal(F.matmul(psis[i], phis[i]), F.eye(lin.modules[i].dim)) for i in P.degrees())
    mods = True
    gens = R.generators()
    for i in P.degrees():
        if not _is_module_map(phis[i], lin.modules[i], inds[i].module, gens) or not _is_module_map(psis[i], inds[i].module, lin.modules[i], gens):
            mods = False
    return ChainSplitReport(chain, ident, mods, len(P.degrees()))


# -- random complexes -----------------------------------------------------------------------


def _random_entry(R: FDAlgebra, e, f, rng, radical_only: bool = False) -> np.ndarray:
    F = R.field
    W = Subspace.column_space(F, F.matmul(R.left_matrix(e), R.right_matrix(f)))
    if radical_only:
        W = W.intersect(radical(R))
    if W.dim == 0:
        return F.zeros(R.dim)
    return F.matmul(W.basis, F.random_array(rng, (W.dim, 1))).reshape(-1)


def random_complex(R: FDAlgebra, idems: Sequence[np.ndarray], sizes: Sequence[int], rng, *, start: int = 0) -> PerfectComplex:
    """Random complex with ``sizes[j]`` summands in degree ``start + j``.

    Summand idempotents are drawn from ``idems``; each new differential is a
    random element of the space of maps killed by composition with the next one.
    """
    F = R.field
    nterm = len(sizes)
    terms = {start + j: [idems[int(rng.integers(len(idems)))] for _ in range(sizes[j])] for j in range(nterm)}
    diffs = {}
    for j in reversed(range(nterm - 1)):
        i = start + j
        src, tgt = terms[i], terms[i + 1]
        nxt = diffs.get(i + 1)
        # parametrize D entrywise by bases of e_k R f_l, then impose D * nxt = 0
        bases = []
        for e in src:
            row = []
            for f in tgt:
                row.append(Subspace.column_space(F, F.matmul(R.left_matrix(e), R.right_matrix(f))).basis)
            bases.append(row)
        index = []
        for k in range(len(src)):
            for l in range(len(tgt)):
                for c in range(bases[k][l].shape[1]):
                    index.append((k, l, c))
        if not index:
            diffs[i] = F.zeros((len(src), len(tgt), R.dim))
            continue

        def build(coeffs):
            D = F.zeros((len(src), len(tgt), R.dim))
            for (k, l, c), a in zip(index, coeffs):
                if a:
                    D[k, l] = F.reduce(D[k, l] + a * bases[k][l][:, c])
            return D

        if nxt is None:
            coeffs = F.random_array(rng, (len(index),))
        else:
            images = []
            for t in range(len(index)):
                unit = F.zeros(len(index))
                unit[t] = 1
                images.append(emat_mul(R, build(unit), nxt).reshape(-1))
            K = Subspace.kernel(F, np.stack(images, axis=1))
            if K.dim == 0:
                coeffs = F.zeros(len(index))
            else:
                coeffs = F.matmul(K.basis, F.random_array(rng, (K.dim, 1))).reshape(-1)
        diffs[i] = build(coeffs)
    P = PerfectComplex(R, terms, diffs)
    P.check()
    return P
