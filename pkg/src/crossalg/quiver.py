"""Bound quiver algebras kQ/I and algebra automorphisms from quiver symmetries.

Composition is right to left: the written path ``beta*gamma`` means
"first gamma, then beta", so it is nonzero only when the target of
``gamma`` is the source of ``beta``.  A path is stored as the tuple of
arrow indices in written order.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

import numpy as np

from .algebra import FDAlgebra, automorphism_witness, matrix_order
from .linalg import Field, Subspace

__all__ = [
    "QuiverError",
    "InfiniteDimensional",
    "InhomogeneousRelation",
    "RelationsNotPreserved",
    "BoundQuiver",
    "QuiverSymmetry",
    "PathAlgebra",
    "parse_relation",
    "path_algebra",
    "symmetry_to_automorphism",
    "symmetry_order",
]

MAX_PATH_LENGTH = 64


class QuiverError(ValueError):
    pass


class InfiniteDimensional(QuiverError):
    pass


class InhomogeneousRelation(QuiverError):
    def __init__(self, index: int, message: str):
        self.index = index
        super().__init__(f"relation {index}: {message}")


class RelationsNotPreserved(QuiverError):
    def __init__(self, index: int):
        self.index = index
        super().__init__(f"the symmetry does not preserve the relation ideal (relation {index})")


Path = tuple[int, ...]


@dataclass
class BoundQuiver:
    """Vertices, arrows ``(name, source, target)`` and relations.

    A relation is a dict mapping paths (tuples of arrow indices, written
    order) to nonzero scalars.  Use :func:`parse_relation` to build one
    from text such as ``"2*a*b - c*d"``.
    """

    field: Field
    vertices: list[str]
    arrows: list[tuple[str, int, int]]
    relations: list[dict] = dc_field(default_factory=list)

    def __post_init__(self):
        n = len(self.vertices)
        if len(set(self.vertices)) != n:
            raise QuiverError("duplicate vertex names")
        names = [a[0] for a in self.arrows]
        if len(set(names)) != len(names):
            raise QuiverError("duplicate arrow names")
        for name, s, t in self.arrows:
            if not (0 <= s < n and 0 <= t < n):
                raise QuiverError(f"arrow {name!r} references an undeclared vertex")
        self.relations = [self._check_relation(k, r) for k, r in enumerate(self.relations)]

    @classmethod
    def from_names(cls, field: Field, vertices, arrows, relations=()) -> "BoundQuiver":
        """Arrows given as ``(name, source_name, target_name)``; relations as strings."""
        vidx = {v: i for i, v in enumerate(vertices)}
        try:
            arr = [(a, vidx[s], vidx[t]) for a, s, t in arrows]
        except KeyError as exc:
            raise QuiverError(f"unknown vertex {exc.args[0]!r}") from None
        q = cls(field, list(vertices), arr, [])
        q.relations = [q._check_relation(k, parse_relation(r, q) if isinstance(r, str) else r) for k, r in enumerate(relations)]
        return q

    def arrow_index(self, name: str) -> int:
        for i, a in enumerate(self.arrows):
            if a[0] == name:
                return i
        raise QuiverError(f"unknown arrow {name!r}")

    def vertex_index(self, name: str) -> int:
        try:
            return self.vertices.index(name)
        except ValueError:
            raise QuiverError(f"unknown vertex {name!r}") from None

    def source(self, path: Path) -> int:
        return self.arrows[path[-1]][1]

    def target(self, path: Path) -> int:
        return self.arrows[path[0]][2]

    def is_path(self, path: Path) -> bool:
        return all(self.arrows[path[k]][1] == self.arrows[path[k + 1]][2] for k in range(len(path) - 1))

    def path_name(self, path: Path) -> str:
        return "*".join(self.arrows[a][0] for a in path)

    def _check_relation(self, k: int, rel: dict) -> dict:
        rel = {tuple(p): self.field.scalar(c) for p, c in rel.items()}
        rel = {p: c for p, c in rel.items() if c != 0}
        if not rel:
            return rel
        ends = set()
        lengths = set()
        for p in rel:
            if len(p) == 0 or not self.is_path(p):
                raise QuiverError(f"relation {k}: {p!r} is not a path")
            ends.add((self.source(p), self.target(p)))
            lengths.add(len(p))
        if len(ends) > 1:
            raise InhomogeneousRelation(k, "paths have different endpoints")
        if len(lengths) > 1:
            raise InhomogeneousRelation(k, "paths have different lengths")
        if min(lengths) < 2:
            raise QuiverError(f"relation {k}: relations must lie in paths of length >= 2")
        return rel

    def paths_of_length(self, n: int) -> list[Path]:
        """All paths of length ``n >= 1`` in lexicographic order of arrow indices."""
        out: list[Path] = [(a,) for a in range(len(self.arrows))]
        for _ in range(n - 1):
            out = [p + (a,) for p in out for a in range(len(self.arrows)) if self.arrows[p[-1]][1] == self.arrows[a][2]]
        return out


_TERM = re.compile(r"\s*([+-]?)\s*((?:\d+(?:/\d+)?\s*\*\s*)?)([A-Za-z_][\w']*(?:\s*\*\s*[A-Za-z_][\w']*)*)\s*")


def parse_relation(text: str, quiver: BoundQuiver) -> dict:
    """Parse ``"c1*p1 + c2*p2 - ..."`` where each ``p`` is ``arrow*arrow*...``."""
    rel: dict = {}
    pos = 0
    text = text.strip()
    if not text:
        raise QuiverError("empty relation")
    first = True
    while pos < len(text):
        m = _TERM.match(text, pos)
        if not m or m.end() == pos or (not first and not m.group(1)):
            raise QuiverError(f"cannot parse relation {text!r} at position {pos}")
        sign = -1 if m.group(1) == "-" else 1
        coeff = Fraction(m.group(2).replace("*", "").strip()) if m.group(2).strip() else Fraction(1)
        names = [s.strip() for s in m.group(3).split("*")]
        path = tuple(quiver.arrow_index(n) for n in names)
        rel[path] = rel.get(path, 0) + sign * coeff
        pos = m.end()
        first = False
    return {p: c for p, c in rel.items()}


@dataclass
class PathAlgebra:
    """The algebra ``kQ/I`` plus its basis labels.

    ``labels[i]`` is ``("vertex", v)`` or ``("path", path)``; positive
    length basis elements span the radical.
    """

    quiver: BoundQuiver
    algebra: FDAlgebra
    labels: list
    vertex_idempotents: list[np.ndarray]
    radical: Subspace
    max_length: int
    _normal: dict  # length -> (paths, Subspace of relations, basis positions)

    @property
    def dim(self) -> int:
        return len(self.labels)

    def vertex(self, v) -> np.ndarray:
        i = v if isinstance(v, int) else self.quiver.vertex_index(v)
        return self.vertex_idempotents[i].copy()

    def path(self, spec) -> np.ndarray:
        """Coordinates of a path given as a name ``"beta*gamma"`` or index tuple."""
        if isinstance(spec, str):
            spec = tuple(self.quiver.arrow_index(s.strip()) for s in spec.split("*"))
        return self.normal_form({tuple(spec): 1})

    def arrow(self, name) -> np.ndarray:
        i = name if isinstance(name, int) else self.quiver.arrow_index(name)
        return self.path((i,))

    def normal_form(self, combo: dict) -> np.ndarray:
        """Coordinates of a linear combination of paths (keys are index tuples)."""
        F = self.quiver.field
        out = F.zeros(self.dim)
        for p, c in combo.items():
            out = F.reduce(out + F.scalar(c) * self._path_vector(tuple(p)))
        return out

    def _path_vector(self, p: Path) -> np.ndarray:
        F = self.quiver.field
        v = F.zeros(self.dim)
        if not self.quiver.is_path(p) or len(p) > self.max_length:
            return v
        paths, rels, positions = self._normal[len(p)]
        col = paths.index(p)
        w = F.zeros(len(paths))
        w[col] = 1
        w = rels.reduce(w)
        for k, c in enumerate(w):
            if c != 0:
                v[positions[k]] = c
        return v

    def label(self, i: int) -> str:
        kind, x = self.labels[i]
        return f"e_{self.quiver.vertices[x]}" if kind == "vertex" else self.quiver.path_name(x)


def path_algebra(Q: BoundQuiver, max_length: int = MAX_PATH_LENGTH) -> PathAlgebra:
    """Basis: vertices, then surviving path classes by length (lexicographic)."""
    F = Q.field
    nv = len(Q.vertices)
    relations = [r for r in Q.relations if r]
    normal: dict = {}
    basis_paths: list[Path] = []
    length = 1
    while True:
        paths = Q.paths_of_length(length) if Q.arrows else []
        if not paths:
            break
        # columns ordered from the longest lexicographic path so that pivots
        # fall on large paths and small paths remain as basis representatives
        order = {p: len(paths) - 1 - k for k, p in enumerate(paths)}
        gens = []
        for rel in relations:
            rl = len(next(iter(rel)))
            if rl > length:
                continue
            for left in range(length - rl + 1):
                right = length - rl - left
                for u in (Q.paths_of_length(left) if left else [()]):
                    for w in (Q.paths_of_length(right) if right else [()]):
                        vec = F.zeros(len(paths))
                        hit = False
                        for p, c in rel.items():
                            full = u + p + w
                            if Q.is_path(full):
                                vec[order[full]] = F.reduce(vec[order[full]] + c)
                                hit = True
                        if hit and vec.any():
                            gens.append(vec)
        rels = Subspace.span(F, len(paths), gens)
        if rels.dim == len(paths):
            break
        if length > max_length:
            raise InfiniteDimensional(f"nonzero paths of length {length} survive the relations")
        survivors = rels.complement_indices()
        rev = [None] * len(paths)
        for p, k in order.items():
            rev[k] = p
        normal[length] = (rev, rels, {})
        for k in sorted(survivors, key=lambda k: rev[k]):
            normal[length][2][k] = nv + len(basis_paths)
            basis_paths.append(rev[k])
        length += 1
    max_len = length - 1
    d = nv + len(basis_paths)
    labels = [("vertex", i) for i in range(nv)] + [("path", p) for p in basis_paths]
    proto = PathAlgebra(Q, None, labels, [], Subspace.zero(F, d), max_len, normal)
    table = F.zeros((d, d, d))
    for i, (ki, xi) in enumerate(labels):
        for j, (kj, xj) in enumerate(labels):
            if ki == "vertex" and kj == "vertex":
                if xi == xj:
                    table[i, j, i] = 1
            elif ki == "vertex":
                if Q.target(xj) == xi:
                    table[i, j, j] = 1
            elif kj == "vertex":
                if Q.source(xi) == xj:
                    table[i, j, i] = 1
            elif Q.source(xi) == Q.target(xj):
                table[i, j] = proto._path_vector(xi + xj)
    one = F.zeros(d)
    one[:nv] = 1
    idem = []
    for i in range(nv):
        e = F.zeros(d)
        e[i] = 1
        idem.append(e)
    rad_vectors = []
    for k in range(nv, d):
        v = F.zeros(d)
        v[k] = 1
        rad_vectors.append(v)
    rad = Subspace.span(F, d, rad_vectors)
    gens = list(idem)
    for a in range(len(Q.arrows)):
        v = proto._path_vector((a,))
        if v.any():
            gens.append(v)
    A = FDAlgebra(F, table, one, name="kQ/I", idempotents=idem, generators=gens, radical_hint=rad)
    proto.algebra = A
    proto.vertex_idempotents = idem
    proto.radical = rad
    return proto


@dataclass
class QuiverSymmetry:
    """A vertex permutation and a compatible arrow permutation (lists of images)."""

    vertex_perm: list[int]
    arrow_perm: list[int]

    @classmethod
    def from_names(cls, Q: BoundQuiver, vertex_map: dict, arrow_map: dict) -> "QuiverSymmetry":
        vp = list(range(len(Q.vertices)))
        for a, b in vertex_map.items():
            vp[Q.vertex_index(a)] = Q.vertex_index(b)
        ap = list(range(len(Q.arrows)))
        for a, b in arrow_map.items():
            ap[Q.arrow_index(a)] = Q.arrow_index(b)
        return cls(vp, ap)

    def check(self, Q: BoundQuiver):
        if sorted(self.vertex_perm) != list(range(len(Q.vertices))):
            raise QuiverError("vertex map is not a permutation")
        if sorted(self.arrow_perm) != list(range(len(Q.arrows))):
            raise QuiverError("arrow map is not a permutation")
        for a, (name, s, t) in enumerate(Q.arrows):
            _, s2, t2 = Q.arrows[self.arrow_perm[a]]
            if s2 != self.vertex_perm[s] or t2 != self.vertex_perm[t]:
                raise QuiverError(f"arrow map is not compatible with the vertex map at {name!r}")

    def compose(self, other: "QuiverSymmetry") -> "QuiverSymmetry":
        """``self`` after ``other``."""
        return QuiverSymmetry([self.vertex_perm[v] for v in other.vertex_perm], [self.arrow_perm[a] for a in other.arrow_perm])

    def apply_path(self, p: Path) -> Path:
        return tuple(self.arrow_perm[a] for a in p)


def symmetry_to_automorphism(P: PathAlgebra, s: QuiverSymmetry) -> np.ndarray:
    """Matrix (columns = images of basis elements) of the induced automorphism."""
    Q = P.quiver
    s.check(Q)
    F = Q.field
    for k, rel in enumerate(Q.relations):
        if rel and P.normal_form({s.apply_path(p): c for p, c in rel.items()}).any():
            raise RelationsNotPreserved(k)
    d = P.dim
    M = F.zeros((d, d))
    for j, (kind, x) in enumerate(P.labels):
        if kind == "vertex":
            M[s.vertex_perm[x], j] = 1
        else:
            M[:, j] = P.normal_form({s.apply_path(x): 1})
    w = automorphism_witness(P.algebra, M)
    if w is not None:
        raise QuiverError(f"induced map is not an automorphism: {w}")
    return M


def symmetry_order(P: PathAlgebra, s: QuiverSymmetry) -> int:
    return matrix_order(symmetry_to_automorphism(P, s), P.quiver.field)
