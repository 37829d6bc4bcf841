"""JSON workspaces: a field, an algebra (quiver or structure constants), a group, sigma, alpha, modules.

Document layout (all keys at the top level, possibly split across files)::

    {
      "format": "crossed-product-workspace/1",
      "composition": "right-to-left",      # "b*a" means a first, then b
      "field": {"characteristic": 2},
      "quiver": {"vertices": [...], "arrows": [[name, source, target], ...], "relations": ["b*a", ...]},
      "algebra": {"dim": d, "one": [...], "structure_constants": [[i, j, k, c], ...]},
      "group": {"cyclic": n} | {"symmetric": n} | {"product": [g, h]} | {"table": [[...]], "names": [...]},
      "sigma": {"generators": {"g": {"vertices": {...}, "arrows": {...}} | {"matrix": [[...]]}}},
      "alpha": {"values": [{"x": "g", "y": "g", "value": [...]}]},   # unlisted pairs are 1
      "domain": {"basis": [[...]]},
      "modules": {"name": {"kind": "simple", "over": "crossed", "index": 0}, ...}
    }

Exactly one of ``quiver`` / ``algebra`` is present.  Scalars are integers
or strings ``"a/b"``.  Group elements are referred to by name or index.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from pathlib import Path

import numpy as np

from .algebra import AlgebraError, FDAlgebra
from .crossed import CrossedError, ParameterSet, extend_action, validate_parameter_set
from .group import FiniteGroup, GroupError, cyclic_group, direct_product, symmetric_group, validate_group
from .linalg import GF, QQ, Field, Subspace
from .quiver import BoundQuiver, PathAlgebra, QuiverError, QuiverSymmetry, path_algebra, symmetry_to_automorphism

__all__ = [
    "FORMAT",
    "WorkspaceError",
    "ParseError",
    "ValidationError",
    "Workspace",
    "parse_inputs",
    "load_document",
    "dump_document",
    "workspace_document",
    "relation_text",
    "fixture_workspace",
]

FORMAT = "crossed-product-workspace/1"
KEYS = ("format", "composition", "field", "quiver", "algebra", "group", "sigma", "alpha", "domain", "modules")


class WorkspaceError(Exception):
    def __init__(self, message: str, *, source: str = "<document>", where: str = "", line: int | None = None):
        self.source = source
        self.where = where
        self.line = line
        loc = source
        if line is not None:
            loc += f":{line}"
        if where:
            loc += f": {where}"
        super().__init__(f"{loc}: {message}")


class ParseError(WorkspaceError):
    pass


class ValidationError(WorkspaceError):
    pass


@dataclass
class Workspace:
    field: Field
    algebra: FDAlgebra
    group: FiniteGroup
    ps: ParameterSet
    path: PathAlgebra | None = None
    domain: Subspace | None = None
    modules: dict = dc_field(default_factory=dict)
    document: dict = dc_field(default_factory=dict)  # canonical form
    source: str = "<document>"

    def same_as(self, other: "Workspace") -> bool:
        return self.ps.same_as(other.ps) and self.document == other.document


# -- scalars and locations ------------------------------------------------------------------


def _scalar_json(F: Field, x):
    v = F.scalar(x)
    if F.p:
        return int(v)
    v = Fraction(v)
    return int(v) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def _vec_json(F: Field, v) -> list:
    return [_scalar_json(F, x) for x in np.asarray(v).reshape(-1)]


def _read_scalar(F: Field, x, ctx):
    if isinstance(x, bool) or not isinstance(x, (int, str)):
        raise ctx.parse(f"expected an integer or 'a/b' string, got {x!r}")
    try:
        return F.scalar(Fraction(x))
    except (ValueError, ZeroDivisionError):
        raise ctx.parse(f"bad scalar {x!r}") from None


class _Ctx:
    """Error factory with a source name and a best-effort line lookup."""

    def __init__(self, source: str, text: str | None, where: str = ""):
        self.source, self.text, self.where = source, text, where

    def at(self, where: str) -> "_Ctx":
        return _Ctx(self.source, self.text, f"{self.where}.{where}" if self.where else where)

    def _line(self):
        if not self.text or not self.where:
            return None
        key = self.where.split(".")[0]
        idx = self.text.find(f'"{key}"')
        return None if idx < 0 else self.text.count("\n", 0, idx) + 1

    def parse(self, msg: str) -> ParseError:
        return ParseError(msg, source=self.source, where=self.where, line=self._line())

    def invalid(self, msg: str) -> ValidationError:
        return ValidationError(msg, source=self.source, where=self.where, line=self._line())


def _need(d, key, typ, ctx):
    if not isinstance(d, dict) or key not in d:
        raise ctx.parse(f"missing key {key!r}")
    v = d[key]
    if not isinstance(v, typ):
        raise ctx.at(key).parse(f"expected {getattr(typ, '__name__', typ)}")
    return v


# -- sections ----------------------------------------------------------------------------------


def _field(doc, ctx) -> Field:
    spec = doc.get("field")
    if not isinstance(spec, dict) or "characteristic" not in spec:
        raise ctx.at("field").parse("field must be {'characteristic': p}")
    p = spec["characteristic"]
    if not isinstance(p, int) or p < 0 or (p and (p < 2 or any(p % q == 0 for q in range(2, int(p**0.5) + 1)))):
        raise ctx.at("field").invalid(f"characteristic must be 0 or a prime, got {p!r}")
    F = GF(p) if p else QQ
    for key in ("quiver", "algebra", "group", "sigma", "alpha", "domain"):
        sec = doc.get(key)
        if isinstance(sec, dict) and "characteristic" in sec and sec["characteristic"] != p:
            raise ctx.at(key).invalid(f"characteristic mismatch: field is {p}, section declares {sec['characteristic']}")
    return F


def _group(spec, ctx) -> FiniteGroup:
    kinds = [k for k in ("cyclic", "symmetric", "product", "table") if isinstance(spec, dict) and k in spec]
    if len(kinds) != 1:
        raise ctx.parse("group must be exactly one of cyclic / symmetric / product / table")
    try:
        if "cyclic" in spec:
            return cyclic_group(int(spec["cyclic"]))
        if "symmetric" in spec:
            return symmetric_group(int(spec["symmetric"]))
        if "product" in spec:
            parts = spec["product"]
            if not isinstance(parts, list) or len(parts) != 2:
                raise ctx.at("product").parse("product takes two group descriptions")
            return direct_product(_group(parts[0], ctx.at("product[0]")), _group(parts[1], ctx.at("product[1]")))
        if "table" in spec:
            return validate_group(spec["table"], spec.get("names"))
    except GroupError as exc:
        raise ctx.invalid(f"{type(exc).__name__}: {exc}") from exc
    except (TypeError, ValueError) as exc:
        raise ctx.parse(str(exc)) from exc
    raise ctx.parse("group must be one of cyclic / symmetric / product / table")


def _element(G: FiniteGroup, ref, ctx) -> int:
    if isinstance(ref, int) and not isinstance(ref, bool):
        if 0 <= ref < G.order:
            return ref
        raise ctx.invalid(f"group element index {ref} out of range")
    if isinstance(ref, str) and G.names and ref in G.names:
        return G.names.index(ref)
    if isinstance(ref, str) and not G.names and ref.isdigit() and int(ref) < G.order:
        return int(ref)
    raise ctx.invalid(f"unknown group element {ref!r}")


def _quiver(F, spec, ctx) -> PathAlgebra:
    verts = _need(spec, "vertices", list, ctx)
    arrows = _need(spec, "arrows", list, ctx)
    rels = spec.get("relations", [])
    try:
        arr = []
        for k, a in enumerate(arrows):
            if not (isinstance(a, list) and len(a) == 3):
                raise ctx.at(f"arrows[{k}]").parse("arrow must be [name, source, target]")
            arr.append(tuple(a))
        Q = BoundQuiver.from_names(F, [str(v) for v in verts], arr, list(rels))
        return path_algebra(Q)
    except QuiverError as exc:
        raise ctx.invalid(f"{type(exc).__name__}: {exc}") from exc


def _algebra(F, spec, ctx) -> FDAlgebra:
    d = _need(spec, "dim", int, ctx)
    one = [_read_scalar(F, x, ctx.at("one")) for x in _need(spec, "one", list, ctx)]
    quads = _need(spec, "structure_constants", list, ctx)
    mult = []
    for n, q in enumerate(quads):
        if not (isinstance(q, list) and len(q) == 4 and all(isinstance(i, int) for i in q[:3])):
            raise ctx.at(f"structure_constants[{n}]").parse("entry must be [i, j, k, coeff]")
        mult.append((q[0], q[1], q[2], _read_scalar(F, q[3], ctx)))
    idem = spec.get("idempotents")
    try:
        return FDAlgebra.from_structure_constants(
            F, d, mult, one, idempotents=None if idem is None else [[_read_scalar(F, x, ctx) for x in e] for e in idem]
        )
    except (AlgebraError, IndexError, ValueError) as exc:
        raise ctx.invalid(f"{type(exc).__name__}: {exc}") from exc


def _matrix(F, rows, shape, ctx) -> np.ndarray:
    if not isinstance(rows, list) or len(rows) != shape[0] or any(not isinstance(r, list) or len(r) != shape[1] for r in rows):
        raise ctx.parse(f"expected a {shape[0]} x {shape[1]} matrix")
    return F.asarray([[_read_scalar(F, x, ctx) for x in r] for r in rows])


def _sigma(F, A, P, G, spec, ctx) -> np.ndarray:
    if spec is None:
        return np.stack([F.eye(A.dim)] * G.order)
    gens = _need(spec, "generators", dict, ctx)
    images = {}
    for name, g in gens.items():
        c = ctx.at(f"generators.{name}")
        x = _element(G, name, c)
        if isinstance(g, dict) and "matrix" in g:
            images[x] = _matrix(F, g["matrix"], (A.dim, A.dim), c.at("matrix"))
        elif isinstance(g, dict) and ("vertices" in g or "arrows" in g):
            if P is None:
                raise c.invalid("quiver symmetries need a quiver algebra")
            try:
                s = QuiverSymmetry.from_names(P.quiver, g.get("vertices", {}), g.get("arrows", {}))
                images[x] = symmetry_to_automorphism(P, s)
            except QuiverError as exc:
                raise c.invalid(f"{type(exc).__name__}: {exc}") from exc
        else:
            raise c.parse("generator image must be {'matrix': ...} or {'vertices': ..., 'arrows': ...}")
    try:
        return extend_action(A, G, images)
    except CrossedError as exc:
        raise ctx.invalid(f"{type(exc).__name__}: {exc}") from exc


def _alpha(F, A, G, spec, ctx) -> np.ndarray:
    n = G.order
    alpha = np.stack([np.stack([A.one.copy() for _ in range(n)]) for _ in range(n)])
    if spec is None:
        return alpha
    vals = spec.get("values", [])
    if not isinstance(vals, list):
        raise ctx.at("values").parse("values must be a list")
    for k, item in enumerate(vals):
        c = ctx.at(f"values[{k}]")
        if not isinstance(item, dict) or not {"x", "y", "value"} <= set(item):
            raise c.parse("entry must have x, y and value")
        x, y = _element(G, item["x"], c), _element(G, item["y"], c)
        v = item["value"]
        if not isinstance(v, list) or len(v) != A.dim:
            raise c.parse(f"value must be a coordinate vector of length {A.dim}")
        alpha[x, y] = F.asarray([_read_scalar(F, t, c) for t in v])
    return alpha


_MODULE_KINDS = {"simple", "projective", "trivial", "regular", "action"}


def _modules(F, A, G, spec, ctx) -> dict:
    if spec is None:
        return {}
    if not isinstance(spec, dict):
        raise ctx.parse("modules must be an object")
    out = {}
    for name, m in spec.items():
        c = ctx.at(name)
        if not isinstance(m, dict) or m.get("kind") not in _MODULE_KINDS:
            raise c.parse(f"module kind must be one of {sorted(_MODULE_KINDS)}")
        over = m.get("over", "crossed")
        if over not in ("crossed", "base"):
            raise c.parse("'over' must be 'crossed' or 'base'")
        entry = {"kind": m["kind"], "over": over}
        if m["kind"] in ("simple", "projective"):
            if not isinstance(m.get("index"), int):
                raise c.parse("simple and projective modules need an integer index")
            entry["index"] = m["index"]
        if m["kind"] == "trivial" and over != "crossed":
            raise c.invalid("the trivial representation lives over the crossed product")
        if m["kind"] == "action":
            mats = m.get("matrices")
            r = A.dim * (G.order if over == "crossed" else 1)
            if not isinstance(mats, list) or len(mats) != r:
                raise c.parse(f"action needs {r} matrices (one per basis element)")
            dim = len(mats[0]) if mats and isinstance(mats[0], list) else 0
            entry["matrices"] = [[_vec_json(F, row) for row in _matrix(F, M, (dim, dim), c)] for M in mats]
        out[name] = entry
    return out


# -- documents ------------------------------------------------------------------------------------


def load_document(doc: dict, *, source: str = "<document>", text: str | None = None) -> Workspace:
    ctx = _Ctx(source, text)
    if not isinstance(doc, dict):
        raise ctx.parse("workspace must be a JSON object")
    unknown = sorted(set(doc) - set(KEYS))
    if unknown:
        raise ctx.at(unknown[0]).parse("unknown top-level key")
    fmt = doc.get("format", FORMAT)
    if fmt != FORMAT:
        raise ctx.at("format").parse(f"unsupported format {fmt!r}")
    comp = doc.get("composition", "right-to-left")
    if comp != "right-to-left":
        raise ctx.at("composition").invalid("only right-to-left composition is supported")
    F = _field(doc, ctx)
    if ("quiver" in doc) == ("algebra" in doc):
        raise ctx.parse("exactly one of 'quiver' and 'algebra' is required")
    P = None
    if "quiver" in doc:
        P = _quiver(F, doc["quiver"], ctx.at("quiver"))
        A = P.algebra
    else:
        A = _algebra(F, doc["algebra"], ctx.at("algebra"))
    if "group" not in doc:
        raise ctx.parse("missing key 'group'")
    G = _group(doc["group"], ctx.at("group"))
    sigma = _sigma(F, A, P, G, doc.get("sigma"), ctx.at("sigma"))
    alpha = _alpha(F, A, G, doc.get("alpha"), ctx.at("alpha"))
    ps = ParameterSet(A, G, sigma, alpha)
    try:
        validate_parameter_set(ps)
    except CrossedError as exc:
        raise ctx.at("alpha" if "alpha" in doc else "sigma").invalid(f"{type(exc).__name__}: {exc}") from exc
    domain = None
    if "domain" in doc:
        c = ctx.at("domain")
        basis = _need(doc["domain"], "basis", list, c)
        vecs = []
        for v in basis:
            if not isinstance(v, list) or len(v) != A.dim:
                raise c.parse(f"domain vectors must have length {A.dim}")
            vecs.append(F.asarray([_read_scalar(F, t, c) for t in v]))
        domain = Subspace.span(F, A.dim, vecs)
    modules = _modules(F, A, G, doc.get("modules"), ctx.at("modules"))
    ws = Workspace(F, A, G, ps, P, domain, modules, source=source)
    ws.document = workspace_document(ws, group_spec=doc["group"], sigma_spec=doc.get("sigma"))
    return ws


def _merge(docs: list[tuple[str, dict, str]]) -> tuple[dict, str, str]:
    merged: dict = {}
    origin: dict = {}
    for src, doc, text in docs:
        if not isinstance(doc, dict):
            raise ParseError("workspace file must contain a JSON object", source=src)
        for k, v in doc.items():
            if k in merged and merged[k] != v:
                if k == "field":
                    raise ValidationError(
                        f"characteristic mismatch between {origin[k]} and {src}", source=src, where="field"
                    )
                raise ValidationError(f"key {k!r} defined differently in {origin[k]}", source=src, where=k)
            merged[k] = v
            origin[k] = src
    src = docs[0][0] if len(docs) == 1 else ",".join(d[0] for d in docs)
    text = docs[0][2] if len(docs) == 1 else None
    return merged, src, text


def parse_inputs(paths) -> Workspace:
    """Read and merge one or more workspace files, then validate everything."""
    if isinstance(paths, (str, Path)):
        paths = [paths]
    docs = []
    for p in paths:
        p = Path(p)
        try:
            text = p.read_text(encoding="utf-8")
        except OSError as exc:
            raise ParseError(str(exc.strerror or exc), source=str(p)) from exc
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(exc.msg, source=str(p), line=exc.lineno) from exc
        docs.append((str(p), doc, text))
    merged, src, text = _merge(docs)
    return load_document(merged, source=src, text=text)


# -- serialization --------------------------------------------------------------------------------


def relation_text(Q: BoundQuiver, rel: dict) -> str:
    F = Q.field
    parts = []
    for path, c in sorted(rel.items()):
        c = Fraction(F.scalar(c)) if not F.p else int(c)
        sign = "-" if c < 0 else "+"
        c = abs(c)
        body = Q.path_name(path) if c == 1 else f"{c}*{Q.path_name(path)}"
        parts.append((sign, body))
    if not parts:
        return ""
    text = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        text += f" {sign} {body}"
    return text


def _group_json(G: FiniteGroup) -> dict:
    out = {"table": G.table.tolist()}
    if G.names:
        out["names"] = list(G.names)
    return out


def workspace_document(ws: Workspace, *, group_spec=None, sigma_spec=None) -> dict:
    """Canonical document for ``ws`` (stable key order; alpha lists only entries != 1)."""
    F, A, G, ps = ws.field, ws.algebra, ws.group, ws.ps
    doc: dict = {"format": FORMAT, "composition": "right-to-left", "field": {"characteristic": F.p}}
    if ws.path is not None:
        Q = ws.path.quiver
        doc["quiver"] = {
            "vertices": list(Q.vertices),
            "arrows": [[n, Q.vertices[s], Q.vertices[t]] for n, s, t in Q.arrows],
            "relations": [relation_text(Q, r) for r in Q.relations if r],
        }
    else:
        quads = [[int(i), int(j), int(k), _scalar_json(F, A.table[i, j, k])] for i, j, k in zip(*np.nonzero(A.table))]
        doc["algebra"] = {"dim": A.dim, "one": _vec_json(F, A.one), "structure_constants": quads}
        if A._idempotent_hint is not None:
            doc["algebra"]["idempotents"] = [_vec_json(F, e) for e in A._idempotent_hint]
    doc["group"] = _canonical_group(group_spec) if group_spec is not None else _group_json(G)
    gens = _generators(G)
    sig = {}
    for x in gens:
        key = G.name(x) if G.names else x
        spec = None
        if isinstance(sigma_spec, dict):
            raw = sigma_spec.get("generators", {})
            spec = raw.get(G.name(x)) if G.names else None
            if spec is None:
                spec = raw.get(str(x))
        if isinstance(spec, dict) and ("vertices" in spec or "arrows" in spec) and ws.path is not None:
            sig[str(key)] = {"vertices": dict(sorted(spec.get("vertices", {}).items())), "arrows": dict(sorted(spec.get("arrows", {}).items()))}
        else:
            sig[str(key)] = {"matrix": [_vec_json(F, row) for row in ps.sigma[x]]}
    doc["sigma"] = {"generators": sig}
    vals = []
    for x in range(G.order):
        for y in range(G.order):
            if not np.array_equal(ps.alpha[x, y], A.one):
                vals.append({"x": G.name(x) if G.names else x, "y": G.name(y) if G.names else y, "value": _vec_json(F, ps.alpha[x, y])})
    doc["alpha"] = {"values": vals}
    if ws.domain is not None:
        doc["domain"] = {"basis": [_vec_json(F, r) for r in ws.domain.rows]}
    if ws.modules:
        doc["modules"] = {k: ws.modules[k] for k in sorted(ws.modules)}
    return doc


def _canonical_group(spec):
    if "cyclic" in spec:
        return {"cyclic": int(spec["cyclic"])}
    if "symmetric" in spec:
        return {"symmetric": int(spec["symmetric"])}
    if "product" in spec:
        return {"product": [_canonical_group(s) for s in spec["product"]]}
    out = {"table": [list(map(int, r)) for r in spec["table"]]}
    if spec.get("names"):
        out["names"] = list(spec["names"])
    return out


def _generators(G: FiniteGroup) -> list[int]:
    """Greedy generating set: least element not yet generated, repeatedly."""
    gens: list[int] = []
    H = G.trivial()
    for x in range(G.order):
        if H.order == G.order:
            break
        if x not in H:
            gens.append(x)
            H = G.generated(gens)
    return gens


_FLAT_LIST = re.compile(r"\[\s*([^\[\]{}]*?)\s*\]", re.S)


def dump_document(doc: dict) -> str:
    """Indented JSON with innermost lists kept on one line."""
    text = json.dumps(doc, indent=2, ensure_ascii=False)
    text = _FLAT_LIST.sub(lambda m: "[" + re.sub(r",\s+", ", ", m.group(1)) + "]", text)
    return text + "\n"


def fixture_workspace(fx, modules: dict | None = None) -> Workspace:
    """Workspace for a :class:`~crossalg.fixtures.Fixture` (canonical document attached)."""
    ws = Workspace(fx.ps.field, fx.algebra, fx.group, fx.ps, fx.path, fx.domain, dict(modules or {}), source=fx.name)
    sigma_spec = {"generators": fx.sigma_spec} if fx.sigma_spec else None
    ws.document = workspace_document(ws, group_spec=fx.group_spec, sigma_spec=sigma_spec)
    return ws
