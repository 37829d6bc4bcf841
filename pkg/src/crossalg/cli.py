"""Command line front end: ``crossalg COMMAND WORKSPACE.json [...]``.

Exit status: 0 when every asserted check passes, 2 when one fails,
1 on input errors (unreadable, malformed or invalid workspaces).
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

import numpy as np

from .algebra import AlgebraError, FieldNotSupported, NotSplit, split_structure
from .crossed import (
    AlphaNotScalar,
    CrossedError,
    NotClosed,
    action_on_idempotents,
    build_crossed_product,
    canonical_separability_element,
    center_trace_criterion,
    check_separability_element,
    cocycle_identities_check,
    faithful_action_check,
    find_separability_element,
    free_action_check,
    normalize_convention,
    normalize_to_skew,
    restrict_to_subgroup,
    tensor_space,
    trivial_is_projective,
    trivial_representation,
    validate_parameter_set,
)
from .group import Subgroup, sylow_subgroup
from .homology import FDModule, ModuleError, _projective_data, ext1_dim, gldim, pd, regular_module, simple_module, theorem_spotcheck
from .workspace import WorkspaceError, dump_document, parse_inputs

__all__ = ["main", "build_parser", "report", "EXIT_OK", "EXIT_INPUT", "EXIT_ASSERTION"]

EXIT_OK, EXIT_INPUT, EXIT_ASSERTION = 0, 1, 2


# -- rendering -----------------------------------------------------------------------------------


def _json_scalar(F, x):
    if F.p:
        return int(x)
    x = Fraction(x)
    return int(x) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _vec(F, v):
    return None if v is None else [_json_scalar(F, x) for x in np.asarray(v).reshape(-1)]


def _render_text(doc, indent: int = 0) -> list[str]:
    pad = "  " * indent
    lines = []
    for k, v in doc.items():
        if isinstance(v, dict):
            lines.append(f"{pad}{k}:")
            lines.extend(_render_text(v, indent + 1))
        elif isinstance(v, list) and v and all(isinstance(t, dict) for t in v):
            lines.append(f"{pad}{k}:")
            for item in v:
                lines.append(f"{pad}  -")
                lines.extend(_render_text(item, indent + 2))
        else:
            lines.append(f"{pad}{k}: {json.dumps(v)}")
    return lines


def render(doc: dict, as_json: bool) -> str:
    if as_json:
        return json.dumps(doc, indent=2) + "\n"
    return "\n".join(_render_text(doc)) + "\n"


class _Checks:
    """Collects asserted checks; any failure turns the exit status into 2."""

    def __init__(self):
        self.items: list[dict] = []

    def add(self, name: str, ok: bool, detail=None):
        entry = {"check": name, "pass": bool(ok)}
        if detail is not None:
            entry["detail"] = detail
        self.items.append(entry)

    @property
    def status(self) -> int:
        return EXIT_OK if all(c["pass"] for c in self.items) else EXIT_ASSERTION


# -- shared pieces -------------------------------------------------------------------------------


class _Session:
    """Lazily built objects for one workspace."""

    def __init__(self, ws, seed: int, cutoff: int):
        self.ws, self.seed, self.cutoff = ws, seed, cutoff
        self.F = ws.field
        self._cp = None
        self._gl = {}

    @property
    def cp(self):
        if self._cp is None:
            self._cp = build_crossed_product(self.ws.ps)
        return self._cp

    def name(self, x: int) -> str:
        return self.ws.group.name(x)

    def sylow(self) -> Subgroup:
        G = self.ws.group
        return sylow_subgroup(G, self.F.p) if self.F.p else G.trivial()

    def subgroup(self, spec: str | None) -> Subgroup:
        G = self.ws.group
        if spec in (None, "sylow"):
            return self.sylow()
        if spec.startswith("sylow:"):
            return sylow_subgroup(G, int(spec.split(":", 1)[1]))
        if spec == "trivial":
            return G.trivial()
        if spec == "whole":
            return G.whole()
        refs = [t.strip() for t in spec.split(",") if t.strip()]
        els = []
        for r in refs:
            if G.names and r in G.names:
                els.append(G.names.index(r))
            elif r.isdigit() and int(r) < G.order:
                els.append(int(r))
            else:
                raise WorkspaceError(f"unknown group element {r!r} in subgroup spec", source=self.ws.source, where="--subgroup")
        H = G.generated(els)
        if H.order != len(set(els) | {G.identity}):
            raise WorkspaceError("subgroup spec is not closed; list every element", source=self.ws.source, where="--subgroup")
        return H

    def gldim(self, key: str):
        if key not in self._gl:
            if key == "base":
                A = self.ws.algebra
            elif key == "crossed":
                A = self.cp.algebra
            else:
                A = restrict_to_subgroup(self.cp, self.sylow()).algebra
            self._gl[key] = gldim(A, self.cutoff, seed=self.seed)
        return self._gl[key]

    def module(self, name: str) -> FDModule:
        spec = self.ws.modules.get(name)
        if spec is None:
            raise WorkspaceError(f"unknown module {name!r}; known: {sorted(self.ws.modules)}", source=self.ws.source, where="modules")
        A = self.cp.algebra if spec["over"] == "crossed" else self.ws.algebra
        kind = spec["kind"]
        try:
            if kind == "simple":
                return simple_module(A, spec["index"])
            if kind == "projective":
                return _projective_data(A)[spec["index"]][2]
            if kind == "trivial":
                return trivial_representation(self.cp).module
            if kind == "regular":
                return regular_module(A)
            return FDModule(A, self.F.asarray(spec["matrices"]))
        except (IndexError, ModuleError, ValueError) as exc:
            raise WorkspaceError(f"module {name!r}: {exc}", source=self.ws.source, where=f"modules.{name}") from exc


# -- sections ------------------------------------------------------------------------------------


def section_parameter_set(s: _Session) -> dict:
    cert = validate_parameter_set(s.ws.ps)
    return {
        "valid": True,
        "group_order": cert.group_order,
        "automorphisms_checked": cert.automorphisms_checked,
        "unit_pairs_checked": cert.unit_pairs_checked,
        "condition1_pairs": cert.condition1_pairs,
        "condition2_triples": cert.condition2_triples,
        "normalized": cert.normalized,
        "skew": s.ws.ps.is_skew(),
    }


def section_dimensions(s: _Session) -> dict:
    return {"dim_A": s.ws.algebra.dim, "order_G": s.ws.group.order, "dim_crossed_product": s.cp.dim}


def section_sylow(s: _Session) -> dict:
    S = s.sylow()
    return {
        "prime": s.F.p,
        "elements": [s.name(x) for x in S.elements],
        "order": S.order,
        "index": s.ws.group.order // S.order,
    }


def section_action(s: _Session) -> dict:
    ws = s.ws
    S = s.sylow()
    sp = split_structure(ws.algebra, seed=s.seed)
    E = sp.idempotents
    out = {"idempotents": [_vec(s.F, e) for e in E], "idempotents_from_hint": not sp.computed}
    try:
        perm = action_on_idempotents(ws.ps.sigma, S.elements, E, s.F)
    except NotClosed as exc:
        out["closed"] = False
        x, i = exc.witness
        out["witness"] = {"element": s.name(x), "idempotent": i}
        return out
    out["closed"] = True
    out["permutation"] = {s.name(x): perm[x] for x in S.elements}
    fr = free_action_check(perm, ws.group.identity)
    out["free"] = fr.free
    out["fixed_pairs"] = [[s.name(x), i] for x, i in fr.fixed_pairs]
    fa = faithful_action_check(ws.ps.sigma, S.elements, ws.group.identity, s.F)
    out["faithful"] = fa.faithful
    out["acting_trivially"] = [s.name(x) for x in fa.kernel]
    return out


def section_trivial(s: _Session, checks: _Checks) -> dict:
    tr = trivial_representation(s.cp)
    r = pd(tr.module, s.cutoff, seed=s.seed)
    out = {"dim": tr.module.dim, "ideal_dim": tr.ideal.dim, "closure_verified": tr.closure_verified, "pd": str(r.status)}
    if s.ws.ps.is_skew():
        cert = trivial_is_projective(s.cp)
        out["trace_projective"] = cert.projective
        out["trace_element"] = _vec(s.F, cert.element)
        if r.status.determined:
            checks.add("trace criterion agrees with the projective dimension of the trivial module", cert.projective == (r.status.is_finite and r.status.value == 0))
    else:
        out["trace_projective"] = None
    return out


def _same_dim(a, b) -> bool:
    return a.kind == b.kind and (a.value == b.value if a.is_finite else True)


def section_gldim(s: _Session, checks: _Checks, action: dict | None = None, trivial: dict | None = None) -> dict:
    ga, gs, gc = s.gldim("base").status, s.gldim("sylow").status, s.gldim("crossed").status
    cp = s.cp.algebra
    n = len(split_structure(cp).classes)
    loops = [[i, ext1_dim(cp, i, i)] for i in range(n)]
    out = {
        "A": str(ga),
        "crossed_product_sylow": str(gs),
        "crossed_product": str(gc),
        "ext1_self": [x for x in loops if x[1] > 0],
    }
    if gc.is_finite:
        checks.add("finite gldim of the crossed product equals gldim A", ga.is_finite and ga.value == gc.value, {"A": str(ga), "crossed": str(gc)})
    if ga.is_infinite and gc.determined:
        checks.add("infinite gldim A forces infinite gldim of the crossed product", gc.is_infinite)
    if gs.determined and gc.determined:
        checks.add("gldim agrees between the whole group and the Sylow subgroup", _same_dim(gs, gc), {"sylow": str(gs), "whole": str(gc)})
    if action is not None and action.get("closed") and gs.determined:
        if not action["free"]:
            checks.add("a non-free action on the idempotents forces infinite gldim over the Sylow subgroup", gs.is_infinite)
    if trivial is not None and trivial.get("trace_projective") is not None and ga.determined and gc.determined:
        expect = ga.is_finite and trivial["trace_projective"]
        checks.add("skew ring: finite gldim iff gldim A finite and trivial module projective", gc.is_finite == expect)
    return out


def section_identities(s: _Session, checks: _Checks) -> dict:
    rep = cocycle_identities_check(normalize_convention(s.ws.ps))
    checks.add("cocycle identities hold on every pair", rep.ok, {k: v for k, v in rep.failures.items() if v} or None)
    return {
        "pairs": rep.pairs,
        "failures": rep.failures,
        "witnesses": {k: [s.name(v[0]), s.name(v[1])] for k, v in rep.witnesses.items() if v is not None},
        "central_checked": rep.central_checked,
        "normalized_first": not s.ws.ps.is_normalized(),
    }


def section_normalization(s: _Session, checks: _Checks, subgroup: str | None = None) -> dict:
    S = s.subgroup(subgroup)
    if not s.F.p:
        return {"applicable": False, "reason": "characteristic 0"}
    if S.order == 1:
        return {"applicable": False, "reason": "trivial subgroup"}
    try:
        data = normalize_to_skew(s.ws.ps, S, s.ws.domain)
    except AlphaNotScalar as exc:
        return {"applicable": False, "reason": f"alpha leaves the domain at {[s.name(t) for t in exc.args[:2]] if len(exc.args) >= 2 else exc}"}
    except CrossedError as exc:
        return {"applicable": False, "reason": str(exc)}
    checks.add("normalized cocycle is identically 1", data.result.is_skew())
    checks.add("|S|-th roots verified", data.roots_verified)
    checks.add("roots fixed by the action", data.fixed_verified)
    out = {
        "applicable": True,
        "subgroup": [s.name(x) for x in data.elements],
        "domain_order": data.domain_order,
        "h": {s.name(data.elements[k]): _vec(s.F, v) for k, v in sorted(data.h.items())},
        "u": {s.name(data.elements[k]): _vec(s.F, v) for k, v in sorted(data.u.items())},
        "roots_verified": data.roots_verified,
        "fixed_verified": data.fixed_verified,
        "h_identity_verified": data.h_identity_verified,
        "result_skew": data.result.is_skew(),
    }
    return out


def section_separability(s: _Session, checks: _Checks, subgroup: str | None) -> dict:
    G = s.ws.group
    H = s.subgroup(subgroup)
    index = G.order // H.order
    invertible = (not s.F.p) or index % s.F.p != 0
    out = {"subgroup": [s.name(x) for x in H.elements], "index": index, "index_invertible": invertible}
    ps = normalize_convention(s.ws.ps)
    cp = build_crossed_product(ps) if ps is not s.ws.ps else s.cp
    sub = restrict_to_subgroup(cp, H)
    if invertible:
        z1 = canonical_separability_element(cp, sub, representatives="least")
        z2 = canonical_separability_element(cp, sub, representatives="greatest")
        ok1, w1 = check_separability_element(z1.space, z1.matrix)
        ok2, _ = check_separability_element(z2.space, z2.matrix)
        same = bool(np.array_equal(z1.coordinates, z2.coordinates))
        out["canonical_element"] = {"passes": ok1, "witness": None if w1 is None else list(w1), "representative_independent": same}
        checks.add("canonical separability element passes both conditions", ok1 and ok2, None if w1 is None else list(w1))
        checks.add("canonical separability element is representative independent", same)
    found = find_separability_element(tensor_space(cp.algebra, sub.inclusion, sub.algebra.generators()))
    out["exact_decision"] = found is not None
    if invertible:
        checks.add("exact linear solve finds a separability element", found is not None)
    if H.order == 1 and s.ws.ps.is_skew():
        ct = center_trace_criterion(s.ws.algebra, s.ws.ps.sigma, range(G.order))
        out["center_trace"] = {"separable": ct.separable, "element": _vec(s.F, ct.element), "image_dim": ct.center_trace_image.dim}
        checks.add("center trace criterion agrees with the exact decision", ct.separable == (found is not None))
    return out


def _guarded(fn, *args) -> dict:
    """Sections needing primitive idempotents are skipped over non-split algebras."""
    try:
        return fn(*args)
    except (NotSplit, FieldNotSupported) as exc:
        return {"skipped": f"{type(exc).__name__}: {exc}"}


def report(ws, cutoff: int = 20, seed: int = 0) -> tuple[dict, int]:
    """The full diagnostic document and its exit status."""
    s = _Session(ws, seed, cutoff)
    checks = _Checks()
    doc: dict = {}
    doc["parameter_set"] = section_parameter_set(s)
    doc["dimensions"] = section_dimensions(s)
    doc["sylow"] = section_sylow(s)
    doc["action"] = _guarded(section_action, s)
    doc["trivial_representation"] = _guarded(section_trivial, s, checks)
    doc["global_dimension"] = _guarded(section_gldim, s, checks, doc["action"], doc["trivial_representation"])
    doc["identities"] = section_identities(s, checks)
    doc["normalization"] = section_normalization(s, checks)
    doc["separability"] = {
        "over_A": section_separability(s, checks, "trivial"),
        "over_sylow": section_separability(s, checks, "sylow"),
    }
    if "skipped" not in doc["action"] and "skipped" not in doc["global_dimension"]:
        _free_criterion(s, doc, checks)
    doc["checks"] = checks.items
    doc["status"] = "pass" if checks.status == EXIT_OK else "fail"
    return doc, checks.status


def _free_criterion(s: _Session, doc: dict, checks: _Checks):
    act, norm = doc["action"], doc["normalization"]
    gl = [s.gldim(k).status for k in ("base", "crossed")]
    applicable = act.get("closed") and (s.ws.ps.is_skew() or norm.get("applicable")) and all(g.determined for g in gl)
    if applicable:
        expect = gl[0].is_finite and act["free"]
        checks.add("finite gldim iff gldim A finite and free action on idempotents", gl[1].is_finite == expect)
        if act["free"] and gl[0].is_finite:
            checks.add("free action: equal global dimensions", gl[1].is_finite and gl[1].value == gl[0].value)


# -- commands ------------------------------------------------------------------------------------


def cmd_validate(s, args):
    return {"parameter_set": section_parameter_set(s), "dimensions": section_dimensions(s)}, EXIT_OK


def cmd_build(s, args):
    A = s.cp.algebra
    F = s.F
    quads = [[int(i), int(j), int(k), _json_scalar(F, A.table[i, j, k])] for i, j, k in zip(*np.nonzero(A.table))]
    d = s.ws.algebra.dim
    labels = [f"b{i}*sigma[{s.name(x)}]" for x in range(s.ws.group.order) for i in range(d)]
    return {"dim": A.dim, "basis": labels, "one": _vec(F, A.one), "structure_constants": quads}, EXIT_OK


def cmd_gldim(s, args):
    checks = _Checks()
    out = {"global_dimension": section_gldim(s, checks)}
    out["checks"] = checks.items
    return out, checks.status


def cmd_pd(s, args):
    M = s.module(args.module)
    r = pd(M, s.cutoff, seed=s.seed)
    out = {"module": args.module, "dim": M.dim, "pd": str(r.status), "terms": [list(t) for t in r.terms], "syzygy_dims": r.syzygy_dims}
    checks = _Checks()
    if M.algebra is s.cp.algebra:
        sc = theorem_spotcheck(M, s.ws.algebra, s.cp.base_embedding(), s.cutoff, seed=s.seed)
        out["pd_restricted_to_A"] = str(sc.pd_small)
        if sc.equal_when_finite is not None:
            checks.add("finite projective dimension survives restriction", sc.equal_when_finite)
        if sc.monotone is not None:
            checks.add("restriction does not increase projective dimension", sc.monotone)
    out["checks"] = checks.items
    return out, checks.status


def cmd_trace(s, args):
    checks = _Checks()
    out = {"trivial_representation": section_trivial(s, checks), "checks": checks.items}
    return out, checks.status


def cmd_separability(s, args):
    checks = _Checks()
    out = {"separability": section_separability(s, checks, args.subgroup), "checks": checks.items}
    return out, checks.status


def cmd_normalize(s, args):
    checks = _Checks()
    out = {"normalization": section_normalization(s, checks, args.subgroup), "checks": checks.items}
    return out, checks.status


def cmd_identities(s, args):
    checks = _Checks()
    out = {"identities": section_identities(s, checks), "checks": checks.items}
    return out, checks.status


def cmd_report(s, args):
    return report(s.ws, s.cutoff, s.seed)


def cmd_canonical(s, args):
    return None, EXIT_OK


COMMANDS = {
    "validate": (cmd_validate, "validate the algebra, group and parameter set"),
    "build": (cmd_build, "emit the crossed product's structure constants"),
    "gldim": (cmd_gldim, "global dimensions of A and the crossed products"),
    "pd": (cmd_pd, "projective dimension of a named module"),
    "trace-check": (cmd_trace, "projectivity of the trivial representation"),
    "separability": (cmd_separability, "separability over a subgroup crossed product"),
    "normalize": (cmd_normalize, "normalize a scalar cocycle on a p-subgroup"),
    "identities": (cmd_identities, "scan the cocycle identities"),
    "report": (cmd_report, "full diagnostic report"),
    "canonical": (cmd_canonical, "print the canonical workspace document"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("workspace", nargs="+", help="workspace JSON file(s); top-level keys are merged")
    common.add_argument("--cutoff", type=int, default=20, help="resolution length cutoff (default 20)")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized isomorphism trials")
    common.add_argument("--json", action="store_true", help="machine-readable output")
    parser = argparse.ArgumentParser(prog="crossalg", description="Crossed products of finite-dimensional algebras.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, parents=[common], help=help_text)
        if name == "pd":
            p.add_argument("--module", required=True, help="module name from the workspace")
        if name in ("separability", "normalize"):
            p.add_argument("--subgroup", default="sylow" if name == "normalize" else "trivial", help="trivial | whole | sylow | sylow:p | comma-separated elements")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        ws = parse_inputs(args.workspace)
        if args.command == "canonical":
            sys.stdout.write(dump_document(ws.document))
            return EXIT_OK
        s = _Session(ws, args.seed, args.cutoff)
        out, status = COMMANDS[args.command][0](s, args)
    except WorkspaceError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT
    except (AlgebraError, CrossedError, ModuleError) as exc:
        sys.stderr.write(f"error: {type(exc).__name__}: {exc}\n")
        return EXIT_INPUT
    sys.stdout.write(render(out, args.json))
    return status


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
