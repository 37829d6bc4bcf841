"""Acceptance criteria, one test each.

Every test prints a single ``[PASS]``/``[FAIL]`` line (outside output
capture) and then asserts.  Time budgets are wall-clock seconds measured
around the computation only.
"""

import subprocess
import sys
import time
from pathlib import Path

import numpy as np

from crossalg.algebra import (
    associativity_witness,
    characterize_local_commutative,
    corner_algebra,
    NotSplit,
    gabriel_quiver,
    radical,
    split_structure,
    subalgebra,
    subspace_power,
    try_inverse,
)
from crossalg.complexes import (
    chain_split_check_pi_delta,
    chain_split_check_psi_phi,
    induce_complex,
    is_minimal,
    metrics,
    minimalize,
    random_complex,
    resolution_complex,
)
from crossalg.crossed import (
    CrossedError,
    action_on_idempotents,
    basis_change_matrix,
    build_crossed_product,
    canonical_separability_element,
    center_trace_criterion,
    check_separability_element,
    cocycle_identities_check,
    fixed_algebra_free_module_check,
    fixed_subalgebra,
    free_action_check,
    matrix_algebra_certificate,
    normalize_convention,
    normalize_to_skew,
    orbit_idempotent_isomorphism,
    restrict_to_subgroup,
    structure_constants_match,
    trace_map,
    trivial_is_projective,
    trivial_representation,
    validate_parameter_set,
)
from crossalg.fixtures import FIXTURES, corrupt_alpha, get_fixture, random_cyclic_module, random_parameter_set
from crossalg.group import sylow_subgroup
from crossalg.homology import ext1_dim, gldim, pd, pi_delta_check, psi_phi_check, regular_module, simple_module, simple_modules, theorem_spotcheck

ROOT = Path(__file__).resolve().parents[1]
WORKSPACES = sorted((ROOT / "workspaces").glob("*.json"))

TIME_EXAMPLE = 2.0  # seconds, each worked example
TIME_COCYCLE = 10.0  # seconds, the random cocycle suite


def verdict(capsys, n: int, title: str, ok: bool, detail: str = ""):
    with capsys.disabled():
        print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {n}: {title}" + (f" ({detail})" if detail else ""))
    assert ok, detail


def _sylow(G, F):
    return sylow_subgroup(G, F.p) if F.p else G.trivial()


# -- 1: the two-cycle example ---------------------------------------------------------------


def test_criterion_01_two_cycle(capsys):
    t0 = time.perf_counter()
    fx = get_fixture("two_cycle")
    A = fx.algebra
    ex, ey = fx.path.vertex_idempotents
    cp = build_crossed_product(fx.ps)
    facts = {}
    facts["dims"] = (A.dim, cp.dim) == (4, 8)

    cert = trivial_is_projective(cp)
    facts["trace"] = cert.projective and np.array_equal(trace_map(A, fx.ps.sigma, [0, 1], ex), A.one)
    facts["trace_element_solves"] = np.array_equal(trace_map(A, fx.ps.sigma, [0, 1], cert.element), A.one)
    facts["trivial_pd0"] = str(pd(trivial_representation(cp).module).status) == "Finite(0)"

    # vertex x is class 0 of the split structure
    assert np.array_equal(split_structure(A).idempotents[0], ex)
    rx = pd(simple_module(A, 0))
    facts["syzygy_cycle"] = rx.status.is_infinite and rx.status.cycle == (0, 2)
    facts["gldim_A"] = gldim(A).status.is_infinite
    facts["gldim_cp"] = gldim(cp.algebra).status.is_infinite

    target = (2, True, True, (1, 1))
    corner = corner_algebra(cp.algebra, cp.element(ex, 0)).algebra
    prof = characterize_local_commutative(corner)
    facts["corner_profile"] = (prof.dim, prof.commutative, prof.local, prof.radical_layers) == target
    fixed = subalgebra(A, fixed_subalgebra(A, fx.ps.sigma, [0, 1])).algebra
    prof = characterize_local_commutative(fixed)
    facts["fixed_profile"] = (prof.dim, prof.commutative, prof.local, prof.radical_layers) == target

    ct = center_trace_criterion(A, fx.ps.sigma, [0, 1])
    facts["not_separable"] = (not ct.separable) and ct.center_trace_image.dim == 0
    elapsed = time.perf_counter() - t0
    facts["time"] = elapsed < TIME_EXAMPLE
    bad = [k for k, v in facts.items() if not v]
    verdict(capsys, 1, "two-cycle example", not bad, f"{elapsed:.2f}s" + (f", failed: {bad}" if bad else ""))


# -- 2: the cospan example --------------------------------------------------------------------


def test_criterion_02_cospan(capsys):
    t0 = time.perf_counter()
    fx = get_fixture("cospan")
    A = fx.algebra
    F = A.field
    e1, e2, e3 = fx.path.vertex_idempotents
    facts = {"dim_A": A.dim == 5}
    facts["gldim_A"] = str(gldim(A).status) == "Finite(1)"

    perm = action_on_idempotents(fx.ps.sigma, [0, 1], fx.path.vertex_idempotents, F)
    fr = free_action_check(perm, 0)
    facts["closed_not_free"] = (not fr.free) and fr.fixed_pairs == [(1, 1)]

    cp = build_crossed_product(fx.ps)
    B = cp.algebra
    facts["gldim_cp"] = gldim(B).status.is_infinite
    n = len(split_structure(B).classes)
    hits = [c for c in range(n) if simple_module(B, c).act(cp.element(e2, 0)).any()]
    facts["ext1_loop"] = len(hits) == 1 and ext1_dim(B, hits[0], hits[0]) >= 1

    eps = cp.element(F.reduce(e1 + e2), 0)
    C = corner_algebra(B, eps).algebra
    facts["corner_dim"] = C.dim == 5
    Q = gabriel_quiver(C)
    loops = [i for i in range(Q.shape[0]) if Q[i, i]]
    facts["one_loop"] = len(loops) == 1 and Q[loops[0], loops[0]] == 1
    if loops:
        e = split_structure(C).idempotents[loops[0]]
        J = radical(C)
        eJe = J.image(F.matmul(C.left_matrix(e), C.right_matrix(e)))
        J2 = subspace_power(C, J, J)
        deltas = [eJe.basis[:, k] for k in range(eJe.dim) if not J2.contains(eJe.basis[:, k])]
        facts["delta_squared_zero"] = bool(deltas) and all(not C.mul(d, d).any() for d in deltas)
    elapsed = time.perf_counter() - t0
    facts["time"] = elapsed < TIME_EXAMPLE
    bad = [k for k, v in facts.items() if not v]
    verdict(capsys, 2, "cospan example", not bad, f"{elapsed:.2f}s" + (f", failed: {bad}" if bad else ""))


# -- 3: cocycle conditions versus associativity --------------------------------------------------


def test_criterion_03_cocycle_associativity(capsys):
    t0 = time.perf_counter()
    rng = np.random.default_rng(2024)
    bases = ["field", "dual", "two_cycle"]
    groups = ["c2", "c3", "c2xc2", "s3"]
    valid = 0
    for k in range(120):
        ps = random_parameter_set(rng, base=bases[k % 3], group=groups[(k // 3) % 4])
        validate_parameter_set(ps)
        cp = build_crossed_product(ps, check=False)
        if associativity_witness(ps.field, cp.algebra.table) is None:
            valid += 1
    detected = 0
    for k in range(30):
        ps = random_parameter_set(rng, base=bases[k % 3], group=groups[(k // 3) % 4])
        bad, _ = corrupt_alpha(ps, rng)
        try:
            validate_parameter_set(bad)
            rejected = False
        except CrossedError:
            rejected = True
        table = build_crossed_product(bad, validate=False, check=False).algebra.table
        if rejected and associativity_witness(ps.field, table) is not None:
            detected += 1
    elapsed = time.perf_counter() - t0
    ok = valid == 120 and detected == 30 and elapsed < TIME_COCYCLE
    verdict(capsys, 3, "cocycle conditions match associativity", ok, f"{valid}/120 associative, {detected}/30 corruptions caught, {elapsed:.2f}s")


# -- 4: cocycle identities ------------------------------------------------------------------------


def test_criterion_04_identities(capsys):
    total = 0
    pairs = 0
    for name in FIXTURES:
        rep = cocycle_identities_check(get_fixture(name).ps)
        total += rep.discrepancies
        pairs += rep.pairs
    verdict(capsys, 4, "cocycle identities on every fixture", total == 0, f"{pairs} pairs, {total} discrepancies")


# -- 5: separability elements ----------------------------------------------------------------------


def test_criterion_05_separability(capsys):
    rng = np.random.default_rng(5)
    facts = {"zeta": 0, "modules": 0, "complexes": 0, "pi_delta": 0}
    failures = []
    for name in FIXTURES:
        fx = get_fixture(name)
        ps = normalize_convention(fx.ps)
        cp = build_crossed_product(ps)
        A = cp.base
        for M in [regular_module(A), random_cyclic_module(A, rng), random_cyclic_module(A, rng, kind="sub")]:
            well, ident = pi_delta_check(M, cp.algebra, cp.base_embedding(), cp.degree_one_projection())
            facts["pi_delta"] += 1
            if not (well and ident):
                failures.append(("pi_delta", name))
        if fx.subgroup is None:
            continue
        sub = restrict_to_subgroup(cp, fx.subgroup)
        least = canonical_separability_element(cp, sub, representatives="least")
        greatest = canonical_separability_element(cp, sub, representatives="greatest")
        ok_l, _ = check_separability_element(least.space, least.matrix)
        ok_g, _ = check_separability_element(greatest.space, greatest.matrix)
        same = np.array_equal(least.coordinates, greatest.coordinates)
        facts["zeta"] += 1
        if not (ok_l and ok_g and same):
            failures.append(("zeta", name))
        R = cp.algebra
        for k in range(3):
            N = random_cyclic_module(R, rng, kind="quotient" if k % 2 else "sub")
            linear, ident = psi_phi_check(N, sub.algebra, sub.inclusion, least.matrix)
            facts["modules"] += 1
            if not (linear and ident):
                failures.append(("psi_phi", name))
        idems = split_structure(R).idempotents
        for k in range(2):
            P = random_complex(R, idems, [2, 2, 1], rng, start=-2)
            rep = chain_split_check_psi_phi(P, sub.algebra, sub.inclusion, least.matrix)
            facts["complexes"] += 1
            if not rep.ok:
                failures.append(("complex", name))
    for name in ("two_cycle", "cospan", "s3_dual_gf2"):
        cp = build_crossed_product(normalize_convention(get_fixture(name).ps))
        A = cp.base
        Q = random_complex(A, split_structure(A).idempotents, [1, 2, 1], rng)
        rep = chain_split_check_pi_delta(Q, cp.algebra, cp.base_embedding(), cp.degree_one_projection())
        facts["pi_delta"] += 1
        if not rep.ok:
            failures.append(("pi_delta_complex", name))
    ok = not failures and facts["modules"] >= 10 and facts["complexes"] >= 5 and facts["zeta"] >= 1
    verdict(capsys, 5, "separability element and split maps", ok, f"{facts}" + (f", failed: {failures}" if failures else ""))


# -- 6: projective dimensions under restriction ------------------------------------------------------


def test_criterion_06_restriction(capsys):
    rng = np.random.default_rng(6)
    checked = equal = 0
    failures = []
    names = ["two_cycle", "cospan", "three_cycle_gf3", "four_cycle", "s3_dual_gf5", "s3_dual_gf2", "s3_field_gf5", "s3_dual_gf3", "three_cycle_gf2"]
    for name in names:
        fx = get_fixture(name)
        cp = build_crossed_product(fx.ps)
        R = cp.algebra
        mods = list(simple_modules(R)) + [trivial_representation(cp).module]
        mods += [random_cyclic_module(R, rng, kind="quotient") for _ in range(2)]
        for M in mods:
            sc = theorem_spotcheck(M, cp.base, cp.base_embedding(), cutoff=12)
            checked += 1
            if sc.equal_when_finite:
                equal += 1
            if sc.pd_big.is_finite and not (sc.pd_small.is_finite and sc.pd_small.value == sc.pd_big.value):
                failures.append(("equal", name, str(sc.pd_big), str(sc.pd_small)))
            if sc.monotone is False:
                failures.append(("monotone", name))
    determined = 0
    not_split = []
    for name in FIXTURES:
        fx = get_fixture(name)
        cp = build_crossed_product(fx.ps)
        S = _sylow(fx.group, fx.algebra.field)
        try:
            whole = gldim(cp.algebra, 12).status
            syl = gldim(restrict_to_subgroup(cp, S).algebra, 12).status
        except NotSplit:
            # simples over a non-split field are out of reach of the resolution code
            not_split.append(name)
            continue
        if name == "s3_dual_gf5" and not (whole.determined and syl.determined):
            failures.append(("s3 undetermined", name))
        if whole.determined and syl.determined:
            determined += 1
            if whole.kind != syl.kind or (whole.is_finite and whole.value != syl.value):
                failures.append(("sylow", name, str(whole), str(syl)))
    ok = not failures and checked >= 20
    verdict(capsys, 6, "restriction and Sylow comparisons", ok, f"{checked} modules, {equal} finite pairs, {determined} gldim pairs, not split: {not_split}" + (f", failed: {failures}" if failures else ""))


# -- 7: normalization to a skew group ring ------------------------------------------------------------


def test_criterion_07_normalization(capsys):
    failures = []
    names = ["gf4_c2", "gf4_c4", "gf4_c2xc2", "gf3_c3"]
    for name in names:
        fx = get_fixture(name)
        A, G = fx.algebra, fx.group
        S = _sylow(G, A.field)
        data = normalize_to_skew(fx.ps, S, fx.domain)
        n_s = len(data.elements)
        roots = all(np.array_equal(A.power(data.u[k], n_s), data.h[k]) for k in data.u)
        fixed = all(np.array_equal(data.source.apply(y, data.u[k]), data.u[k]) for k in data.u for y in range(n_s))
        old = build_crossed_product(data.source)
        new = build_crossed_product(data.result)
        T = basis_change_matrix(old, [try_inverse(A, data.u[k]) for k in range(n_s)])
        match = structure_constants_match(old, new, T)
        if not (data.result.is_skew() and roots and fixed and data.roots_verified and data.fixed_verified and match):
            failures.append(name)
    verdict(capsys, 7, "normalization to a skew group ring", not failures, f"{len(names)} fixtures" + (f", failed: {failures}" if failures else ""))


# -- 8: free actions ------------------------------------------------------------------------------------


def test_criterion_08_free_action(capsys):
    failures = []
    names = [n for n in FIXTURES if get_fixture(n).free]
    for name in names:
        fx = get_fixture(name)
        cp = build_crossed_product(fx.ps)
        E = fx.idempotents
        rep = matrix_algebra_certificate(cp, E)
        n = fx.group.order
        if not (rep.ok and cp.dim == n * n * rep.corner_dim):
            failures.append(("matrix", name))
        if not all(orbit_idempotent_isomorphism(cp, e, x).ok for e in E for x in range(n)):
            failures.append(("orbit", name))
        if not all(fixed_algebra_free_module_check(fx.ps, E, x).ok for x in range(n)):
            failures.append(("fixed", name))
    ok = len(names) >= 3 and not failures
    verdict(capsys, 8, "free action certificates", ok, f"{names}" + (f", failed: {failures}" if failures else ""))


# -- 9: minimal complexes -----------------------------------------------------------------------------------


def test_criterion_09_minimalization(capsys):
    rng = np.random.default_rng(9)
    failures = []
    counts = {"random": 0, "resolutions": 0}
    for name in ("two_cycle", "cospan", "three_cycle_gf3", "s3_dual_gf5", "four_cycle"):
        fx = get_fixture(name)
        for R in (fx.algebra, build_crossed_product(fx.ps).algebra):
            idems = split_structure(R).idempotents
            for _ in range(3):
                P = random_complex(R, idems, [2, 3, 2], rng, start=-1)
                m = minimalize(P)
                again = minimalize(m.complex)
                checks = m.verify(P)
                counts["random"] += 1
                if not all(checks.values()) or again.steps != 0 or not is_minimal(m.complex):
                    failures.append(("random", name, checks, again.steps))
            for S in simple_modules(R):
                st = pd(S, 12).status
                if st.is_finite:
                    counts["resolutions"] += 1
                    L = metrics(minimalize(resolution_complex(S, st.value + 1)).complex).amplitude
                    if L != st.value:
                        failures.append(("length", name, L, st.value))
    fx = get_fixture("two_cycle")
    S = simple_module(fx.algebra, 0)
    for w in (1, 2, 3, 5):
        L = metrics(minimalize(resolution_complex(S, w + 1)).complex).amplitude
        if L != w:
            failures.append(("truncation", w, L))
    cp = build_crossed_product(fx.ps)
    down = minimalize(resolution_complex(S, 4)).complex
    if not is_minimal(induce_complex(down, cp.algebra, cp.base_embedding())):
        failures.append(("induced", "two_cycle"))
    ok = not failures and counts["resolutions"] >= 1
    verdict(capsys, 9, "minimalization", ok, f"{counts}" + (f", failed: {failures}" if failures else ""))


# -- 10: determinism ----------------------------------------------------------------------------------------


def test_criterion_10_determinism(capsys):
    differing = []
    for path in WORKSPACES:
        cmd = [sys.executable, "-m", "crossalg.cli", "report", str(path), "--seed", "7"]
        runs = [subprocess.run(cmd, capture_output=True, check=False) for _ in range(2)]
        if not (runs[0].stdout and runs[0].stdout == runs[1].stdout and runs[0].returncode == runs[1].returncode == 0):
            differing.append((path.stem, runs[0].returncode, runs[1].returncode))
    ok = len(WORKSPACES) >= 2 and not differing
    verdict(capsys, 10, "report is byte-identical across runs", ok, f"{len(WORKSPACES)} workspaces" + (f", differing: {differing}" if differing else ""))
