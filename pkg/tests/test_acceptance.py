"""Acceptance suite: one test per criterion, each printing a PASS line
with its measured scope.  Run with `pytest -s tests/test_acceptance.py`
to see the lines; any failure fails the suite."""

import json
import random
import time
from pathlib import Path

from conftest import (all_antichains, all_onestep_formulas, random_query,
                      sig_mods)

from wsikit import (Mod, OneStepFormula, build_onestep_wsi_generic, build_wsi,
                    check_convexity_preservation, one_step_consequence,
                    parse_formula, parse_tbox, signature, size_report,
                    subsumes, subsumes_tbox)
from wsikit.builder import AbstractWsiModel
from wsikit.formulas import And, Atom, Modal, Or, atoms, conj
from wsikit.onestep import antichain_to_posprop
from wsikit.oracle import (brute_consequence, enumerate_models, ext_of,
                           find_counter_model, greatest_simulation,
                           is_simulation, verify_wsi)
from wsikit.oracle.fastkripke import depth1_counter_sweep, tbox_counter_sweep
from wsikit.tboxes import tbox_to_nu

ELD = signature("k-diamond")
ELB = signature("k-box")
K = signature("k")
KD = signature("kd")
M = signature("m")
MS = signature("ms")
CL2 = signature("cl:2")
GR = signature("graded")

DIA, BOX = Mod.dia(), Mod.box()
DATA = Path(__file__).parent / "data"


def report(criterion, started, detail):
    print(f"\nACCEPTANCE {criterion}: PASS "
          f"({time.time() - started:.1f}s) - {detail}")


def pf(text, sig):
    return parse_formula(text, sig)


def sets(xs):
    return {frozenset(s) for s in xs}


def test_c01_featured_model_reproduction():
    t0 = time.time()
    m1 = build_onestep_wsi_generic(
        OneStepFormula.of((DIA, "p"), (DIA, "q"), (DIA, "r")), ELD)
    assert sets(m1.states) == sets([{"p"}, {"q"}, {"r"}])
    m2 = build_onestep_wsi_generic(
        OneStepFormula.of((DIA, "p"), (DIA, "q"), (BOX, "r"), (BOX, "s")),
        KD)
    assert sets(m2.states) == sets([{"p", "r", "s"}, {"q", "r", "s"},
                                    {"r", "s"}])
    m3 = build_onestep_wsi_generic(
        OneStepFormula.of((BOX, "p"), (BOX, "q"), (DIA, "r"), (DIA, "s")),
        MS)
    assert sets(m3.states) == sets([set(), {"p"}, {"q"}, {"r"}, {"s"},
                                    {"p", "r"}, {"p", "s"}, {"q", "r"},
                                    {"q", "s"}])
    assert {frozenset(nb) for nb in m3.min_neighbourhoods} == {
        frozenset({frozenset({"p"}), frozenset({"p", "r"}),
                   frozenset({"p", "s"})}),
        frozenset({frozenset({"q"}), frozenset({"q", "r"}),
                   frozenset({"q", "s"})}),
        frozenset({frozenset(), frozenset({"r"}), frozenset({"s"})})}

    # the same sets through the whole-formula pipeline, as atom labels of
    # the root's one-step states
    def root_labels(text, sig):
        m = build_wsi(pf(text, sig), sig)
        return {frozenset(m.states[j].atoms)
                for j in m.states[m.root].successors}

    assert root_labels("<>p & <>q & <>r", ELD) == \
        sets([{"p"}, {"q"}, {"r"}])
    assert root_labels("<>p & <>q & []r & []s", KD) == \
        sets([{"p", "r", "s"}, {"q", "r", "s"}, {"r", "s"}])
    assert root_labels("[]p & []q & <>r & <>s", MS) == \
        sets([set(), {"p"}, {"q"}, {"r"}, {"s"}, {"p", "r"}, {"p", "s"},
              {"q", "r"}, {"q", "s"}])
    assert time.time() - t0 < 1.0
    report(1, t0, "three featured one-step models reproduced exactly")


def test_c02_convexity_preservation_verdicts():
    t0 = time.time()
    for logic in ("kd", "ms", "cl:2", "cl:3"):
        assert check_convexity_preservation(signature(logic), 6) is None
    ce = check_convexity_preservation(K, 3)
    assert ce is not None
    assert ce.rule.schema_id.startswith("K_")
    assert ce.missing.schema_id.startswith("D_")
    assert time.time() - t0 < 1.0
    report(2, t0, "kd/ms/cl:2/cl:3 preserve at bound 6; full Kripke "
                  f"fails: {ce}")


def test_c03_nonconvexity_suite():
    t0 = time.time()
    # (a) graded diamonds, multigraph search
    lhs = pf("<>_1 a & <>_1 b", GR)
    d1, d2 = pf("<>_2 (a|b)", GR), pf("<>_1 (a&b)", GR)
    assert find_counter_model(lhs, d1, GR, 3) is not None
    assert find_counter_model(lhs, d2, GR, 3) is not None
    assert find_counter_model(lhs, Or(d1, d2), GR, 3) is None
    # (b) graded boxes (value restrictions with one exception), Kripke
    four = pf("[]_1 (a & b) & []_1 (b & c) & []_1 (c & d) & []_1 (d & a)",
              GR)
    djs = [pf(t, GR) for t in ("[]_1 (a & b & c)", "[]_1 (b & c & d)",
                               "[]_1 (c & d & a)", "[]_1 (d & a & b)")]
    props = ("a", "b", "c", "d")
    for d in djs:
        hit = depth1_counter_sweep(four, d, K, 4, props)
        assert hit is not None
        assert ext_of(hit, four) & 1 and not ext_of(hit, d) & 1
    full = djs[0]
    for d in djs[1:]:
        full = Or(full, d)
    assert depth1_counter_sweep(four, full, K, 4, props) is None
    # (c) plain modal logic without seriality
    assert find_counter_model(pf("true", K), pf("[]<>true", K), K, 4)
    assert find_counter_model(pf("true", K), pf("<>true", K), K, 4)
    assert time.time() - t0 < 60
    report(3, t0, "each disjunct refuted individually; full disjunctions "
                  "confirmed at envelope bounds")


def _corpus(rng, sig, n_conj, n_nu):
    """Conjunctive formulas of modal depth <= 3 with <= 3 atom
    occurrences, plus shallow fixpoint sentences with <= 3 equations."""
    mods = sig_mods(sig)

    def conj_formula(props, depth, budget):
        parts = []
        for _ in range(rng.randint(1, 2)):
            if depth == 0 or (budget[0] > 0 and rng.random() < 0.3):
                if budget[0] > 0:
                    budget[0] -= 1
                    parts.append(Atom(rng.choice(props)))
            else:
                parts.append(Modal(rng.choice(mods),
                                   conj_formula(props, depth - 1, budget)))
        return conj(parts)

    out = []
    while len(out) < n_conj:
        props = ["p"] if len(out) % 3 else ["p", "q"]
        if len(out) % 11 == 0:
            props = ["p", "q", "r"]
        f = conj_formula(props, rng.randint(1, 3), [3])
        out.append(f)
    nus = []
    from wsikit.formulas import Nu, Var
    while len(nus) < n_nu:
        names = [f"v{i}" for i in range(rng.randint(1, 3))]
        props = ["p"] if len(nus) % 2 else ["p", "q"]
        bodies = []
        for _ in names:
            parts = []
            for _ in range(rng.randint(1, 2)):
                if rng.random() < 0.4:
                    parts.append(Atom(rng.choice(props)))
                else:
                    parts.append(Modal(rng.choice(mods),
                                       Var(rng.choice(names))))
            bodies.append(conj(parts))
        nus.append(Nu(names[0], tuple(names[1:]), bodies[0],
                      tuple(bodies[1:])))
    return out, nus


CORPUS_MODELS: list[AbstractWsiModel] = []


def _build_corpus_models():
    if CORPUS_MODELS:
        return 0, 0
    rng = random.Random(2024)
    total_conj = total_nu = 0
    for sig in (ELD, ELB, KD, MS):
        conjs, nus = _corpus(rng, sig, 55, 13)
        total_conj += len(conjs)
        total_nu += len(nus)
        for f in conjs + nus:
            CORPUS_MODELS.append((f, build_wsi(f, sig)))
    return total_conj, total_nu


def test_c04_wsi_soundness_and_initiality():
    t0 = time.time()
    total_conj, total_nu = _build_corpus_models()
    checked = 0
    for f, m in CORPUS_MODELS:
        bound = 2 if m.sig.kind == "monotone" else 3
        rep = verify_wsi(m, f, bound)
        assert rep.ok, (m.sig.id, str(f), rep.summary())
        checked += rep.models_checked
    took = time.time() - t0
    assert total_conj >= 200 and total_nu >= 50
    assert took < 600
    report(4, t0, f"{total_conj} conjunctive + {total_nu} fixpoint inputs "
                  f"verified against {checked} pointed models; "
                  "zero violations")


def test_c05_onestep_consequence_oracle_equivalence():
    t0 = time.time()
    variables = ["a", "b", "c"]
    rhos = [(antichain_to_posprop(c), c) for c in all_antichains(variables)]
    queries = disagreements = 0
    for logic in ("k-diamond", "k-box", "kd", "m", "ms"):
        sig = signature(logic)
        mods = sig_mods(sig)
        for psi in all_onestep_formulas(sig, variables, 3):
            for heart in mods:
                for rho, chain in rhos:
                    queries += 1
                    got = one_step_consequence(psi, heart, rho, sig)
                    want = brute_consequence(psi, heart, chain, sig, 3)
                    if got != want:
                        disagreements += 1
    took = time.time() - t0
    assert disagreements == 0
    assert took < 300
    report(5, t0, f"{queries} consequence queries against brute force "
                  "at three carrier states; zero disagreements")


def test_c06_simulation_lemma_suite():
    t0 = time.time()
    rng = random.Random(99)
    kpool3 = list(enumerate_models(K, 3, ("p",)))
    kpool2 = list(enumerate_models(K, 2, ("p",)))
    mpool2 = list(enumerate_models(M, 2, ("p",)))
    checked = 0
    # identity containment
    for m in kpool3[::19] + mpool2[::5]:
        sig = K if isinstance(m, type(kpool3[0])) else M
        rel = greatest_simulation(m, m, sig)
        assert frozenset((i, i) for i in range(m.n)) <= rel.pairs
        checked += 1
    # composition stability
    for _ in range(200):
        c, d, e = (rng.choice(kpool2) for _ in range(3))
        s1 = greatest_simulation(c, d, K)
        s2 = greatest_simulation(d, e, K)
        assert is_simulation(s1.compose(s2), c, e, K)
        checked += 1
    for _ in range(80):
        c, d, e = (rng.choice(mpool2) for _ in range(3))
        s1 = greatest_simulation(c, d, M)
        s2 = greatest_simulation(d, e, M)
        assert is_simulation(s1.compose(s2), c, e, M)
        checked += 1
    # preservation along related pairs
    queries_k = [random_query(rng, K, ["p"], 3) for _ in range(10)]
    queries_k.append(pf("nu(x;).(p & <>x)", K))
    queries_m = [random_query(rng, M, ["p"], 2) for _ in range(8)]
    for pool, sig, queries in ((kpool3, K, queries_k),
                               (mpool2, M, queries_m)):
        for _ in range(150):
            c, d = rng.choice(pool), rng.choice(pool)
            rel = greatest_simulation(c, d, sig)
            for q in queries:
                ec, ed = ext_of(c, q), ext_of(d, q)
                for x, y in rel.pairs:
                    assert not (ec >> x & 1) or (ed >> y & 1)
            checked += 1
    # duality on the pure modal part
    atomfree = list(enumerate_models(K, 2, ()))
    for c in atomfree:
        for d in atomfree:
            assert greatest_simulation(c, d, ELB).pairs == \
                greatest_simulation(d, c, ELD).inverse().pairs
            checked += 1
    took = time.time() - t0
    assert took < 300
    report(6, t0, f"identity/composition/preservation/duality over "
                  f"{checked} checked instances; zero violations")


def test_c07_size_bounds_and_lassos():
    t0 = time.time()
    _build_corpus_models()
    from math import comb
    checked = 0
    for _, m in CORPUS_MODELS:
        n1 = len(m.system.variables)
        sr = size_report(m)
        if m.sig.id == "k-diamond":
            assert all(len(s.vars) <= 1 for s in m.states)
            assert sr.states <= n1 + 1
            assert sr.polynomial_certificate and sr.certified_k == 1
            assert sr.states <= sum(comb(n1, j) for j in range(2))
        elif m.sig.id == "ms":
            assert sr.certified_k == 2 and sr.polynomial_certificate
            assert sr.states <= sum(comb(n1, j) for j in range(3))
        elif m.sig.id == "k-box":
            assert sr.lasso
        checked += 1
    # coalition corpus avoiding the empty-coalition box and the grand
    # coalition diamond
    rng = random.Random(5)
    for _ in range(20):
        parts = []
        for _ in range(rng.randint(1, 3)):
            coal = rng.choice([{1}, {2}])
            parts.append(Modal(Mod.cbox(coal), Atom(rng.choice("pq"))))
        m = build_wsi(conj(parts), CL2)
        sr = size_report(m)
        n1 = len(m.system.variables)
        assert sr.polynomial_certificate and sr.certified_k == 2
        assert sr.states <= sum(comb(n1, j) for j in range(3))
        checked += 1
    report(7, t0, f"state budgets and lasso shapes hold on {checked} "
                  "corpus models")


def test_c08_named_subsumption_verdicts():
    t0 = time.time()
    assert subsumes(pf("true", KD), pf("<>true", KD), KD)
    assert subsumes(pf("true", MS), pf("[]true", MS), MS)
    assert subsumes(pf("true", MS), pf("<>true", MS), MS)
    # plain modal logic: refuted by the deadlock
    hit = find_counter_model(pf("true", K), pf("<>true", K), K, 4)
    assert hit is not None and hit[0].n == 1 and hit[0].succ[hit[1]] == 0
    # coalition superadditivity, cross-checked by exhaustive game search
    assert subsumes(pf("[{1}]p & [{2}]q", CL2), pf("[{1,2}](p & q)", CL2),
                    CL2)
    assert find_counter_model(pf("[{1}]p & [{2}]q", CL2),
                              pf("[{1,2}](p & q)", CL2), CL2, 2,
                              max_degree=2) is None
    # a coalition can maintain an invariant forever
    assert subsumes(pf("nu(x;).(p & [{1}]x)", CL2),
                    pf("nu(x;).([{1}]x)", CL2), CL2)
    took = time.time() - t0
    assert took < 30
    report(8, t0, "serial validities, deadlock refutation, "
                  "superadditivity (game-search confirmed), invariant "
                  "maintenance")


def test_c09_terminology_gfp_agreement():
    t0 = time.time()
    entries = json.loads((DATA / "tbox_regression.json").read_text())
    assert len(entries) == 10
    pairs = 0
    for entry in entries:
        t = parse_tbox("\n".join(entry["tbox"]), ELD)
        assert len(t.definitions) <= 2
        for lhs_text, rhs_text, expected in entry["queries"]:
            lhs, rhs = pf(lhs_text, ELD), pf(rhs_text, ELD)
            got = subsumes_tbox(t, lhs, rhs, ELD)
            lhs_enc, rhs_enc = tbox_to_nu(t, lhs, rhs)
            props = tuple(sorted((atoms(lhs_enc) | atoms(rhs_enc))
                                 - set(t.derived)))
            confirmed = tbox_counter_sweep(
                list(t.definitions), lhs, rhs, ELD, 4, props) is None
            assert got == confirmed == expected, \
                (entry["tbox"], lhs_text, rhs_text)
            pairs += 1
    cyclic = any(e["tbox"] == ["a == p & <>a"] for e in entries)
    assert cyclic
    took = time.time() - t0
    assert took < 120
    report(9, t0, f"{pairs} query pairs agree with the four-state "
                  "greatest-fixpoint oracle")


def test_c10_serial_convexity_commitment():
    t0 = time.time()
    rng = random.Random(77)
    props = ["p", "q"]
    mods = [DIA, BOX]

    def conjunctive(depth):
        parts = []
        for _ in range(rng.randint(1, 3)):
            if depth == 0 or rng.random() < 0.4:
                parts.append(Atom(rng.choice(props)))
            else:
                parts.append(Modal(rng.choice(mods), conjunctive(depth - 1)))
        return conj(parts)

    def weaken(f):
        if rng.random() < 0.3:
            return Or(f, Atom(rng.choice(props)))
        if isinstance(f, And):
            return And(weaken(f.l), f.r) if rng.random() < 0.5 else f.l
        if isinstance(f, Modal) and rng.random() < 0.5:
            return Modal(f.mod, weaken(f.arg))
        return f

    hits = violations = 0
    attempts = 0
    while hits < 100 and attempts < 3000:
        attempts += 1
        phi = conjunctive(2)
        if attempts % 2:
            psi1 = random_query(rng, KD, props, 2)
            psi2 = weaken(phi)
        else:
            psi1 = random_query(rng, KD, props, 2)
            psi2 = random_query(rng, KD, props, 2)
        if not subsumes(phi, Or(psi1, psi2), KD):
            continue
        hits += 1
        if not (subsumes(phi, psi1, KD) or subsumes(phi, psi2, KD)):
            violations += 1
    took = time.time() - t0
    assert hits >= 100
    assert violations == 0
    assert took < 120
    report(10, t0, f"{hits} subsumed disjunctions each commit to a "
                   "disjunct; zero violations")
