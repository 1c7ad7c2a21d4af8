import pytest
from conftest import all_onestep_formulas, posprop_pool

from wsikit import (Mod, OneStepFormula, build_onestep_wsi_generic,
                    build_onestep_wsi_special, classify,
                    one_step_consequence, signature)
from wsikit.onestep_wsi import ConvexityError
from wsikit.oracle import (onestep_initiality_violations,
                           onestep_materialization_violations)
from wsikit.signatures import SignatureError, fused_kripke

ELD = signature("k-diamond")
ELB = signature("k-box")
KD = signature("kd")
MS = signature("ms")
CL2 = signature("cl:2")
DIA, BOX = Mod.dia(), Mod.box()


def states(m):
    return {frozenset(s) for s in m.states}


class TestFeaturedConstructions:
    def test_three_diamonds(self):
        m = build_onestep_wsi_generic(
            OneStepFormula.of((DIA, "p"), (DIA, "q"), (DIA, "r")), ELD)
        assert states(m) == {frozenset({"p"}), frozenset({"q"}),
                             frozenset({"r"})}

    def test_serial_mixed(self):
        m = build_onestep_wsi_generic(
            OneStepFormula.of((DIA, "p"), (DIA, "q"), (BOX, "r"),
                              (BOX, "s")), KD)
        assert states(m) == {frozenset({"p", "r", "s"}),
                             frozenset({"q", "r", "s"}),
                             frozenset({"r", "s"})}

    def test_boxes_collapse_to_one_state(self):
        m = build_onestep_wsi_generic(
            OneStepFormula.of((BOX, "a1"), (BOX, "a2")), ELB)
        assert states(m) == {frozenset({"a1", "a2"})}

    def test_serial_monotone_grid(self):
        m = build_onestep_wsi_generic(
            OneStepFormula.of((BOX, "p"), (BOX, "q"), (DIA, "r"),
                              (DIA, "s")), MS)
        expect = {frozenset(), frozenset({"r"}), frozenset({"s"}),
                  frozenset({"p"}), frozenset({"p", "r"}),
                  frozenset({"p", "s"}), frozenset({"q"}),
                  frozenset({"q", "r"}), frozenset({"q", "s"})}
        assert states(m) == expect
        fams = {frozenset(nb) for nb in m.min_neighbourhoods}
        assert fams == {
            frozenset({frozenset({"p"}), frozenset({"p", "r"}),
                       frozenset({"p", "s"})}),
            frozenset({frozenset({"q"}), frozenset({"q", "r"}),
                       frozenset({"q", "s"})}),
            frozenset({frozenset(), frozenset({"r"}), frozenset({"s"})}),
        }


class TestEdgeCases:
    def test_empty_conjunction_diamond_only_has_no_states(self):
        m = build_onestep_wsi_generic(OneStepFormula.of(), ELD)
        assert states(m) == set()

    def test_empty_conjunction_serial_has_empty_state(self):
        for sig in (KD, MS):
            m = build_onestep_wsi_generic(OneStepFormula.of(), sig)
            assert states(m) == {frozenset()}

    def test_empty_conjunction_box_only(self):
        m = build_onestep_wsi_generic(OneStepFormula.of(), ELB)
        assert states(m) == {frozenset()}

    def test_coalition_empty_state_is_kept(self):
        m = build_onestep_wsi_generic(
            OneStepFormula.of((Mod.cbox({1}), "p"), (Mod.cbox({2}), "q")),
            CL2)
        assert frozenset() in states(m)
        assert frozenset({"p", "q"}) in states(m)

    def test_unsupported_signatures_refused(self):
        with pytest.raises(SignatureError):
            build_onestep_wsi_generic(OneStepFormula.of(),
                                      signature("graded"))
        with pytest.raises(ConvexityError):
            build_onestep_wsi_generic(OneStepFormula.of((DIA, "p")),
                                      signature("k"))
        with pytest.raises(ConvexityError):
            build_onestep_wsi_generic(OneStepFormula.of((DIA, "p")),
                                      signature("m"))


class TestClassify:
    def test_diamonds_linear_one_bounded(self):
        m = build_onestep_wsi_generic(
            OneStepFormula.of((DIA, "p"), (DIA, "q"), (DIA, "r")), ELD)
        c = classify(m)
        assert c.linear and c.bound == 1

    def test_monotone_two_bounded_not_linear(self):
        m = build_onestep_wsi_generic(
            OneStepFormula.of((BOX, "p"), (BOX, "q"), (DIA, "r"),
                              (DIA, "s")), MS)
        c = classify(m)
        assert not c.linear and c.bound == 2

    def test_coalition_bounded_by_agents(self):
        m = build_onestep_wsi_generic(
            OneStepFormula.of((Mod.cbox({1}), "a"), (Mod.cbox({2}), "b")),
            CL2)
        assert classify(m).bound <= 2

    def test_box_fragment_linear(self):
        m = build_onestep_wsi_generic(
            OneStepFormula.of((BOX, "a"), (BOX, "b")), ELB)
        assert classify(m).linear


class TestGenericSpecialAgreement:
    @pytest.mark.parametrize("logic", ["k-diamond", "k-box", "kd", "ms"])
    def test_state_sets_equal(self, logic):
        sig = signature(logic)
        for psi in all_onestep_formulas(sig, ["a", "b", "c", "d"], 4):
            g = build_onestep_wsi_generic(psi, sig)
            s = build_onestep_wsi_special(psi, sig)
            assert g.state_set() == s.state_set(), str(psi)
            if sig.id == "ms":
                assert set(g.min_neighbourhoods) == \
                    set(s.min_neighbourhoods), str(psi)


class TestConstructionProperties:
    """Materialization: the concrete transition satisfies exactly the
    entailed literals.  Initiality: every small model of the formula
    simulates the construction along valuation inclusion."""

    @pytest.mark.parametrize("logic", ["k-diamond", "k-box", "kd", "ms"])
    def test_materialization_and_initiality(self, logic):
        sig = signature(logic)
        rhos = posprop_pool(["a", "b"])
        for psi in all_onestep_formulas(sig, ["a", "b"], 3):
            m = build_onestep_wsi_generic(psi, sig)
            assert onestep_materialization_violations(
                m, rhos, sig, one_step_consequence) == []
            assert onestep_initiality_violations(m, 2) == []

    def test_unrestricted_matches_same_theory(self):
        """Keeping non-maximal matches grows the state set but leaves the
        decided theory unchanged: the same queries hold at the root of
        models built either way."""
        from wsikit import build_wsi, model_check, parse_formula
        sig = KD
        inputs = ["<>p & []q", "[]p & []q & <>r", "nu(x;).(p & <>x & []x)",
                  "<>p & <>q", "true"]
        queries = ["<>p", "[]q", "<>(p & q)", "[](p | q)", "<>true",
                   "<>[]p", "[]<>q", "nu(y;).(<>y)", "p", "[]false"]
        for text in inputs:
            f = parse_formula(text, sig)
            tight = build_wsi(f, sig, maximal=True)
            full = build_wsi(f, sig, maximal=False)
            assert {s.vars for s in tight.states} <= \
                {s.vars for s in full.states}
            for q in queries:
                qf = parse_formula(q, sig)
                assert model_check(tight, tight.root, qf) == \
                    model_check(full, full.root, qf), (text, q)


class TestFusion:
    def test_disjoint_union_of_relations(self):
        fsig = fused_kripke(1, 1)
        dia0, box1 = Mod.dia(0), Mod.box(1)
        fused = build_onestep_wsi_generic(
            OneStepFormula.of((dia0, "a"), (dia0, "b"), (box1, "c"),
                              (box1, "d")), fsig)
        left = build_onestep_wsi_generic(
            OneStepFormula.of((DIA, "a"), (DIA, "b")), ELD)
        right = build_onestep_wsi_generic(
            OneStepFormula.of((BOX, "c"), (BOX, "d")), ELB)
        assert states(fused) == states(left) | states(right)

    def test_two_diamond_relations(self):
        fsig = fused_kripke(2, 0)
        fused = build_onestep_wsi_generic(
            OneStepFormula.of((Mod.dia(0), "a"), (Mod.dia(1), "b")), fsig)
        assert states(fused) == {frozenset({"a"}), frozenset({"b"})}
