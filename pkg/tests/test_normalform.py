import pytest

from wsikit import (Mod, parse_formula, print_formula, shallow_normal_form,
                    signature)
from wsikit.formulas import FragmentError, walk
from wsikit.normalform import reconstitute
from wsikit.onestep import OneStepFormula
from wsikit.oracle import enumerate_models, ext_of
from wsikit.oracle.fastkripke import agree_sweep

ELD = signature("k-diamond")
KD = signature("kd")
MS = signature("ms")


def body_map(system):
    return dict(zip(system.variables, system.bodies))


class TestShape:
    def test_nested_modalities_get_abbreviations(self):
        sys_ = shallow_normal_form(parse_formula("<>(p & <>q)", ELD), ELD)
        b = body_map(sys_)
        assert sys_.variables == ("x0", "x1", "x2")
        assert b["x0"] == OneStepFormula.of((Mod.dia(), "x1"))
        assert b["x1"] == OneStepFormula.of((Mod.dia(), "x2"), props=["p"])
        assert b["x2"] == OneStepFormula(frozenset(), frozenset({"q"}))

    def test_already_shallow_loop(self):
        sys_ = shallow_normal_form(parse_formula("nu(x;).(p & <>x)", ELD),
                                   ELD)
        assert sys_.variables == ("x0",)
        assert sys_.bodies[0] == OneStepFormula.of((Mod.dia(), "x0"),
                                                   props=["p"])

    def test_nested_blocks_merge(self):
        f = parse_formula("nu(x;).(<>nu(y;).(q & []y) & p)", KD)
        sys_ = shallow_normal_form(f, KD)
        assert len(sys_.variables) == 2
        b = body_map(sys_)
        assert b["x0"] == OneStepFormula.of((Mod.dia(), "x1"), props=["p"])
        assert b["x1"] == OneStepFormula.of((Mod.box(), "x1"), props=["q"])

    def test_bare_variable_body_inlines(self):
        f = parse_formula("nu(x;y).(y; p & <>y)", ELD)
        b = body_map(shallow_normal_form(f, ELD))
        assert b["x0"] == b["x1"] == OneStepFormula.of((Mod.dia(), "x1"),
                                                       props=["p"])

    def test_pure_variable_cycle_is_unconstrained(self):
        f = parse_formula("nu(x;).(x)", ELD)
        sys_ = shallow_normal_form(f, ELD)
        assert sys_.bodies[0] == OneStepFormula(frozenset())

    def test_top_formula(self):
        sys_ = shallow_normal_form(parse_formula("true", KD), KD)
        assert sys_.variables == ("x0",)
        assert sys_.bodies[0] == OneStepFormula(frozenset())

    def test_size_linear(self):
        f = parse_formula("<>(p & <>(q & <>(r & <>p)))", ELD)
        sys_ = shallow_normal_form(f, ELD)
        nodes = sum(1 for _ in walk(f))
        assert len(sys_.variables) <= nodes + 1

    def test_rejects_non_conjunctive(self):
        with pytest.raises(FragmentError):
            shallow_normal_form(parse_formula("<>p | <>q", ELD), ELD)
        with pytest.raises(FragmentError):
            shallow_normal_form(parse_formula("mu(x;).(<>x)", ELD), ELD)

    def test_rejects_open_formula(self):
        from wsikit.formulas import Var
        with pytest.raises(FragmentError):
            shallow_normal_form(Var("x"), ELD)

    def test_deterministic_variable_order(self):
        f = parse_formula("<>(p & <>q) & <>r", ELD)
        s1 = shallow_normal_form(f, ELD)
        s2 = shallow_normal_form(f, ELD)
        assert s1 == s2
        assert s1.variables == ("x0", "x1", "x2", "x3")


SEMANTIC_CASES = [
    ("<>(p & <>q)", "k-diamond"),
    ("<>p & <>q & <>(p & q)", "k-diamond"),
    ("nu(x;).(p & <>x)", "k-diamond"),
    ("[](p & []q)", "k-box"),
    ("nu(x;).(<>nu(y;).(q & []y) & p)", "kd"),
    ("<>p & [](q & <>p)", "kd"),
    ("nu(x;y).([]x & <>y; <>x & p)", "kd"),
]


class TestSemanticEquivalence:
    @pytest.mark.parametrize("text,logic", SEMANTIC_CASES)
    def test_reconstituted_system_equisatisfied_kripke(self, text, logic):
        """Extensions of the input and of the flattened system's sentence
        agree on every Kripke model up to four states."""
        sig = signature(logic)
        f = parse_formula(text, sig)
        g = reconstitute(shallow_normal_form(f, sig))
        props = tuple(sorted({a.name for _, a in walk(f)
                              if a.__class__.__name__ == "Atom"}))
        assert agree_sweep(f, g, sig, 4, props) is None

    @pytest.mark.parametrize("text", [
        "[]p & <>q",
        "nu(x;).([]x & <>p)",
        "[](p & <>q)",
    ])
    def test_reconstituted_system_equisatisfied_monotone(self, text):
        f = parse_formula(text, MS)
        g = reconstitute(shallow_normal_form(f, MS))
        props = ("p", "q")
        for m in enumerate_models(MS, 2, props):
            assert ext_of(m, f) == ext_of(m, g), print_formula(g)
